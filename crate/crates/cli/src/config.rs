use ncps_num::ThetaMatrix;

use crate::error::CliError;
use crate::family::FamilySpec;

pub const DEFAULT_THETA: f64 = 0.37;
pub const DEFAULT_SEED: u64 = 20_240_611;

/// Flags shared by `verify` and the raw commands. `None` means "use the
/// check's default", which the report then echoes.
#[derive(Clone, Debug, Default)]
pub struct CheckConfig {
    pub dim: Option<usize>,
    pub t_order: Option<u32>,
    pub floor: Option<i32>,
    pub cutoff: Option<i64>,
    /// Upper-triangle entries of Θ, row by row.
    pub theta: Option<Vec<f64>>,
    pub u: Option<Vec<i64>>,
    pub grid: Option<usize>,
    pub level: Option<f64>,
    pub seed: Option<u64>,
    pub family: Option<FamilySpec>,
}

/// `"1,0,0"` or `"1 0 0"`.
pub fn parse_list<T: std::str::FromStr>(flag: &'static str, text: &str) -> Result<Vec<T>, CliError>
where
    T::Err: std::fmt::Display,
{
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<T>().map_err(|e| CliError::flag(flag, format!("{:?}: {}", s, e))))
        .collect()
}

/// Θ from its upper-triangle entries. A single value in dimension 3 means
/// `θ_12` alone.
pub fn theta_matrix(entries: &[f64], dim: usize) -> Result<ThetaMatrix, CliError> {
    let pairs: Vec<(usize, usize)> = (0..dim).flat_map(|i| (i + 1..dim).map(move |j| (i, j))).collect();
    if entries.len() == 1 {
        return Ok(ThetaMatrix::planar(dim, entries[0]));
    }
    if entries.len() != pairs.len() {
        return Err(CliError::flag("--theta", format!("expected 1 or {} entries in dimension {}", pairs.len(), dim)));
    }
    let mut m = vec![vec![0.0; dim]; dim];
    for ((i, j), v) in pairs.into_iter().zip(entries) {
        m[i][j] = *v;
        m[j][i] = -*v;
    }
    Ok(ThetaMatrix::new(m)?)
}

impl CheckConfig {
    pub fn theta_or_default(&self, dim: usize) -> Result<(Vec<f64>, ThetaMatrix), CliError> {
        let entries = self.theta.clone().unwrap_or_else(|| vec![DEFAULT_THETA]);
        let m = theta_matrix(&entries, dim)?;
        Ok((entries, m))
    }
}
