use rayon::prelude::*;
use serde::Serialize;

use crate::error::NumError;
use crate::operator::TruncatedOperator;
use crate::spectrum::hermitian_eigenvalues;

/// Counting level. Free Dirac families have kernel at integer shifts, so
/// crossings are counted through a level just below zero.
pub const DEFAULT_FLOW_LEVEL: f64 = -1e-3;
/// Minimum distance between an endpoint eigenvalue and the level.
pub const ENDPOINT_MARGIN: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Crossing {
    pub from: f64,
    pub to: f64,
    /// Net upward crossings in this step.
    pub net: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FlowReport {
    pub flow: i64,
    pub level: f64,
    pub grid_points: usize,
    pub crossings: Vec<Crossing>,
    /// Smallest slack of the coarse-grid test over non-crossing eigenvalues.
    pub min_slack: f64,
}

fn count_below(values: &[f64], level: f64) -> i64 {
    values.partition_point(|v| *v < level) as i64
}

/// Net upward crossings of `level` along the grid.
///
/// Sorted eigenvalues are matched by index between neighbours. A step is
/// refused when some matched eigenvalue keeps its side but stays so close to
/// the level that an operator change of norm `‖T_{j+1} − T_j‖` could carry it
/// across and back (Weyl's inequality).
pub fn spectral_flow<F>(family: F, grid: &[f64], level: f64) -> Result<FlowReport, NumError>
where
    F: Fn(f64) -> Result<TruncatedOperator, NumError> + Sync,
{
    if grid.len() < 2 {
        return Err(NumError::InvalidArgument("flow grid needs at least two points".into()));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(NumError::InvalidArgument("flow grid must be strictly increasing".into()));
    }
    let samples: Vec<(TruncatedOperator, Vec<f64>)> = grid
        .par_iter()
        .map(|t| {
            let op = family(*t)?;
            let values = hermitian_eigenvalues(&op)?;
            Ok((op, values))
        })
        .collect::<Result<_, NumError>>()?;
    for j in [0, grid.len() - 1] {
        if let Some(v) = samples[j].1.iter().find(|v| (**v - level).abs() < ENDPOINT_MARGIN) {
            return Err(NumError::EndpointOnLevel { t: grid[j], value: *v, level });
        }
    }
    let steps: Vec<(i64, f64)> = (0..grid.len() - 1)
        .into_par_iter()
        .map(|j| {
            let (a, va) = &samples[j];
            let (b, vb) = &samples[j + 1];
            if va.len() != vb.len() {
                return Err(NumError::InvalidArgument("operator size changed along the grid".into()));
            }
            let speed = a.distance(b)?;
            let mut slack = f64::INFINITY;
            for (x, y) in va.iter().zip(vb) {
                if (*x < level) == (*y < level) {
                    let s = (x - level).abs() + (y - level).abs() - speed;
                    if s <= 0.0 {
                        return Err(NumError::GridTooCoarse { from: grid[j], to: grid[j + 1], level });
                    }
                    slack = slack.min(s);
                }
            }
            Ok((count_below(va, level) - count_below(vb, level), slack))
        })
        .collect::<Result<_, NumError>>()?;
    let crossings = steps
        .iter()
        .enumerate()
        .filter(|(_, (n, _))| *n != 0)
        .map(|(j, (n, _))| Crossing { from: grid[j], to: grid[j + 1], net: *n })
        .collect();
    Ok(FlowReport {
        flow: steps.iter().map(|(n, _)| n).sum(),
        level,
        grid_points: grid.len(),
        crossings,
        min_slack: steps.iter().map(|(_, s)| *s).fold(f64::INFINITY, f64::min),
    })
}

/// `n` equally spaced points on `[a, b]`.
pub fn uniform_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n < 2 {
        return vec![a];
    }
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}
