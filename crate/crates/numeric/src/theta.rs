use serde::{Deserialize, Serialize};

use crate::error::NumError;

/// Real skew-symmetric deformation matrix; `U_k U_l = e^{πiΘ(k,l)} U_{k+l}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct ThetaMatrix {
    entries: Vec<Vec<f64>>,
}

impl ThetaMatrix {
    pub fn new(entries: Vec<Vec<f64>>) -> Result<Self, NumError> {
        let n = entries.len();
        if let Some(row) = entries.iter().find(|r| r.len() != n) {
            return Err(NumError::ThetaShape { rows: n, cols: row.len(), dim: n });
        }
        let mut defect = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                defect = defect.max((entries[i][j] + entries[j][i]).abs());
            }
        }
        if defect > 0.0 {
            return Err(NumError::NotSkew(defect));
        }
        Ok(ThetaMatrix { entries })
    }

    pub fn zero(dim: usize) -> Self {
        ThetaMatrix { entries: vec![vec![0.0; dim]; dim] }
    }

    /// Θ with a single pair `θ_{12} = −θ_{21} = theta`.
    pub fn planar(dim: usize, theta: f64) -> Self {
        let mut m = Self::zero(dim);
        m.entries[0][1] = theta;
        m.entries[1][0] = -theta;
        m
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Vec<f64>] {
        &self.entries
    }

    pub fn check_dim(&self, dim: usize) -> Result<(), NumError> {
        if self.dim() == dim {
            Ok(())
        } else {
            Err(NumError::ThetaShape { rows: self.dim(), cols: self.dim(), dim })
        }
    }

    /// `Θ(k, l) = Σ k_i Θ_{ij} l_j`.
    pub fn pairing(&self, k: &[i64], l: &[i64]) -> f64 {
        let mut acc = 0.0;
        for (i, row) in self.entries.iter().enumerate() {
            for (j, th) in row.iter().enumerate() {
                acc += k[i] as f64 * th * l[j] as f64;
            }
        }
        acc
    }
}

impl TryFrom<Vec<Vec<f64>>> for ThetaMatrix {
    type Error = NumError;
    fn try_from(v: Vec<Vec<f64>>) -> Result<Self, NumError> {
        ThetaMatrix::new(v)
    }
}

impl From<ThetaMatrix> for Vec<Vec<f64>> {
    fn from(t: ThetaMatrix) -> Self {
        t.entries
    }
}
