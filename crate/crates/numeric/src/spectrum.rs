use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::NumError;
use crate::operator::{block_mean_radius, Repr, TruncatedOperator};
use crate::C64;

/// Relative bound on `‖Tv − λv‖` per eigenpair.
pub const RESIDUAL_BOUND: f64 = 1e-9;
const MAX_SWEEPS: usize = 10_000;

#[derive(Clone, Debug)]
pub struct Spectrum {
    /// Ascending.
    pub values: Vec<f64>,
    /// Columns match `values`.
    pub vectors: DMatrix<C64>,
    pub max_residual: f64,
}

fn residual_check(t: &DMatrix<C64>, values: &[f64], vectors: &DMatrix<C64>) -> Result<f64, NumError> {
    let norm = values.iter().map(|v| v.abs()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let tv = t * vectors;
    let mut worst = 0.0f64;
    for (j, l) in values.iter().enumerate() {
        let r = (tv.column(j) - vectors.column(j) * C64::new(*l, 0.0)).norm();
        worst = worst.max(r);
    }
    let bound = RESIDUAL_BOUND * norm;
    if worst > bound {
        return Err(NumError::Residual { residual: worst, bound });
    }
    Ok(worst)
}

/// Dense Hermitian eigendecomposition, ascending, residual-checked.
pub fn hermitian_eigen_dense(t: DMatrix<C64>) -> Result<(Vec<f64>, DMatrix<C64>), NumError> {
    let s = Spectrum::of_matrix(t)?;
    Ok((s.values, s.vectors))
}

impl Spectrum {
    pub fn of_matrix(t: DMatrix<C64>) -> Result<Spectrum, NumError> {
    let n = t.nrows();
    if n == 0 {
        return Ok(Spectrum { values: vec![], vectors: t, max_residual: 0.0 });
    }
    let eig = SymmetricEigen::try_new(t.clone(), f64::EPSILON, MAX_SWEEPS).ok_or(NumError::NoConvergence(n))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|a, b| eig.eigenvalues[*a].total_cmp(&eig.eigenvalues[*b]));
    let values: Vec<f64> = order.iter().map(|i| eig.eigenvalues[*i]).collect();
    let vectors = eig.eigenvectors.select_columns(&order);
    let max_residual = residual_check(&t, &values, &vectors)?;
    Ok(Spectrum { values, vectors, max_residual })
    }

    pub fn of(op: &TruncatedOperator) -> Result<Spectrum, NumError> {
        Spectrum::of_matrix(op.to_dense())
    }
}

/// Sorted eigenvalues. Block-diagonal operators use the closed 2×2 formula.
pub fn hermitian_eigenvalues(op: &TruncatedOperator) -> Result<Vec<f64>, NumError> {
    match &op.repr {
        Repr::Blocks(blocks) => {
            let mut values = Vec::with_capacity(2 * blocks.len());
            for b in blocks {
                let (mean, rad) = block_mean_radius(b);
                values.push(mean - rad);
                values.push(mean + rad);
            }
            values.sort_by(f64::total_cmp);
            Ok(values)
        }
        Repr::Dense(m) => Ok(hermitian_eigen_dense(m.clone())?.0),
    }
}

/// Eigenvalues of a plain Hermitian matrix.
pub fn matrix_eigenvalues(m: &DMatrix<C64>) -> Result<Vec<f64>, NumError> {
    Ok(hermitian_eigen_dense(m.clone())?.0)
}
