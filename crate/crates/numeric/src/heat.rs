use crate::element::ConcreteElement;
use crate::error::NumError;
use crate::lattice::ModeBox;
use crate::operator::{kron_spinor, multiplication_matrix, Block, TruncatedOperator};
use crate::spectrum::Spectrum;
use crate::theta::ThetaMatrix;
use crate::C64;

/// `Tr(h e^{−tD²})` for the free operator: only `h_0` survives the trace
/// and each mode contributes `2 e^{−t|k|²}`.
pub fn heat_trace_lattice(h: &ConcreteElement, t: f64, dim: usize, cutoff: i64) -> Result<f64, NumError> {
    if t <= 0.0 || !t.is_finite() {
        return Err(NumError::InvalidArgument(format!("heat time {} must be positive", t)));
    }
    let modes = ModeBox::new(dim, cutoff)?;
    let h0 = h.normalized(dim)?.tau().re;
    // Product of one-dimensional sums.
    let line: f64 = (-cutoff..=cutoff).map(|k| (-t * (k * k) as f64).exp()).sum();
    Ok(2.0 * h0 * line.powi(modes.dim() as i32))
}

/// `Tr((h ⊗ 1) e^{−tT²})` at each requested time, from one eigendecomposition.
pub fn localized_heat_trace(op: &TruncatedOperator, localizer: &ConcreteElement, theta: &ThetaMatrix, times: &[f64]) -> Result<Vec<C64>, NumError> {
    let modes = op.mode_box().ok_or_else(|| NumError::InvalidArgument("operator carries no mode box".into()))?;
    if let Some(t) = times.iter().find(|t| **t <= 0.0) {
        return Err(NumError::InvalidArgument(format!("heat time {} must be positive", t)));
    }
    let spec = Spectrum::of(op)?;
    let m = kron_spinor(&multiplication_matrix(localizer, theta, modes)?, &Block::identity());
    let mv = &m * &spec.vectors;
    let diag: Vec<C64> = (0..spec.values.len()).map(|j| spec.vectors.column(j).dotc(&mv.column(j))).collect();
    Ok(times
        .iter()
        .map(|t| spec.values.iter().zip(&diag).map(|(l, d)| d * (-t * l * l).exp()).sum())
        .collect())
}
