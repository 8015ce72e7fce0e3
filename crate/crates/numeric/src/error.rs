use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumError {
    #[error("theta matrix is not skew-symmetric (defect {0:e})")]
    NotSkew(f64),
    #[error("theta matrix is {rows}x{cols}, expected {dim}x{dim}")]
    ThetaShape { rows: usize, cols: usize, dim: usize },
    #[error("dimension {0} unsupported (expected 2 or 3)")]
    UnsupportedDimension(usize),
    #[error("mode {mode:?} has the wrong number of components for dimension {dim}")]
    ModeShape { mode: Vec<i64>, dim: usize },
    #[error("support radius {radius} does not fit inside cutoff {cutoff}")]
    SupportOverflow { radius: i64, cutoff: i64 },
    #[error("element is not self-adjoint (defect {0:e})")]
    NotSelfAdjoint(f64),
    #[error("assembled operator is not Hermitian (defect {0:e})")]
    NonHermitian(f64),
    #[error("eigensolver did not converge on a {0}x{0} matrix")]
    NoConvergence(usize),
    #[error("eigen residual {residual:e} exceeds {bound:e}")]
    Residual { residual: f64, bound: f64 },
    #[error("grid too coarse between t = {from} and t = {to}: an eigenvalue could cross level {level} twice")]
    GridTooCoarse { from: f64, to: f64, level: f64 },
    #[error("eigenvalue {value} sits on the counting level {level} at endpoint t = {t}")]
    EndpointOnLevel { t: f64, value: f64, level: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
