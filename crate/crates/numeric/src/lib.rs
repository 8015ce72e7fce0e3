//! Floating-point harness: Fourier-mode truncations of Dirac families on the
//! noncommutative torus, Hermitian spectra, lattice heat traces and spectral flow.
//!
//! Modes live in the box `|k|_∞ ≤ L`; the spinor index is innermost, so the
//! basis vector `U_k ⊗ e_s` has index `2·mode(k) + s`.

pub mod element;
pub mod error;
pub mod flow;
pub mod heat;
pub mod lattice;
pub mod operator;
pub mod spectrum;
pub mod theta;

pub use element::ConcreteElement;
pub use error::NumError;
pub use flow::{spectral_flow, FlowReport, DEFAULT_FLOW_LEVEL};
pub use heat::{heat_trace_lattice, localized_heat_trace};
pub use lattice::{Mode, ModeBox};
pub use operator::{build_operator, NumericFamily, OperatorBuilder, TruncatedOperator};
pub use spectrum::{hermitian_eigenvalues, Spectrum};
pub use theta::ThetaMatrix;

pub type C64 = nalgebra::Complex<f64>;
