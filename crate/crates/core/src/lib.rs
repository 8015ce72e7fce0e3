//! Exact symbol calculus for pseudodifferential operators on noncommutative tori.
//!
//! Layers, bottom up: [`scalar`] (Gaussian rationals with formal π^{1/2} and a
//! nilpotent t), [`algebra`] (free *-algebra with derivations), [`trace`]
//! (formal trace classes), [`clifford`] and [`matrix`] (2×2 spinor matrices),
//! [`symbol`] (homogeneous expansions, star product, inversion, square root),
//! [`functionals`] (sphere integrals, residues, cut-off integrals) and [`heat`]
//! (resolvent recursion and heat coefficients).

pub mod algebra;
pub mod clifford;
pub mod error;
pub mod functionals;
pub mod heat;
pub mod matrix;
pub mod parse;
pub mod scalar;
pub mod symbol;
pub mod trace;

pub use algebra::{exp_expand, AlgebraElement, Generator, Word};
pub use clifford::{clifford_word, GammaMatrix};
pub use error::{AlgebraError, CliffordError, ParseError, ScalarError, SymbolError};
pub use parse::{parse_element, parse_scalar};
pub use matrix::SpinMatrix;
pub use scalar::{half_gamma, ExactScalar, Rational};
pub use symbol::{HomogeneousComponent, OperatorFamily, Symbol, XiMonomial};
pub use trace::{tau_class, TauClass};
