//! Exact Pauli model of the gamma matrices in dimensions 2 and 3.
//!
//! `γ¹, γ², γ³` are the Pauli matrices σ_x, σ_y, σ_z; dimension 2 uses the
//! first two. Axes are 0-based in the API and printed 1-based, as `G[1,2,3]`.

use std::fmt;
use std::ops::Mul;

use num_complex::Complex;
use num_traits::Zero;

use crate::error::CliffordError;
use crate::scalar::{ComplexRational, ExactScalar, Rational};

pub const SPINOR_DIM: usize = 2;

fn c(re: i64, im: i64) -> ComplexRational {
    Complex::new(Rational::from_integer(re.into()), Rational::from_integer(im.into()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaMatrix {
    dim: usize,
    entries: [[ComplexRational; SPINOR_DIM]; SPINOR_DIM],
}

pub fn check_dimension(dim: usize) -> Result<(), CliffordError> {
    if dim == 2 || dim == 3 {
        Ok(())
    } else {
        Err(CliffordError::UnsupportedDimension(dim))
    }
}

impl GammaMatrix {
    pub fn identity(dim: usize) -> Result<Self, CliffordError> {
        check_dimension(dim)?;
        Ok(GammaMatrix { dim, entries: [[c(1, 0), c(0, 0)], [c(0, 0), c(1, 0)]] })
    }

    /// The generator `γ^{axis+1}`.
    pub fn generator(dim: usize, axis: usize) -> Result<Self, CliffordError> {
        check_dimension(dim)?;
        let entries = match axis {
            0 if axis < dim => [[c(0, 0), c(1, 0)], [c(1, 0), c(0, 0)]],
            1 if axis < dim => [[c(0, 0), c(0, -1)], [c(0, 1), c(0, 0)]],
            2 if axis < dim => [[c(1, 0), c(0, 0)], [c(0, 0), c(-1, 0)]],
            _ => return Err(CliffordError::IndexOutOfRange { index: axis + 1, dim }),
        };
        Ok(GammaMatrix { dim, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, row: usize, col: usize) -> &ComplexRational {
        &self.entries[row][col]
    }

    pub fn trace(&self) -> ExactScalar {
        ExactScalar::from_complex(&self.entries[0][0] + &self.entries[1][1])
    }

    pub fn scale(&self, s: &ComplexRational) -> Self {
        let mut out = self.clone();
        for row in out.entries.iter_mut() {
            for e in row.iter_mut() {
                *e = &*e * s;
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(|e| e.re.is_zero() && e.im.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        let one = c(1, 0);
        let zero = c(0, 0);
        self.entries[0][0] == one && self.entries[1][1] == one && self.entries[0][1] == zero && self.entries[1][0] == zero
    }
}

impl Mul<&GammaMatrix> for &GammaMatrix {
    type Output = GammaMatrix;
    fn mul(self, rhs: &GammaMatrix) -> GammaMatrix {
        let mut entries = [[c(0, 0), c(0, 0)], [c(0, 0), c(0, 0)]];
        for (i, row) in entries.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                for k in 0..SPINOR_DIM {
                    *e += &self.entries[i][k] * &rhs.entries[k][j];
                }
            }
        }
        GammaMatrix { dim: self.dim.max(rhs.dim), entries }
    }
}

impl fmt::Display for GammaMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = |e: &ComplexRational| crate::scalar::fmt_complex(e);
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            r(&self.entries[0][0]),
            r(&self.entries[0][1]),
            r(&self.entries[1][0]),
            r(&self.entries[1][1])
        )
    }
}

/// `γ^{i₁}⋯γ^{i_k}` for 0-based axes; the empty word is the identity.
pub fn clifford_word(dim: usize, axes: &[usize]) -> Result<GammaMatrix, CliffordError> {
    let mut acc = GammaMatrix::identity(dim)?;
    for &axis in axes {
        acc = &acc * &GammaMatrix::generator(dim, axis)?;
    }
    Ok(acc)
}

/// Rendering of a gamma word, e.g. `G[1,2,3]`.
pub fn render_word(axes: &[usize]) -> String {
    let idx: Vec<String> = axes.iter().map(|a| (a + 1).to_string()).collect();
    format!("G[{}]", idx.join(","))
}

/// Levi-Civita symbol on 0-based indices.
pub fn levi_civita(i: usize, j: usize, k: usize) -> i64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1,
        _ => 0,
    }
}
