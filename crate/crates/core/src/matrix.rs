//! 2×2 matrices over the free algebra (the coefficient type of symbols).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::algebra::AlgebraElement;
use crate::clifford::{GammaMatrix, SPINOR_DIM};
use crate::error::AlgebraError;
use num_traits::{One, Zero};

use crate::scalar::{ComplexRational, ExactScalar, Rational};

#[derive(Clone, Default, PartialEq, Eq)]
pub struct SpinMatrix {
    entries: [[AlgebraElement; SPINOR_DIM]; SPINOR_DIM],
}

impl SpinMatrix {
    pub fn zero() -> Self {
        SpinMatrix::default()
    }

    pub fn identity() -> Self {
        Self::scalar_diagonal(AlgebraElement::one())
    }

    /// `a ⊗ I`.
    pub fn scalar_diagonal(a: AlgebraElement) -> Self {
        let mut m = SpinMatrix::zero();
        m.entries[1][1] = a.clone();
        m.entries[0][0] = a;
        m
    }

    /// `a ⊗ γ`.
    pub fn tensor(a: &AlgebraElement, g: &GammaMatrix) -> Self {
        let mut m = SpinMatrix::zero();
        for i in 0..SPINOR_DIM {
            for j in 0..SPINOR_DIM {
                m.entries[i][j] = a.scale_complex(g.entry(i, j));
            }
        }
        m
    }

    pub fn from_gamma(g: &GammaMatrix) -> Self {
        Self::tensor(&AlgebraElement::one(), g)
    }

    pub fn from_entries(entries: [[AlgebraElement; SPINOR_DIM]; SPINOR_DIM]) -> Self {
        SpinMatrix { entries }
    }

    pub fn entry(&self, i: usize, j: usize) -> &AlgebraElement {
        &self.entries[i][j]
    }

    pub fn entry_mut(&mut self, i: usize, j: usize) -> &mut AlgebraElement {
        &mut self.entries[i][j]
    }

    pub fn entries(&self) -> impl Iterator<Item = &AlgebraElement> {
        self.entries.iter().flatten()
    }

    pub fn is_zero(&self) -> bool {
        self.entries().all(|e| e.is_zero())
    }

    pub fn map<F: Fn(&AlgebraElement) -> AlgebraElement>(&self, f: F) -> SpinMatrix {
        SpinMatrix {
            entries: [
                [f(&self.entries[0][0]), f(&self.entries[0][1])],
                [f(&self.entries[1][0]), f(&self.entries[1][1])],
            ],
        }
    }

    pub fn try_map<E, F: Fn(&AlgebraElement) -> Result<AlgebraElement, E>>(&self, f: F) -> Result<SpinMatrix, E> {
        Ok(SpinMatrix {
            entries: [
                [f(&self.entries[0][0])?, f(&self.entries[0][1])?],
                [f(&self.entries[1][0])?, f(&self.entries[1][1])?],
            ],
        })
    }

    pub fn scale(&self, s: &ExactScalar) -> SpinMatrix {
        self.map(|e| e.scale(s))
    }

    pub fn scale_rational(&self, q: &Rational) -> SpinMatrix {
        self.map(|e| e.scale_rational(q))
    }

    pub fn scale_complex(&self, c: &ComplexRational) -> SpinMatrix {
        self.map(|e| e.scale_complex(c))
    }

    pub fn add_assign_ref(&mut self, other: &SpinMatrix) {
        for i in 0..SPINOR_DIM {
            for j in 0..SPINOR_DIM {
                self.entries[i][j].add_assign_ref(&other.entries[i][j]);
            }
        }
    }

    pub fn sub_assign_ref(&mut self, other: &SpinMatrix) {
        for i in 0..SPINOR_DIM {
            for j in 0..SPINOR_DIM {
                self.entries[i][j].sub_assign_ref(&other.entries[i][j]);
            }
        }
    }

    /// `self += c · a · b`.
    pub fn add_product(&mut self, c: &ExactScalar, a: &SpinMatrix, b: &SpinMatrix) {
        for i in 0..SPINOR_DIM {
            for j in 0..SPINOR_DIM {
                for k in 0..SPINOR_DIM {
                    let (x, y) = (&a.entries[i][k], &b.entries[k][j]);
                    if x.is_zero() || y.is_zero() {
                        continue;
                    }
                    self.entries[i][j].add_product(c, x, y);
                }
            }
        }
    }

    pub fn multiply(&self, other: &SpinMatrix) -> SpinMatrix {
        let mut out = SpinMatrix::zero();
        out.add_product(&ExactScalar::one(), self, other);
        out
    }

    pub fn left_mul_element(&self, a: &AlgebraElement) -> SpinMatrix {
        self.map(|e| a.multiply(e))
    }

    pub fn right_mul_element(&self, a: &AlgebraElement) -> SpinMatrix {
        self.map(|e| e.multiply(a))
    }

    pub fn trace(&self) -> AlgebraElement {
        &self.entries[0][0] + &self.entries[1][1]
    }

    /// Conjugate transpose with the algebra adjoint on entries.
    pub fn adjoint(&self) -> SpinMatrix {
        SpinMatrix {
            entries: [
                [self.entries[0][0].adjoint(), self.entries[1][0].adjoint()],
                [self.entries[0][1].adjoint(), self.entries[1][1].adjoint()],
            ],
        }
    }

    pub fn delta(&self, axis: usize) -> Result<SpinMatrix, AlgebraError> {
        self.try_map(|e| e.delta(axis))
    }

    pub fn delta_multi(&self, alpha: &[u8]) -> Result<SpinMatrix, AlgebraError> {
        self.try_map(|e| e.delta_multi(alpha))
    }

    pub fn truncate_t(&self, cap: u32) -> SpinMatrix {
        self.map(|e| e.truncate_t(cap))
    }

    pub fn t_coefficient(&self, j: u32) -> SpinMatrix {
        self.map(|e| e.t_coefficient(j))
    }

    pub fn max_t_power(&self) -> Option<u32> {
        self.entries().filter_map(|e| e.max_t_power()).max()
    }

    pub fn t_cap(&self) -> u32 {
        self.entries().map(|e| e.t_cap()).min().unwrap_or(crate::scalar::UNBOUNDED)
    }

    /// `Some(a)` if the matrix is `a ⊗ I`.
    pub fn as_scalar_diagonal(&self) -> Option<AlgebraElement> {
        if self.entries[0][1].is_zero() && self.entries[1][0].is_zero() && self.entries[0][0] == self.entries[1][1] {
            Some(self.entries[0][0].clone())
        } else {
            None
        }
    }
}

impl SpinMatrix {
    /// Expansion `Σ_J a_J G[J]` over the Clifford basis: `G[]`, `G[1]`, `G[2]`
    /// and `G[3]` in dim 3, or `G[1,2]` in place of `G[3]` in dim 2.
    pub fn clifford_components(&self, dim: usize) -> Vec<(Vec<usize>, AlgebraElement)> {
        let half = Rational::new(1.into(), 2.into());
        let i_half = ComplexRational::new(Rational::zero(), half.clone());
        let [[m00, m01], [m10, m11]] = &self.entries;
        let a0 = (m00 + m11).scale_rational(&half);
        let a1 = (m01 + m10).scale_rational(&half);
        let a2 = (m01 - m10).scale_complex(&i_half);
        let a3 = (m00 - m11).scale_rational(&half);
        let mut out = vec![(vec![], a0), (vec![0], a1), (vec![1], a2)];
        if dim == 2 {
            out.push((vec![0, 1], a3.scale_complex(&ComplexRational::new(Rational::zero(), -Rational::one()))));
        } else {
            out.push((vec![2], a3));
        }
        out.retain(|(_, a)| !a.is_zero());
        out
    }

    /// Rendering in the Clifford basis, e.g. `([h])*G[] + (-[A1])*G[1,2]`.
    pub fn clifford_string(&self, dim: usize) -> String {
        let parts: Vec<String> = self
            .clifford_components(dim)
            .into_iter()
            .map(|(axes, a)| format!("({})*{}", a, crate::clifford::render_word(&axes)))
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

impl fmt::Debug for SpinMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for SpinMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(a) = self.as_scalar_diagonal() {
            return write!(f, "({}) I", a);
        }
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            self.entries[0][0], self.entries[0][1], self.entries[1][0], self.entries[1][1]
        )
    }
}

impl Add<&SpinMatrix> for &SpinMatrix {
    type Output = SpinMatrix;
    fn add(self, rhs: &SpinMatrix) -> SpinMatrix {
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
}

impl Sub<&SpinMatrix> for &SpinMatrix {
    type Output = SpinMatrix;
    fn sub(self, rhs: &SpinMatrix) -> SpinMatrix {
        let mut out = self.clone();
        out.sub_assign_ref(rhs);
        out
    }
}

impl Mul<&SpinMatrix> for &SpinMatrix {
    type Output = SpinMatrix;
    fn mul(self, rhs: &SpinMatrix) -> SpinMatrix {
        self.multiply(rhs)
    }
}

impl Neg for &SpinMatrix {
    type Output = SpinMatrix;
    fn neg(self) -> SpinMatrix {
        self.map(|e| -e)
    }
}
