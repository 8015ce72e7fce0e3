//! Dirac-type operator families and their symbols.

use num_traits::Zero;

use super::{star_product_exact, HomogeneousComponent, Symbol, XiMonomial};
use crate::algebra::{exp_expand, AlgebraElement, Generator};
use crate::clifford::{check_dimension, GammaMatrix};
use crate::error::SymbolError;
use crate::matrix::SpinMatrix;
use crate::scalar::{rational, ExactScalar, Rational, UNBOUNDED};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilyKind {
    /// `D = δ_μ ⊗ γ^μ`.
    Free,
    /// `D + A_μ ⊗ γ^μ`; with `graded`, every `A_μ` carries one power of t.
    Coupled { potentials: Vec<Generator>, graded: bool },
    /// `e^{th/2} D e^{th/2}` expanded to the t cap.
    Conformal { weyl_factor: Generator },
    /// `D + t u*[D,u]` for `u = U_k`, at a rational value of t.
    UnitaryFlow { k: Vec<i64>, t: Rational },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorFamily {
    dim: usize,
    kind: FamilyKind,
    t_cap: u32,
}

fn default_potentials(dim: usize) -> Vec<Generator> {
    (1..=dim).map(|i| Generator::hermitian(&format!("A{}", i)).expect("valid name")).collect()
}

impl OperatorFamily {
    pub fn new(dim: usize, kind: FamilyKind, t_cap: u32) -> Result<Self, SymbolError> {
        check_dimension(dim)?;
        match &kind {
            FamilyKind::Coupled { potentials, .. } => {
                if potentials.len() != dim {
                    return Err(SymbolError::MalformedFamily(format!(
                        "coupled family needs {} potentials, got {}",
                        dim,
                        potentials.len()
                    )));
                }
                if let Some(g) = potentials.iter().find(|g| !g.is_hermitian() || g.derivative_order() > 0) {
                    return Err(SymbolError::MalformedFamily(format!("potential {} must be a self-adjoint base", g)));
                }
            }
            FamilyKind::Conformal { weyl_factor } => {
                if !weyl_factor.is_hermitian() || weyl_factor.derivative_order() > 0 {
                    return Err(SymbolError::MalformedFamily(format!(
                        "Weyl factor {} must be a self-adjoint base",
                        weyl_factor
                    )));
                }
            }
            FamilyKind::UnitaryFlow { k, .. } => {
                if k.len() != dim {
                    return Err(SymbolError::MalformedFamily(format!(
                        "lattice vector has {} entries, dimension is {}",
                        k.len(),
                        dim
                    )));
                }
            }
            FamilyKind::Free => {}
        }
        Ok(OperatorFamily { dim, kind, t_cap })
    }

    pub fn free(dim: usize) -> Result<Self, SymbolError> {
        Self::new(dim, FamilyKind::Free, 0)
    }

    /// Coupled family with potentials `A1, …, A{dim}`.
    pub fn coupled(dim: usize) -> Result<Self, SymbolError> {
        Self::new(dim, FamilyKind::Coupled { potentials: default_potentials(dim), graded: false }, 0)
    }

    /// Coupled family with `A_μ ↦ t A_μ`, truncated at `t_cap`.
    pub fn coupled_graded(dim: usize, t_cap: u32) -> Result<Self, SymbolError> {
        Self::new(dim, FamilyKind::Coupled { potentials: default_potentials(dim), graded: true }, t_cap)
    }

    /// Conformal family with Weyl factor `h`.
    pub fn conformal(dim: usize, t_cap: u32) -> Result<Self, SymbolError> {
        Self::new(dim, FamilyKind::Conformal { weyl_factor: Generator::hermitian("h").expect("valid name") }, t_cap)
    }

    pub fn unitary_flow(dim: usize, k: Vec<i64>, t: Rational) -> Result<Self, SymbolError> {
        Self::new(dim, FamilyKind::UnitaryFlow { k, t }, 0)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> &FamilyKind {
        &self.kind
    }

    pub fn t_cap(&self) -> u32 {
        self.t_cap
    }

    /// Cap applied to coefficients; unbounded for families without t.
    pub fn effective_cap(&self) -> u32 {
        match self.kind {
            FamilyKind::Conformal { .. } | FamilyKind::Coupled { graded: true, .. } => self.t_cap,
            _ => UNBOUNDED,
        }
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            FamilyKind::Free => "free_dirac",
            FamilyKind::Coupled { .. } => "coupled_dirac",
            FamilyKind::Conformal { .. } => "conformal_dirac",
            FamilyKind::UnitaryFlow { .. } => "unitary_flow",
        }
    }
}

/// `ξ_μ ⊗ γ^μ` as an exact symbol.
pub fn free_dirac_symbol(dim: usize) -> Result<Symbol, SymbolError> {
    let mut c = HomogeneousComponent::zero(dim, 1);
    for axis in 0..dim {
        c.add_monomial(XiMonomial::axis(axis), &SpinMatrix::from_gamma(&GammaMatrix::generator(dim, axis)?));
    }
    Symbol::from_components(dim, None, [c])
}

/// `Σ_μ a_μ ⊗ γ^μ` as an order-0 exact symbol.
pub fn slash(dim: usize, coeffs: &[AlgebraElement]) -> Result<Symbol, SymbolError> {
    let mut m = SpinMatrix::zero();
    for (axis, a) in coeffs.iter().enumerate() {
        m.add_assign_ref(&SpinMatrix::tensor(a, &GammaMatrix::generator(dim, axis)?));
    }
    Symbol::from_matrix(dim, m)
}

/// `(σ(D), σ(D²))` for the family, with `σ(D²) = σ(D) ⋆ σ(D)` exactly.
pub fn dirac_symbol(f: &OperatorFamily) -> Result<(Symbol, Symbol), SymbolError> {
    let dim = f.dim;
    let free = free_dirac_symbol(dim)?;
    let d = match &f.kind {
        FamilyKind::Free => free,
        FamilyKind::Coupled { potentials, graded } => {
            let weight = if *graded { ExactScalar::t_power(1).truncate_t(f.t_cap) } else { ExactScalar::one() };
            let coeffs: Vec<AlgebraElement> =
                potentials.iter().map(|g| AlgebraElement::generator(*g).scale(&weight)).collect();
            free.add(&slash(dim, &coeffs)?)?
        }
        FamilyKind::Conformal { weyl_factor } => {
            let e = exp_expand(*weyl_factor, &rational(1, 2), f.t_cap);
            let e_sym = Symbol::from_matrix(dim, SpinMatrix::scalar_diagonal(e))?;
            let left = star_product_exact(&e_sym, &free)?;
            star_product_exact(&left, &e_sym)?
        }
        FamilyKind::UnitaryFlow { k, t } => {
            if t.is_zero() || k.iter().all(|x| *x == 0) {
                free
            } else {
                let coeffs: Vec<AlgebraElement> = k
                    .iter()
                    .map(|x| AlgebraElement::from_rational(t * Rational::from_integer((*x).into())))
                    .collect();
                free.add(&slash(dim, &coeffs)?)?
            }
        }
    };
    let d2 = star_product_exact(&d, &d)?;
    let cap = f.effective_cap();
    if cap == UNBOUNDED {
        Ok((d, d2))
    } else {
        Ok((d.truncate_t(cap), d2.truncate_t(cap)))
    }
}
