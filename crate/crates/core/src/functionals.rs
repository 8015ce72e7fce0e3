//! Sphere integrals, the noncommutative residue, cut-off integrals and the
//! residue formulas for variations of η and ζ.

use std::fmt;

use crate::algebra::{AlgebraElement, Generator};
use crate::clifford::GammaMatrix;
use crate::error::SymbolError;
use crate::matrix::SpinMatrix;
use crate::scalar::{gamma_half_parts, rational_int, ExactScalar, Grade, Rational};
use crate::symbol::{
    dirac_symbol, free_dirac_symbol, invert_symbol, slash, sqrt_symbol, star_product, star_product_exact,
    FamilyKind, HomogeneousComponent, OperatorFamily, Symbol, XiMonomial,
};
use crate::trace::{tau_class, TauClass};

use num_complex::Complex;
use num_traits::Zero;

/// `∫_{S^{n−1}} ξ^β dS` exactly.
pub fn sphere_integral(beta: &XiMonomial, dim: usize) -> ExactScalar {
    let exps = &beta.0[..dim];
    if exps.iter().any(|b| b % 2 == 1) || beta.0[dim..].iter().any(|b| *b != 0) {
        return ExactScalar::zero();
    }
    let mut q = rational_int(2);
    let mut p: i64 = 0;
    for &b in exps {
        let (r, pp) = gamma_half_parts(b as u32 + 1);
        q *= r;
        p += pp as i64;
    }
    let total: u32 = exps.iter().map(|b| *b as u32).sum::<u32>() + dim as u32;
    let (r, pp) = gamma_half_parts(total);
    q /= r;
    p -= pp as i64;
    ExactScalar::monomial(Complex::new(q, Rational::zero()), Grade::new(p as u32, 0))
}

/// Sphere integral of a homogeneous component, before matrix trace.
pub fn integrate_component(c: &HomogeneousComponent) -> SpinMatrix {
    let mut out = SpinMatrix::zero();
    for (beta, m) in c.terms() {
        let w = sphere_integral(beta, c.dim());
        if !w.is_zero() {
            out.add_assign_ref(&m.scale(&w));
        }
    }
    out
}

/// Strongest level at which a residue vanishes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum VanishingLevel {
    Density,
    Trace,
    Tau,
    None,
}

impl VanishingLevel {
    pub fn as_str(&self) -> &'static str {
        match self {
            VanishingLevel::Density => "density",
            VanishingLevel::Trace => "trace",
            VanishingLevel::Tau => "tau",
            VanishingLevel::None => "none",
        }
    }
}

impl fmt::Display for VanishingLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueDensity {
    /// Sphere integral of the degree −n component.
    pub value: SpinMatrix,
    /// Matrix trace of `value`.
    pub traced: AlgebraElement,
    /// Cyclic class of `traced`.
    pub tau_value: TauClass,
    /// Class of `traced` modulo cyclic rotations and total derivatives.
    pub tau_reduced: TauClass,
}

impl ResidueDensity {
    fn from_value(value: SpinMatrix) -> Self {
        let traced = value.trace();
        let tau_value = tau_class(&traced);
        let tau_reduced = tau_value.modulo_derivations();
        ResidueDensity { value, traced, tau_value, tau_reduced }
    }

    pub fn vanishing_level(&self) -> VanishingLevel {
        if self.value.is_zero() {
            VanishingLevel::Density
        } else if self.traced.is_zero() {
            VanishingLevel::Trace
        } else if self.tau_reduced.is_zero() {
            VanishingLevel::Tau
        } else {
            VanishingLevel::None
        }
    }

    /// Whether the cyclic quotient alone already kills the residue.
    pub fn vanishes_cyclically(&self) -> bool {
        self.tau_value.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.vanishing_level() != VanishingLevel::None
    }

    pub fn scale(&self, s: &ExactScalar) -> Self {
        Self::from_value(self.value.scale(s))
    }

    pub fn t_coefficient(&self, j: u32) -> Self {
        Self::from_value(self.value.t_coefficient(j))
    }
}

/// Residue density of `a`: sphere integral of its degree −n component.
pub fn wres(a: &Symbol, dim: usize) -> Result<ResidueDensity, SymbolError> {
    if a.dim() != dim {
        return Err(SymbolError::DimensionMismatch(a.dim(), dim));
    }
    let n = dim as i32;
    a.require_depth(-n)?;
    let value = a.component(-n).map(integrate_component).unwrap_or_default();
    Ok(ResidueDensity::from_value(value))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutoffIntegral {
    pub finite_part: SpinMatrix,
    pub log_divergent: bool,
}

/// Constant term of `∫_{|ξ|≤R} χ(ξ) a(ξ) dξ` as `R → ∞`, with the sharp cutoff
/// `χ = 1_{|ξ|≥1}`; the known components are treated as the whole symbol.
pub fn cutoff_integral(a: &Symbol, dim: usize) -> Result<CutoffIntegral, SymbolError> {
    if a.dim() != dim {
        return Err(SymbolError::DimensionMismatch(a.dim(), dim));
    }
    let n = dim as i32;
    let mut finite_part = SpinMatrix::zero();
    let mut log_divergent = false;
    for c in a.components() {
        if c.degree() == -n {
            log_divergent |= !integrate_component(c).is_zero();
            continue;
        }
        let w = Rational::new((-1).into(), (c.degree() + n).into());
        finite_part.add_assign_ref(&integrate_component(c).scale_rational(&w));
    }
    Ok(CutoffIntegral { finite_part, log_divergent })
}

/// `Res_{z=0} TR(A Q^{-z}) = Wres(A)/q` for `Q` of order `q`.
pub fn laurent_residue(a: &Symbol, q: u32, dim: usize) -> Result<TauClass, SymbolError> {
    if q == 0 {
        return Err(SymbolError::InvalidArgument("order q must be positive".into()));
    }
    let r = wres(a, dim)?;
    Ok(r.tau_value.scale(&ExactScalar::from_rational(Rational::new(1.into(), (q as i64).into()))))
}

/// `σ(|D|^{-1})` of the family down to `floor`.
pub fn abs_inverse(f: &OperatorFamily, floor: i32) -> Result<Symbol, SymbolError> {
    let (_, d2) = dirac_symbol(f)?;
    let abs = sqrt_symbol(&d2, floor + 2)?;
    let inv = invert_symbol(&abs, floor)?;
    inv.require_depth(floor)?;
    Ok(inv)
}

/// Residue density of `−direction ⋆ |D|^{-1}`; `direction` is the symbol of Ḋ.
pub fn variation_residue(f: &OperatorFamily, direction: &Symbol) -> Result<ResidueDensity, SymbolError> {
    let n = f.dim() as i32;
    let top = direction.order().unwrap_or(0);
    let inv = abs_inverse(f, -n - top)?;
    let prod = star_product(direction, &inv, -n)?;
    wres(&prod.neg(), f.dim())
}

/// Symbol of `(hD + Dh)/2` for the free Dirac operator.
pub fn conformal_direction(dim: usize, weyl_factor: Generator) -> Result<Symbol, SymbolError> {
    let d = free_dirac_symbol(dim)?;
    let h = Symbol::from_matrix(dim, SpinMatrix::scalar_diagonal(AlgebraElement::generator(weyl_factor)))?;
    let sum = star_product_exact(&h, &d)?.add(&star_product_exact(&d, &h)?)?;
    Ok(sum.scale(&ExactScalar::from_ratio(1, 2)))
}

/// `−Wres(h · D|D|^{-1})` for the free Dirac operator.
pub fn conformal_sign_residue(dim: usize, weyl_factor: Generator) -> Result<ResidueDensity, SymbolError> {
    let n = dim as i32;
    let f = OperatorFamily::free(dim)?;
    let sign = crate::symbol::sign_symbol(&f, -n)?;
    let h = Symbol::from_matrix(dim, SpinMatrix::scalar_diagonal(AlgebraElement::generator(weyl_factor)))?;
    let prod = star_product(&h, &sign, -n)?;
    wres(&prod.neg(), dim)
}

/// Names of the variation generators `dA1, dA2, dA3`.
pub fn variation_generators(dim: usize) -> Vec<Generator> {
    (1..=dim).map(|i| Generator::hermitian(&format!("dA{}", i)).expect("valid name")).collect()
}

/// `Wres(γ^μ ∂A_μ · |D+A|^{-1})` for a coupled family in dimension 3, with the
/// variations `∂A_μ` given as abstract generators.
pub fn induced_cs_density(f: &OperatorFamily, variations: &[Generator]) -> Result<ResidueDensity, SymbolError> {
    if !matches!(f.kind(), FamilyKind::Coupled { .. }) || f.dim() != 3 {
        return Err(SymbolError::MalformedFamily("induced density needs a coupled family in dimension 3".into()));
    }
    if variations.len() != 3 {
        return Err(SymbolError::MalformedFamily("three variation generators required".into()));
    }
    let coeffs: Vec<AlgebraElement> = variations.iter().map(|g| AlgebraElement::generator(*g)).collect();
    let direction = slash(3, &coeffs)?;
    let inv = abs_inverse(f, -3)?;
    let prod = star_product(&direction, &inv, -3)?;
    wres(&prod, 3)
}

/// Closed form of the induced density: `∫_{S²} tr(γ^μ ∂A_μ σ_{−3}(|D+A|^{-1}))`.
pub fn cs_density_closed_form(inv: &Symbol, variations: &[Generator]) -> Result<AlgebraElement, SymbolError> {
    inv.require_depth(-3)?;
    let value = inv.component(-3).map(integrate_component).unwrap_or_default();
    let mut out = AlgebraElement::zero();
    for (axis, g) in variations.iter().enumerate() {
        let left = SpinMatrix::tensor(&AlgebraElement::generator(*g), &GammaMatrix::generator(3, axis)?);
        out.add_assign_ref(&left.multiply(&value).trace());
    }
    Ok(out)
}

/// Number of atoms of each word drawn from `bases`; used as a degree filter.
pub fn base_degree(word: &crate::algebra::Word, bases: &[Generator]) -> usize {
    word.factors().iter().filter(|g| bases.iter().any(|b| b.same_atom(g))).count()
}

/// Keeps the words of `a` with at most `max` atoms from `bases`.
pub fn filter_by_degree(a: &AlgebraElement, bases: &[Generator], max: usize) -> AlgebraElement {
    a.filter_words(|w| base_degree(w, bases) <= max)
}

/// `Σ_j` of the t-coefficients of `a` up to `cap`, forgetting t.
pub fn collapse_t(a: &AlgebraElement, cap: u32) -> AlgebraElement {
    let mut out = AlgebraElement::zero();
    for j in 0..=cap {
        out.add_assign_ref(&a.t_coefficient(j));
    }
    out
}
