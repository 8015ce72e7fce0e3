//! Resolvent parametrix of a Laplace-type symbol, exact contour and Mellin
//! integrals, and heat coefficients.
//!
//! Resolvent terms are `coeff · ξ^β · (ξ² − λ)^{-m}` with `ξ^β` an honest
//! (unreduced) monomial. The leading symbol must be `ξ²(1 + N) ⊗ ·` with `N`
//! nilpotent in t, so every resolvent factor is central.

use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use num_bigint::BigInt;
use num_complex::Complex;
use num_traits::{One, Zero};

use crate::algebra::AlgebraElement;
use crate::error::SymbolError;
use crate::functionals::wres;
use crate::matrix::SpinMatrix;
use crate::scalar::{gamma_half_parts, rational_int, ExactScalar, Grade, Rational};
use crate::symbol::{dirac_symbol, square_norm_power, FamilyKind, HomogeneousComponent, OperatorFamily, Symbol, XiMonomial};
use crate::trace::{tau_class, TauClass};

type Alpha = [u8; 3];

/// `coeff · ξ^β · (ξ² − λ)^{-m}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolventTerm {
    pub coeff: SpinMatrix,
    pub xi_monomial: XiMonomial,
    pub resolvent_power: u32,
}

impl ResolventTerm {
    /// Joint homogeneity in `(ξ, λ^{1/2})`.
    pub fn degree(&self) -> i32 {
        self.xi_monomial.total() - 2 * self.resolvent_power as i32
    }
}

/// The homogeneous part `r_k` of the resolvent parametrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolventSymbol {
    index: usize,
    terms: BTreeMap<(XiMonomial, u32), SpinMatrix>,
}

impl ResolventSymbol {
    pub fn index(&self) -> usize {
        self.index
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> Vec<ResolventTerm> {
        self.terms
            .iter()
            .map(|((b, m), c)| ResolventTerm { coeff: c.clone(), xi_monomial: *b, resolvent_power: *m })
            .collect()
    }

    /// Every term has homogeneity `−2 − index`.
    pub fn homogeneity_ok(&self) -> bool {
        let expected = -2 - self.index as i32;
        self.terms.keys().all(|(b, m)| b.total() - 2 * *m as i32 == expected)
    }

    fn add(&mut self, key: (XiMonomial, u32), m: &SpinMatrix) {
        if m.is_zero() {
            return;
        }
        let e = self.terms.entry(key).or_default();
        e.add_assign_ref(m);
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    fn delta(&self, axis: usize) -> Result<ResolventSymbol, SymbolError> {
        let mut out = ResolventSymbol { index: self.index, terms: BTreeMap::new() };
        for (k, c) in &self.terms {
            out.add(*k, &c.delta(axis)?);
        }
        Ok(out)
    }
}

type Polynomial = BTreeMap<XiMonomial, SpinMatrix>;

fn poly_derivative(p: &Polynomial, axis: usize) -> Polynomial {
    let mut out: Polynomial = BTreeMap::new();
    for (b, m) in p {
        let e = b.0[axis];
        if e == 0 {
            continue;
        }
        let mut nb = *b;
        nb.0[axis] -= 1;
        let entry = out.entry(nb).or_default();
        entry.add_assign_ref(&m.scale_rational(&rational_int(e as i64)));
    }
    out.retain(|_, m| !m.is_zero());
    out
}

fn inverse_factorial(alpha: &Alpha) -> Rational {
    let mut f = BigInt::one();
    for &a in alpha {
        for i in 2..=a as u32 {
            f *= BigInt::from(i);
        }
    }
    Rational::new(BigInt::one(), f)
}

fn factorial(n: u32) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

struct LaplaceSymbol {
    dim: usize,
    /// degree → polynomial components of degree 2, 1, 0
    parts: BTreeMap<i32, Polynomial>,
    nilpotent: SpinMatrix,
}

fn laplace_parts(sigma: &Symbol) -> Result<LaplaceSymbol, SymbolError> {
    if !sigma.is_exact() {
        return Err(SymbolError::InvalidArgument("resolvent recursion needs an exact differential symbol".into()));
    }
    if sigma.order() != Some(2) {
        return Err(SymbolError::EllipticityShape(format!("expected order 2, got {:?}", sigma.order())));
    }
    let mut parts = BTreeMap::new();
    for c in sigma.components() {
        if c.degree() < 0 {
            return Err(SymbolError::NotPolynomial(c.degree()));
        }
        parts.insert(c.degree(), c.polynomial_terms()?);
    }
    let top = sigma.component(2).expect("order 2").as_radial().ok_or_else(|| {
        SymbolError::EllipticityShape("leading part is not xi^2 times a xi-independent matrix".into())
    })?;
    let nilpotent = &top - &SpinMatrix::identity();
    if !nilpotent.t_coefficient(0).is_zero() {
        return Err(SymbolError::EllipticityShape("t-free leading part is not xi^2 I".into()));
    }
    if !nilpotent.is_zero() && nilpotent.t_cap() == crate::scalar::UNBOUNDED {
        return Err(SymbolError::EllipticityShape("t-dependent leading part without a t cap".into()));
    }
    Ok(LaplaceSymbol { dim: sigma.dim(), parts, nilpotent })
}

fn multi_indices(dim: usize, k: u32) -> Vec<Alpha> {
    let mut out = Vec::new();
    for a in 0..=k {
        if dim == 2 {
            out.push([a as u8, (k - a) as u8, 0]);
            continue;
        }
        for b in 0..=(k - a) {
            out.push([a as u8, b as u8, (k - a - b) as u8]);
        }
    }
    out
}

/// `r_0, …, r_count` for `σ(P) = a_2 + a_1 + a_0`.
pub fn resolvent_symbols(sigma: &Symbol, count: usize) -> Result<Vec<ResolventSymbol>, SymbolError> {
    let lap = laplace_parts(sigma)?;
    let dim = lap.dim;

    // r_0 = Σ_k (−1)^k (ξ²)^k N^k (ξ² − λ)^{-k-1}
    let mut r0 = ResolventSymbol { index: 0, terms: BTreeMap::new() };
    let mut power = SpinMatrix::identity();
    let mut k = 0u32;
    while !power.is_zero() {
        let sign = if k % 2 == 0 { rational_int(1) } else { rational_int(-1) };
        for (q, c) in square_norm_power(dim, k) {
            r0.add((q, k + 1), &power.scale_rational(&(&sign * rational_int(c))));
        }
        power = power.multiply(&lap.nilpotent);
        k += 1;
    }

    let mut derivs: HashMap<(i32, Alpha), Rc<Polynomial>> = HashMap::new();
    let mut poly_deriv = |d: i32, alpha: &Alpha| -> Rc<Polynomial> {
        if let Some(p) = derivs.get(&(d, *alpha)) {
            return p.clone();
        }
        let mut p = lap.parts.get(&d).cloned().unwrap_or_default();
        for (axis, &n) in alpha.iter().enumerate() {
            for _ in 0..n {
                p = poly_derivative(&p, axis);
            }
        }
        let q = inverse_factorial(alpha);
        for m in p.values_mut() {
            *m = m.scale_rational(&q);
        }
        let p = Rc::new(p);
        derivs.insert((d, *alpha), p.clone());
        p
    };
    let mut delta_cache: HashMap<(usize, Alpha), Rc<ResolventSymbol>> = HashMap::new();

    let mut out: Vec<ResolventSymbol> = vec![r0];
    for k in 1..=count {
        let mut rest = ResolventSymbol { index: k, terms: BTreeMap::new() };
        for (&d, _) in lap.parts.iter() {
            let shift = (2 - d) as usize;
            for order in 0..=(k.saturating_sub(shift)) as u32 {
                if d == 2 && order == 0 {
                    continue;
                }
                let Some(j) = k.checked_sub(shift + order as usize) else { continue };
                for alpha in multi_indices(dim, order) {
                    let da = poly_deriv(d, &alpha);
                    if da.is_empty() {
                        continue;
                    }
                    let dr = delta_of(&out, j, &alpha, &mut delta_cache)?;
                    for (g, a) in da.iter() {
                        for ((b, m), r) in dr.terms.iter() {
                            rest.add((g.mul(b), *m), &a.multiply(r));
                        }
                    }
                }
            }
        }
        let mut rk = ResolventSymbol { index: k, terms: BTreeMap::new() };
        for ((b0, m0), c0) in out[0].terms.iter() {
            for ((b, m), c) in rest.terms.iter() {
                rk.add((b0.mul(b), m0 + m), &(-&c0.multiply(c)));
            }
        }
        out.push(rk);
    }
    Ok(out)
}

fn delta_of(
    rs: &[ResolventSymbol],
    j: usize,
    alpha: &Alpha,
    cache: &mut HashMap<(usize, Alpha), Rc<ResolventSymbol>>,
) -> Result<Rc<ResolventSymbol>, SymbolError> {
    if let Some(r) = cache.get(&(j, *alpha)) {
        return Ok(r.clone());
    }
    let result = match alpha.iter().position(|a| *a > 0) {
        None => Rc::new(rs[j].clone()),
        Some(axis) => {
            let mut p = *alpha;
            p[axis] -= 1;
            Rc::new(delta_of(rs, j, &p, cache)?.delta(axis)?)
        }
    };
    cache.insert((j, *alpha), result.clone());
    Ok(result)
}

/// `coeff · ξ^β · e^{−ξ²}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaussianTerm {
    pub coeff: SpinMatrix,
    pub xi_monomial: XiMonomial,
}

/// `(1/2πi)∫_γ e^{−λ} (ξ² − λ)^{-m} dλ = e^{−ξ²}/(m−1)!`, orientation fixed so
/// that the leading heat coefficient is positive.
pub fn lambda_contour_integral(term: &ResolventTerm) -> GaussianTerm {
    let w = Rational::new(BigInt::one(), factorial(term.resolvent_power.saturating_sub(1)));
    GaussianTerm { coeff: term.coeff.scale_rational(&w), xi_monomial: term.xi_monomial }
}

/// `∫_{ℝⁿ} ξ^β e^{−ξ²} dξ`.
pub fn gaussian_moment(beta: &XiMonomial, dim: usize) -> ExactScalar {
    let exps = &beta.0[..dim];
    if exps.iter().any(|b| b % 2 == 1) || beta.0[dim..].iter().any(|b| *b != 0) {
        return ExactScalar::zero();
    }
    let mut q = Rational::one();
    let mut p = 0u32;
    for &b in exps {
        let (r, pp) = gamma_half_parts(b as u32 + 1);
        q *= r;
        p += pp;
    }
    ExactScalar::monomial(Complex::new(q, Rational::zero()), Grade::new(p, 0))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeatCoefficient {
    pub index: usize,
    /// `∫ e_k(ξ) dξ` before matrix trace (and before localization).
    pub density: SpinMatrix,
    /// `tr(a · density)`.
    pub traced: AlgebraElement,
    /// Class of `traced` modulo cyclic rotations and total derivatives.
    pub tau: TauClass,
}

impl HeatCoefficient {
    pub fn is_zero(&self) -> bool {
        self.tau.is_zero()
    }
}

/// Heat coefficients `β_0 … β_count` of `e^{−tP}`, optionally localized by `a`.
pub fn heat_coefficients(
    sigma: &Symbol,
    count: usize,
    localizer: Option<&AlgebraElement>,
) -> Result<Vec<HeatCoefficient>, SymbolError> {
    let dim = sigma.dim();
    let rs = resolvent_symbols(sigma, count)?;
    let mut out = Vec::with_capacity(rs.len());
    for r in &rs {
        let mut density = SpinMatrix::zero();
        for term in r.terms() {
            let g = lambda_contour_integral(&term);
            let w = gaussian_moment(&g.xi_monomial, dim);
            if !w.is_zero() {
                density.add_assign_ref(&g.coeff.scale(&w));
            }
        }
        let localized = match localizer {
            Some(a) => density.left_mul_element(a),
            None => density.clone(),
        };
        let traced = localized.trace();
        let tau = tau_class(&traced).modulo_derivations();
        out.push(HeatCoefficient { index: r.index(), density, traced, tau });
    }
    Ok(out)
}

/// Supported exponents for [`mellin_inverse_power`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MellinExponent {
    /// `P^{-1/2}`.
    InverseSqrt,
    /// `P^{-k}`, `k ≥ 1`.
    InversePower(u32),
}

impl MellinExponent {
    pub fn from_rational(s: &Rational) -> Result<Self, SymbolError> {
        if *s == Rational::new((-1).into(), 2.into()) {
            return Ok(MellinExponent::InverseSqrt);
        }
        if s.is_integer() && *s < Rational::zero() {
            let k: i64 = (-s.to_integer()).try_into().map_err(|_| SymbolError::UnsupportedExponent(s.to_string()))?;
            return Ok(MellinExponent::InversePower(k as u32));
        }
        Err(SymbolError::UnsupportedExponent(s.to_string()))
    }
}

fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// Symbol of `P^s` from the resolvent parametrix:
/// `(ξ²+λ)^{-m}` integrates against `λ^{-1/2}/π` to `Γ(m−½)/(√π Γ(m)) |ξ|^{1−2m}`,
/// and the residue of `λ^{-k}(λ−ξ²)^{-m}` gives `C(m+k−2, m−1) |ξ|^{−2(m+k−1)}`.
pub fn mellin_inverse_power(sigma: &Symbol, exponent: MellinExponent, floor: i32) -> Result<Symbol, SymbolError> {
    let dim = sigma.dim();
    let (top, count) = match exponent {
        MellinExponent::InverseSqrt => (-1, -1 - floor),
        MellinExponent::InversePower(0) => {
            return Err(SymbolError::UnsupportedExponent("0".into()));
        }
        MellinExponent::InversePower(k) => (-2 * k as i32, -2 * k as i32 - floor),
    };
    let mut out = Symbol::from_components(dim, Some(floor), std::iter::empty())?;
    if count < 0 {
        return Ok(out);
    }
    let rs = resolvent_symbols(sigma, count as usize)?;
    for r in &rs {
        let degree = top - r.index() as i32;
        let mut c = HomogeneousComponent::zero(dim, degree);
        for term in r.terms() {
            let m = term.resolvent_power;
            let w = match exponent {
                MellinExponent::InverseSqrt => {
                    // Γ(m − 1/2)/(√π Γ(m)); the π^{1/2} cancels
                    let (num, _) = gamma_half_parts(2 * m - 1);
                    num / Rational::from_integer(factorial(m - 1))
                }
                MellinExponent::InversePower(k) => Rational::from_integer(binomial(m + k - 2, m - 1)),
            };
            c.add_monomial(term.xi_monomial, &term.coeff.scale_rational(&w));
        }
        out.insert(c);
    }
    Ok(out)
}

/// `−2 · τ(tr(h β_2(Δ_t)))` per t-grade, for a conformal family in dimension 2.
pub fn anomaly_density(f: &OperatorFamily) -> Result<Vec<TauClass>, SymbolError> {
    let FamilyKind::Conformal { weyl_factor } = f.kind() else {
        return Err(SymbolError::MalformedFamily("anomaly density needs a conformal family".into()));
    };
    if f.dim() != 2 {
        return Err(SymbolError::MalformedFamily("anomaly density is defined in dimension 2".into()));
    }
    let (_, d2) = dirac_symbol(f)?;
    let h = AlgebraElement::generator(*weyl_factor);
    let coeffs = heat_coefficients(&d2, 2, Some(&h))?;
    let beta2 = coeffs[2].tau.scale(&ExactScalar::from_int(-2));
    Ok((0..=f.t_cap()).map(|j| beta2.t_coefficient(j)).collect())
}

/// `(res(Δ^{-k}), (2/(k−1)!) β_{n−2k})` for `Δ = D²` of a family in dimension 2.
pub fn res_heat_crosscheck(f: &OperatorFamily, k: u32) -> Result<(TauClass, TauClass), SymbolError> {
    let n = f.dim() as i32;
    if n != 2 {
        return Err(SymbolError::InvalidArgument("cross-check is implemented for dimension 2".into()));
    }
    if k == 0 || n < 2 * k as i32 {
        return Err(SymbolError::InvalidArgument(format!("need 1 ≤ k ≤ n/2, got k = {}", k)));
    }
    let (_, d2) = dirac_symbol(f)?;
    let powered = mellin_inverse_power(&d2, MellinExponent::InversePower(k), -n)?;
    let lhs = wres(&powered, f.dim())?.tau_reduced;
    let idx = (n - 2 * k as i32) as usize;
    let coeffs = heat_coefficients(&d2, idx, None)?;
    let w = Rational::new(BigInt::from(2), factorial(k - 1));
    let rhs = coeffs[idx].tau.scale(&ExactScalar::from_rational(w));
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn contour_weights() {
        for (m, w) in [(1u32, Rational::one()), (2, Rational::one()), (3, Rational::new(1.into(), 2.into()))] {
            let t = ResolventTerm { coeff: SpinMatrix::identity(), xi_monomial: XiMonomial::ONE, resolvent_power: m };
            assert_eq!(lambda_contour_integral(&t).coeff, SpinMatrix::identity().scale_rational(&w));
        }
    }

    #[test]
    fn gaussian_moments() {
        assert_eq!(gaussian_moment(&XiMonomial::ONE, 3), ExactScalar::pi_half_power(3));
        assert_eq!(gaussian_moment(&XiMonomial::ONE, 2), ExactScalar::pi_half_power(2));
        assert!(gaussian_moment(&XiMonomial([1, 0, 0]), 3).is_zero());
        // ∫ξ₁² e^{−ξ²} = (1/2)π^{3/2}
        assert_eq!(gaussian_moment(&XiMonomial([2, 0, 0]), 3), ExactScalar::pi_half_power(3).scale_rational(&Rational::new(1.into(), 2.into())));
    }

    #[test]
    fn exponent_parsing() {
        assert_eq!(MellinExponent::from_rational(&Rational::new((-1).into(), 2.into())).unwrap(), MellinExponent::InverseSqrt);
        assert_eq!(MellinExponent::from_rational(&rational_int(-2)).unwrap(), MellinExponent::InversePower(2));
        assert!(MellinExponent::from_rational(&Rational::new(1.into(), 3.into())).is_err());
    }
}
