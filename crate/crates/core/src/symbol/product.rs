//! Composition of symbols: `σ(PQ) ~ Σ_α (1/α!) ∂_ξ^α σ(P) · δ^α σ(Q)`.

use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use num_bigint::BigInt;

use super::{HomogeneousComponent, Symbol, Unreduced};
use crate::algebra::MAX_DIRECTIONS;
use crate::error::SymbolError;
use crate::scalar::{ExactScalar, Rational};

type Alpha = [u8; MAX_DIRECTIONS];

/// All multi-indices of total order `k` in `dim` directions.
pub(crate) fn multi_indices(dim: usize, k: u32) -> Vec<Alpha> {
    let mut out = Vec::new();
    match dim {
        2 => {
            for a in 0..=k {
                out.push([a as u8, (k - a) as u8, 0]);
            }
        }
        _ => {
            for a in 0..=k {
                for b in 0..=(k - a) {
                    out.push([a as u8, b as u8, (k - a - b) as u8]);
                }
            }
        }
    }
    out
}

fn inverse_factorial(alpha: &Alpha) -> ExactScalar {
    let mut f = BigInt::from(1);
    for &a in alpha {
        for i in 2..=a as u32 {
            f *= BigInt::from(i);
        }
    }
    ExactScalar::from_rational(Rational::new(BigInt::from(1), f))
}

fn parent(alpha: &Alpha) -> Option<(Alpha, usize)> {
    let axis = alpha.iter().position(|a| *a > 0)?;
    let mut p = *alpha;
    p[axis] -= 1;
    Some((p, axis))
}

/// Components of a left factor with memoized ξ-derivatives.
pub(crate) struct LeftFactor {
    comps: BTreeMap<i32, Rc<HomogeneousComponent>>,
    cache: HashMap<(i32, Alpha), Rc<HomogeneousComponent>>,
}

impl LeftFactor {
    pub(crate) fn new() -> Self {
        LeftFactor { comps: BTreeMap::new(), cache: HashMap::new() }
    }

    pub(crate) fn from_symbol(s: &Symbol) -> Self {
        let mut l = Self::new();
        for c in s.components() {
            l.push(c.clone());
        }
        l
    }

    pub(crate) fn push(&mut self, c: HomogeneousComponent) {
        if !c.is_zero() {
            self.comps.insert(c.degree(), Rc::new(c));
        }
    }

    fn derivative(&mut self, degree: i32, alpha: &Alpha) -> Rc<HomogeneousComponent> {
        if let Some(c) = self.cache.get(&(degree, *alpha)) {
            return c.clone();
        }
        let result = match parent(alpha) {
            None => self.comps[&degree].clone(),
            Some((p, axis)) => {
                let base = self.derivative(degree, &p);
                Rc::new(base.xi_derivative(axis))
            }
        };
        self.cache.insert((degree, *alpha), result.clone());
        result
    }
}

/// Components of a right factor with memoized δ-derivatives.
pub(crate) struct RightFactor {
    comps: BTreeMap<i32, Rc<HomogeneousComponent>>,
    cache: HashMap<(i32, Alpha), Rc<HomogeneousComponent>>,
}

impl RightFactor {
    pub(crate) fn new() -> Self {
        RightFactor { comps: BTreeMap::new(), cache: HashMap::new() }
    }

    pub(crate) fn from_symbol(s: &Symbol) -> Self {
        let mut r = Self::new();
        for c in s.components() {
            r.push(c.clone());
        }
        r
    }

    pub(crate) fn push(&mut self, c: HomogeneousComponent) {
        if !c.is_zero() {
            self.comps.insert(c.degree(), Rc::new(c));
        }
    }

    fn derivative(&mut self, degree: i32, alpha: &Alpha) -> Result<Rc<HomogeneousComponent>, SymbolError> {
        if let Some(c) = self.cache.get(&(degree, *alpha)) {
            return Ok(c.clone());
        }
        let result = match parent(alpha) {
            None => self.comps[&degree].clone(),
            Some((p, axis)) => {
                let base = self.derivative(degree, &p)?;
                Rc::new(base.delta(axis)?)
            }
        };
        self.cache.insert((degree, *alpha), result.clone());
        Ok(result)
    }
}

/// The degree-`target` component of `left ⋆ right`.
pub(crate) fn star_degree(
    dim: usize,
    left: &mut LeftFactor,
    right: &mut RightFactor,
    target: i32,
) -> Result<HomogeneousComponent, SymbolError> {
    let mut acc = Unreduced::new(dim, target);
    let left_degrees: Vec<i32> = left.comps.keys().copied().collect();
    let right_degrees: Vec<i32> = right.comps.keys().copied().collect();
    for &d1 in &left_degrees {
        for &d2 in &right_degrees {
            let k = d1 + d2 - target;
            if k < 0 {
                continue;
            }
            for alpha in multi_indices(dim, k as u32) {
                let da = left.derivative(d1, &alpha);
                if da.is_zero() {
                    continue;
                }
                let db = right.derivative(d2, &alpha)?;
                if db.is_zero() {
                    continue;
                }
                da.multiply_into(&db, &inverse_factorial(&alpha), &mut acc);
            }
        }
    }
    Ok(acc.finish())
}

fn upper_degree(s: &Symbol) -> Option<i32> {
    s.order().or(s.floor().map(|f| f - 1))
}

/// `a ⋆ b` down to `floor`. The result floor is raised when an input is not
/// known deeply enough to determine the requested degrees.
pub fn star_product(a: &Symbol, b: &Symbol, floor: i32) -> Result<Symbol, SymbolError> {
    if a.dim() != b.dim() {
        return Err(SymbolError::DimensionMismatch(a.dim(), b.dim()));
    }
    let dim = a.dim();
    let mut eff = floor;
    if let (Some(fa), Some(ub)) = (a.floor(), upper_degree(b)) {
        eff = eff.max(fa + ub);
    }
    if let (Some(fb), Some(ua)) = (b.floor(), upper_degree(a)) {
        eff = eff.max(fb + ua);
    }
    let mut out = Symbol::zero(dim)?;
    out.floor = Some(eff);
    let (Some(oa), Some(ob)) = (a.order(), b.order()) else {
        return Ok(out);
    };
    let mut left = LeftFactor::from_symbol(a);
    let mut right = RightFactor::from_symbol(b);
    for target in (eff..=oa + ob).rev() {
        out.insert(star_degree(dim, &mut left, &mut right, target)?);
    }
    Ok(out)
}

/// Exact `a ⋆ b` for exact symbols whose left factor is a differential symbol
/// (every component a polynomial in ξ), so the expansion terminates.
pub fn star_product_exact(a: &Symbol, b: &Symbol) -> Result<Symbol, SymbolError> {
    if a.dim() != b.dim() {
        return Err(SymbolError::DimensionMismatch(a.dim(), b.dim()));
    }
    if !a.is_exact() || !b.is_exact() {
        return Err(SymbolError::InvalidArgument("exact product needs exact symbols".into()));
    }
    for c in a.components() {
        if c.degree() < 0 || !c.is_polynomial() {
            return Err(SymbolError::NotPolynomial(c.degree()));
        }
    }
    let dim = a.dim();
    let mut out = Symbol::zero(dim)?;
    let (Some(oa), Some(ob), Some(la), Some(lb)) = (a.order(), b.order(), a.lowest_degree(), b.lowest_degree())
    else {
        return Ok(out);
    };
    let mut left = LeftFactor::from_symbol(a);
    let mut right = RightFactor::from_symbol(b);
    for target in (la + lb - oa..=oa + ob).rev() {
        out.insert(star_degree(dim, &mut left, &mut right, target)?);
    }
    Ok(out)
}
