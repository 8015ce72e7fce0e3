//! Classical symbols as finite sums of homogeneous components.
//!
//! A component of degree `d` is stored through its restriction to the unit
//! sphere: a map from ξ-monomials `ξ^β` to matrix coefficients, where `ξ^β`
//! stands for the homogeneous function `ξ^β |ξ|^{d−|β|}`. Monomials are
//! reduced modulo `ξ₁² = 1 − ξ₂² − … − ξ_n²`, so every component has a unique
//! normal form (exponent of ξ₁ at most 1) and the zero test is structural.

mod family;
mod product;
mod recursion;

pub use family::{dirac_symbol, free_dirac_symbol, slash, FamilyKind, OperatorFamily};
pub use product::{star_product, star_product_exact};
pub use recursion::{invert_symbol, sign_symbol, sqrt_symbol, sqrt_symbol_with_leading};

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::rc::Rc;

use crate::algebra::MAX_DIRECTIONS;
use crate::clifford::check_dimension;
use crate::error::{AlgebraError, SymbolError};
use crate::matrix::SpinMatrix;
use crate::scalar::{rational_int, ExactScalar, Rational};

/// Exponent vector β of `ξ^β`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct XiMonomial(pub [u8; MAX_DIRECTIONS]);

impl XiMonomial {
    pub const ONE: XiMonomial = XiMonomial([0; MAX_DIRECTIONS]);

    pub fn axis(axis: usize) -> Self {
        let mut e = [0; MAX_DIRECTIONS];
        e[axis] = 1;
        XiMonomial(e)
    }

    pub fn total(&self) -> i32 {
        self.0.iter().map(|b| *b as i32).sum()
    }

    pub fn mul(&self, other: &XiMonomial) -> XiMonomial {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(other.0.iter()) {
            *a += *b;
        }
        XiMonomial(e)
    }

    fn raise(&self, axis: usize) -> XiMonomial {
        let mut e = self.0;
        e[axis] += 1;
        XiMonomial(e)
    }

    fn lower(&self, axis: usize) -> XiMonomial {
        let mut e = self.0;
        e[axis] -= 1;
        XiMonomial(e)
    }
}

impl fmt::Display for XiMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &b)| b > 0)
            .map(|(i, &b)| if b == 1 { format!("xi{}", i + 1) } else { format!("xi{}^{}", i + 1, b) })
            .collect();
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

type Reduction = Rc<Vec<(XiMonomial, i64)>>;

thread_local! {
    static REDUCTIONS: RefCell<HashMap<(usize, XiMonomial), Reduction>> = RefCell::new(HashMap::new());
}

/// Sphere normal form of `ξ^β` in dimension `dim`.
fn reduce_monomial(dim: usize, beta: XiMonomial) -> Reduction {
    if beta.0[0] < 2 {
        return Rc::new(vec![(beta, 1)]);
    }
    if let Some(r) = REDUCTIONS.with(|m| m.borrow().get(&(dim, beta)).cloned()) {
        return r;
    }
    let mut base = beta;
    base.0[0] -= 2;
    let mut acc: BTreeMap<XiMonomial, i64> = BTreeMap::new();
    for (m, c) in reduce_monomial(dim, base).iter() {
        *acc.entry(*m).or_insert(0) += c;
    }
    for axis in 1..dim {
        let mut other = base;
        other.0[axis] += 2;
        for (m, c) in reduce_monomial(dim, other).iter() {
            *acc.entry(*m).or_insert(0) -= c;
        }
    }
    let r: Reduction = Rc::new(acc.into_iter().filter(|(_, c)| *c != 0).collect());
    REDUCTIONS.with(|m| m.borrow_mut().insert((dim, beta), r.clone()));
    r
}

/// A spec-style term `coeff · ξ^β · (ξ²)^{-m/2}`; negative `m` is a polynomial factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolTerm {
    pub coeff: SpinMatrix,
    pub xi_monomial: XiMonomial,
    pub half_denominator: i32,
}

impl SymbolTerm {
    pub fn degree(&self) -> i32 {
        self.xi_monomial.total() - self.half_denominator
    }
}

/// Homogeneous component of a fixed degree in sphere normal form.
#[derive(Clone, PartialEq, Eq)]
pub struct HomogeneousComponent {
    dim: usize,
    degree: i32,
    terms: BTreeMap<XiMonomial, SpinMatrix>,
}

/// Accumulator for component terms whose monomials are not yet reduced.
pub(crate) struct Unreduced {
    dim: usize,
    degree: i32,
    terms: BTreeMap<XiMonomial, SpinMatrix>,
}

impl Unreduced {
    pub(crate) fn new(dim: usize, degree: i32) -> Self {
        Unreduced { dim, degree, terms: BTreeMap::new() }
    }

    pub(crate) fn entry(&mut self, beta: XiMonomial) -> &mut SpinMatrix {
        self.terms.entry(beta).or_default()
    }

    pub(crate) fn add_scaled(&mut self, beta: XiMonomial, q: &Rational, m: &SpinMatrix) {
        self.entry(beta).add_assign_ref(&m.scale_rational(q));
    }

    pub(crate) fn finish(self) -> HomogeneousComponent {
        let mut out = HomogeneousComponent::zero(self.dim, self.degree);
        for (beta, m) in self.terms {
            if m.is_zero() {
                continue;
            }
            out.add_monomial(beta, &m);
        }
        out
    }
}

impl HomogeneousComponent {
    pub fn zero(dim: usize, degree: i32) -> Self {
        HomogeneousComponent { dim, degree, terms: BTreeMap::new() }
    }

    /// `|ξ|^degree ⊗ m`.
    pub fn constant(dim: usize, degree: i32, m: SpinMatrix) -> Self {
        Self::monomial(dim, degree, XiMonomial::ONE, m)
    }

    /// `ξ^β |ξ|^{degree−|β|} ⊗ m`.
    pub fn monomial(dim: usize, degree: i32, beta: XiMonomial, m: SpinMatrix) -> Self {
        let mut out = Self::zero(dim, degree);
        out.add_monomial(beta, &m);
        out
    }

    /// Sum of terms `coeff · ξ^β (ξ²)^{-m/2}` sharing one degree.
    pub fn from_terms(dim: usize, terms: &[SymbolTerm]) -> Result<Self, SymbolError> {
        let degree = terms.first().map(|t| t.degree()).unwrap_or(0);
        let mut out = Self::zero(dim, degree);
        for t in terms {
            if t.degree() != degree {
                return Err(SymbolError::InvalidArgument(format!(
                    "mixed degrees {} and {} in one component",
                    degree,
                    t.degree()
                )));
            }
            check_monomial(dim, &t.xi_monomial)?;
            out.add_monomial(t.xi_monomial, &t.coeff);
        }
        Ok(out)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&XiMonomial, &SpinMatrix)> {
        self.terms.iter()
    }

    /// Normal-form terms in the `ξ^β (ξ²)^{-m/2}` presentation.
    pub fn symbol_terms(&self) -> Vec<SymbolTerm> {
        self.terms
            .iter()
            .map(|(b, m)| SymbolTerm { coeff: m.clone(), xi_monomial: *b, half_denominator: b.total() - self.degree })
            .collect()
    }

    pub fn coefficient(&self, beta: &XiMonomial) -> SpinMatrix {
        self.terms.get(beta).cloned().unwrap_or_default()
    }

    pub fn add_monomial(&mut self, beta: XiMonomial, m: &SpinMatrix) {
        if m.is_zero() {
            return;
        }
        let red = reduce_monomial(self.dim, beta);
        for (b, c) in red.iter() {
            let scaled = if *c == 1 { m.clone() } else { m.scale_rational(&rational_int(*c)) };
            self.add_reduced(*b, &scaled);
        }
    }

    fn add_reduced(&mut self, beta: XiMonomial, m: &SpinMatrix) {
        match self.terms.entry(beta) {
            std::collections::btree_map::Entry::Vacant(e) => {
                if !m.is_zero() {
                    e.insert(m.clone());
                }
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                e.get_mut().add_assign_ref(m);
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_assign_ref(&mut self, other: &HomogeneousComponent) {
        debug_assert_eq!(self.degree, other.degree);
        for (b, m) in &other.terms {
            self.add_reduced(*b, m);
        }
    }

    pub fn sub_assign_ref(&mut self, other: &HomogeneousComponent) {
        debug_assert_eq!(self.degree, other.degree);
        for (b, m) in &other.terms {
            self.add_reduced(*b, &-m);
        }
    }

    fn map_matrices<F: Fn(&SpinMatrix) -> SpinMatrix>(&self, f: F) -> HomogeneousComponent {
        let mut out = Self::zero(self.dim, self.degree);
        for (b, m) in &self.terms {
            let v = f(m);
            if !v.is_zero() {
                out.terms.insert(*b, v);
            }
        }
        out
    }

    pub fn scale(&self, s: &ExactScalar) -> HomogeneousComponent {
        self.map_matrices(|m| m.scale(s))
    }

    pub fn scale_rational(&self, q: &Rational) -> HomogeneousComponent {
        self.map_matrices(|m| m.scale_rational(q))
    }

    pub fn neg(&self) -> HomogeneousComponent {
        self.map_matrices(|m| -m)
    }

    pub fn left_mul_matrix(&self, left: &SpinMatrix) -> HomogeneousComponent {
        self.map_matrices(|m| left.multiply(m))
    }

    pub fn right_mul_matrix(&self, right: &SpinMatrix) -> HomogeneousComponent {
        self.map_matrices(|m| m.multiply(right))
    }

    pub fn truncate_t(&self, cap: u32) -> HomogeneousComponent {
        self.map_matrices(|m| m.truncate_t(cap))
    }

    pub fn t_coefficient(&self, j: u32) -> HomogeneousComponent {
        self.map_matrices(|m| m.t_coefficient(j))
    }

    pub fn max_t_power(&self) -> Option<u32> {
        self.terms.values().filter_map(|m| m.max_t_power()).max()
    }

    /// Multiplication by `|ξ|^s`: relabels the degree.
    pub fn shift_degree(&self, s: i32) -> HomogeneousComponent {
        HomogeneousComponent { dim: self.dim, degree: self.degree + s, terms: self.terms.clone() }
    }

    /// `∂/∂ξ_axis`, homogeneous of degree one lower.
    pub fn xi_derivative(&self, axis: usize) -> HomogeneousComponent {
        let mut acc = Unreduced::new(self.dim, self.degree - 1);
        for (b, m) in &self.terms {
            if b.0[axis] > 0 {
                acc.add_scaled(b.lower(axis), &rational_int(b.0[axis] as i64), m);
            }
            let e = self.degree - b.total();
            if e != 0 {
                acc.add_scaled(b.raise(axis), &rational_int(e as i64), m);
            }
        }
        acc.finish()
    }

    /// Formal derivation applied to all coefficients.
    pub fn delta(&self, axis: usize) -> Result<HomogeneousComponent, AlgebraError> {
        let mut out = Self::zero(self.dim, self.degree);
        for (b, m) in &self.terms {
            let v = m.delta(axis)?;
            if !v.is_zero() {
                out.terms.insert(*b, v);
            }
        }
        Ok(out)
    }

    /// Pointwise product `self(ξ) · other(ξ)`.
    pub fn multiply(&self, other: &HomogeneousComponent) -> HomogeneousComponent {
        let mut acc = Unreduced::new(self.dim, self.degree + other.degree);
        self.multiply_into(other, &ExactScalar::one(), &mut acc);
        acc.finish()
    }

    pub(crate) fn multiply_into(&self, other: &HomogeneousComponent, c: &ExactScalar, acc: &mut Unreduced) {
        for (b1, m1) in &self.terms {
            for (b2, m2) in &other.terms {
                acc.entry(b1.mul(b2)).add_product(c, m1, m2);
            }
        }
    }

    /// Whether this is a polynomial in ξ (every term has `degree − |β|` even and ≥ 0).
    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|b| {
            let e = self.degree - b.total();
            e >= 0 && e % 2 == 0
        })
    }

    /// Expansion as an honest polynomial `Σ_β c_β ξ^β` (unreduced monomials).
    pub fn polynomial_terms(&self) -> Result<BTreeMap<XiMonomial, SpinMatrix>, SymbolError> {
        let mut out: BTreeMap<XiMonomial, SpinMatrix> = BTreeMap::new();
        for (b, m) in &self.terms {
            let e = self.degree - b.total();
            if e < 0 || e % 2 != 0 {
                return Err(SymbolError::NotPolynomial(self.degree));
            }
            for (q, c) in square_norm_power(self.dim, (e / 2) as u32) {
                let key = b.mul(&q);
                let entry = out.entry(key).or_default();
                entry.add_assign_ref(&m.scale_rational(&rational_int(c)));
            }
        }
        out.retain(|_, m| !m.is_zero());
        Ok(out)
    }

    /// Whether the component is `|ξ|^degree ⊗ m` for a ξ-independent matrix `m`.
    pub fn as_radial(&self) -> Option<SpinMatrix> {
        match self.terms.len() {
            0 => Some(SpinMatrix::zero()),
            1 => self.terms.get(&XiMonomial::ONE).cloned(),
            _ => None,
        }
    }
}

/// `(ξ₁² + … + ξ_n²)^k` as monomials with multinomial coefficients.
pub(crate) fn square_norm_power(dim: usize, k: u32) -> Vec<(XiMonomial, i64)> {
    let mut acc: BTreeMap<XiMonomial, i64> = BTreeMap::new();
    acc.insert(XiMonomial::ONE, 1);
    for _ in 0..k {
        let mut next: BTreeMap<XiMonomial, i64> = BTreeMap::new();
        for (b, c) in &acc {
            for axis in 0..dim {
                let mut e = b.0;
                e[axis] += 2;
                *next.entry(XiMonomial(e)).or_insert(0) += c;
            }
        }
        acc = next;
    }
    acc.into_iter().collect()
}

fn check_monomial(dim: usize, beta: &XiMonomial) -> Result<(), SymbolError> {
    if beta.0[dim..].iter().any(|b| *b != 0) {
        return Err(SymbolError::InvalidArgument(format!("monomial {} uses an axis beyond dimension {}", beta, dim)));
    }
    Ok(())
}

impl fmt::Debug for HomogeneousComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for HomogeneousComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(b, m)| {
                let e = self.degree - b.total();
                let radial = if e == 0 { String::new() } else { format!(" * |xi|^{}", e) };
                format!("{{{}}} * {}{}", m.clifford_string(self.dim), b, radial)
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Finite homogeneous expansion. `floor = None` marks an exact symbol (all
/// components known); otherwise degrees below `floor` are unknown remainder.
#[derive(Clone, PartialEq, Eq)]
pub struct Symbol {
    dim: usize,
    floor: Option<i32>,
    components: BTreeMap<i32, HomogeneousComponent>,
}

impl Symbol {
    pub fn zero(dim: usize) -> Result<Self, SymbolError> {
        check_dimension(dim)?;
        Ok(Symbol { dim, floor: None, components: BTreeMap::new() })
    }

    pub fn identity(dim: usize) -> Result<Self, SymbolError> {
        Self::from_matrix(dim, SpinMatrix::identity())
    }

    /// A ξ-independent symbol of order 0.
    pub fn from_matrix(dim: usize, m: SpinMatrix) -> Result<Self, SymbolError> {
        let mut s = Self::zero(dim)?;
        s.insert(HomogeneousComponent::constant(dim, 0, m));
        Ok(s)
    }

    pub fn from_components<I: IntoIterator<Item = HomogeneousComponent>>(
        dim: usize,
        floor: Option<i32>,
        components: I,
    ) -> Result<Self, SymbolError> {
        let mut s = Self::zero(dim)?;
        s.floor = floor;
        for c in components {
            if c.dim != dim {
                return Err(SymbolError::DimensionMismatch(dim, c.dim));
            }
            if floor.map_or(false, |f| c.degree < f) {
                continue;
            }
            s.insert(c);
        }
        Ok(s)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn floor(&self) -> Option<i32> {
        self.floor
    }

    pub fn is_exact(&self) -> bool {
        self.floor.is_none()
    }

    /// Highest degree with a nonzero component.
    pub fn order(&self) -> Option<i32> {
        self.components.keys().next_back().copied()
    }

    /// Lowest degree with a nonzero component.
    pub fn lowest_degree(&self) -> Option<i32> {
        self.components.keys().next().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn components(&self) -> impl Iterator<Item = &HomogeneousComponent> {
        self.components.values()
    }

    pub fn component(&self, degree: i32) -> Option<&HomogeneousComponent> {
        self.components.get(&degree)
    }

    /// Component of the given degree, zero if absent.
    pub fn component_or_zero(&self, degree: i32) -> HomogeneousComponent {
        self.components.get(&degree).cloned().unwrap_or_else(|| HomogeneousComponent::zero(self.dim, degree))
    }

    /// Whether degree `d` is determined by this symbol.
    pub fn knows_degree(&self, d: i32) -> bool {
        self.floor.map_or(true, |f| d >= f)
    }

    /// Adds a component to the expansion (merging with an existing one).
    pub fn insert(&mut self, c: HomogeneousComponent) {
        if c.is_zero() {
            return;
        }
        match self.components.entry(c.degree) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                e.get_mut().add_assign_ref(&c);
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn combined_floor(a: Option<i32>, b: Option<i32>) -> Option<i32> {
        match (a, b) {
            (None, x) | (x, None) => x,
            (Some(x), Some(y)) => Some(x.max(y)),
        }
    }

    fn combine(&self, other: &Symbol, negate: bool) -> Result<Symbol, SymbolError> {
        if self.dim != other.dim {
            return Err(SymbolError::DimensionMismatch(self.dim, other.dim));
        }
        let floor = Self::combined_floor(self.floor, other.floor);
        let mut out = self.truncate_below_opt(floor);
        for c in other.components.values() {
            if floor.map_or(false, |f| c.degree < f) {
                continue;
            }
            out.insert(if negate { c.neg() } else { c.clone() });
        }
        out.floor = floor;
        Ok(out)
    }

    pub fn add(&self, other: &Symbol) -> Result<Symbol, SymbolError> {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &Symbol) -> Result<Symbol, SymbolError> {
        self.combine(other, true)
    }

    fn map_components<F: Fn(&HomogeneousComponent) -> HomogeneousComponent>(&self, f: F) -> Symbol {
        let mut out = Symbol { dim: self.dim, floor: self.floor, components: BTreeMap::new() };
        for c in self.components.values() {
            out.insert(f(c));
        }
        out
    }

    pub fn scale(&self, s: &ExactScalar) -> Symbol {
        self.map_components(|c| c.scale(s))
    }

    pub fn neg(&self) -> Symbol {
        self.map_components(|c| c.neg())
    }

    pub fn left_mul_matrix(&self, m: &SpinMatrix) -> Symbol {
        self.map_components(|c| c.left_mul_matrix(m))
    }

    pub fn truncate_t(&self, cap: u32) -> Symbol {
        self.map_components(|c| c.truncate_t(cap))
    }

    pub fn t_coefficient(&self, j: u32) -> Symbol {
        self.map_components(|c| c.t_coefficient(j))
    }

    pub fn max_t_power(&self) -> Option<u32> {
        self.components.values().filter_map(|c| c.max_t_power()).max()
    }

    /// Formal derivation on every coefficient.
    pub fn delta(&self, axis: usize) -> Result<Symbol, SymbolError> {
        let mut out = Symbol { dim: self.dim, floor: self.floor, components: BTreeMap::new() };
        for c in self.components.values() {
            out.insert(c.delta(axis)?);
        }
        Ok(out)
    }

    fn truncate_below_opt(&self, floor: Option<i32>) -> Symbol {
        match floor {
            None => self.clone(),
            Some(f) => self.truncate_below(f),
        }
    }

    /// Forgets all degrees below `floor`.
    pub fn truncate_below(&self, floor: i32) -> Symbol {
        let components = self.components.range(floor..).map(|(d, c)| (*d, c.clone())).collect();
        let floor = Some(self.floor.map_or(floor, |f| f.max(floor)));
        Symbol { dim: self.dim, floor, components }
    }

    /// Equality of all components of degree ≥ `floor`.
    pub fn agrees_down_to(&self, other: &Symbol, floor: i32) -> bool {
        if self.dim != other.dim {
            return false;
        }
        let a: Vec<_> = self.components.range(floor..).collect();
        let b: Vec<_> = other.components.range(floor..).collect();
        a == b
    }

    /// Error unless degree `needed` is determined.
    pub fn require_depth(&self, needed: i32) -> Result<(), SymbolError> {
        match self.floor {
            Some(f) if f > needed => Err(SymbolError::InsufficientDepth { needed, available: f }),
            _ => Ok(()),
        }
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let floor = match self.floor {
            None => "exact".to_string(),
            Some(fl) => format!("floor {}", fl),
        };
        writeln!(f, "symbol (dim {}, {})", self.dim, floor)?;
        for (d, c) in self.components.iter().rev() {
            writeln!(f, "  deg {}: {}", d, c)?;
        }
        Ok(())
    }
}
