//! Recursive inversion and square roots of elliptic symbols.
//!
//! Both require a leading component `|ξ|^r (c + N) ⊗ ·` with `c` a nonzero
//! Gaussian rational and `N` a matrix whose entries only carry positive
//! t-grades (nilpotent under the t cap). Lower components then follow order
//! by order; truncation never goes deeper than the inputs allow.

use num_complex::Complex;
use num_traits::{One, Signed, Zero};

use super::product::{star_degree, star_product, LeftFactor, RightFactor};
use super::{dirac_symbol, HomogeneousComponent, OperatorFamily, Symbol};
use crate::error::SymbolError;
use crate::matrix::SpinMatrix;
use crate::scalar::{rational, rational_int, ComplexRational, ExactScalar, Rational, UNBOUNDED};

struct Leading {
    order: i32,
    central: ComplexRational,
    nilpotent: SpinMatrix,
}

fn leading(a: &Symbol) -> Result<Leading, SymbolError> {
    let order = a.order().ok_or_else(|| SymbolError::EllipticityShape("zero symbol".into()))?;
    let top = a.component(order).expect("order component");
    let m = top
        .as_radial()
        .ok_or_else(|| SymbolError::EllipticityShape(format!("degree {} part depends on the direction of xi", order)))?;
    let central = m
        .t_coefficient(0)
        .as_scalar_diagonal()
        .and_then(|e| e.as_scalar())
        .and_then(|s| s.as_complex_rational())
        .ok_or_else(|| SymbolError::EllipticityShape("t-free leading part is not a rational multiple of I".into()))?;
    if central.re.is_zero() && central.im.is_zero() {
        return Err(SymbolError::EllipticityShape("leading part vanishes at t = 0".into()));
    }
    let nilpotent = &m - &SpinMatrix::scalar_diagonal(crate::algebra::AlgebraElement::from_complex(central.clone()));
    if !nilpotent.t_coefficient(0).is_zero() {
        return Err(SymbolError::EllipticityShape("t-free leading part is not central".into()));
    }
    if !nilpotent.is_zero() && nilpotent.t_cap() == UNBOUNDED {
        return Err(SymbolError::EllipticityShape("t-dependent leading part without a t cap".into()));
    }
    Ok(Leading { order, central, nilpotent })
}

fn complex_inverse(c: &ComplexRational) -> ComplexRational {
    let n = &c.re * &c.re + &c.im * &c.im;
    Complex::new(&c.re / &n, -&c.im / &n)
}

/// `Σ_k coeff(k) · X^k` until the powers vanish.
fn matrix_series<F: Fn(u32) -> ExactScalar>(x: &SpinMatrix, coeff: F) -> SpinMatrix {
    let mut out = SpinMatrix::identity().scale(&coeff(0));
    let mut power = SpinMatrix::identity();
    let mut k = 0;
    loop {
        power = power.multiply(x);
        k += 1;
        if power.is_zero() {
            break;
        }
        out.add_assign_ref(&power.scale(&coeff(k)));
    }
    out
}

/// Right inverse `b` with `a ⋆ b ≡ 1` down to `floor` (raised if `a` is too shallow).
pub fn invert_symbol(a: &Symbol, floor: i32) -> Result<Symbol, SymbolError> {
    let lead = leading(a)?;
    let r = lead.order;
    let dim = a.dim();
    let mut eff = floor;
    if let Some(fa) = a.floor() {
        eff = eff.max(fa - 2 * r);
    }
    let cinv = complex_inverse(&lead.central);
    let x = lead.nilpotent.scale_complex(&-cinv.clone());
    // (c + N)^{-1} = c^{-1} Σ (−N/c)^k
    let top_inverse = matrix_series(&x, |_| ExactScalar::one()).scale_complex(&cinv);

    let mut out = Symbol::zero(dim)?;
    out.floor = Some(eff);
    if -r < eff {
        return Ok(out);
    }
    let b_top = HomogeneousComponent::constant(dim, -r, top_inverse.clone());
    out.insert(b_top.clone());
    let mut left = LeftFactor::from_symbol(a);
    let mut right = RightFactor::new();
    right.push(b_top);
    for k in 1..=(-r - eff) {
        let rest = star_degree(dim, &mut left, &mut right, -k)?;
        let next = rest.left_mul_matrix(&top_inverse).neg().shift_degree(-r);
        right.push(next.clone());
        out.insert(next);
    }
    Ok(out)
}

fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

/// `binom(1/2, k)`.
fn half_binomial(k: u32) -> Rational {
    let mut acc = Rational::one();
    for i in 0..k {
        acc = acc * (rational(1, 2) - rational_int(i as i64)) / rational_int(i as i64 + 1);
    }
    acc
}

/// Solves `P X + X P = Y` for `P = p0 + Q`, `Q` nilpotent, by fixed-point iteration.
fn solve_anticommutator(p0: &Rational, q: &SpinMatrix, y: &HomogeneousComponent) -> HomogeneousComponent {
    let inv = Rational::one() / (p0 * rational_int(2));
    let mut x = y.scale_rational(&inv);
    if q.is_zero() {
        return x;
    }
    loop {
        let mut rhs = y.clone();
        rhs.sub_assign_ref(&x.left_mul_matrix(q));
        rhs.sub_assign_ref(&x.right_mul_matrix(q));
        let next = rhs.scale_rational(&inv);
        if next == x {
            return x;
        }
        x = next;
    }
}

/// `b` of order `r` with `b ⋆ b ≡ a` down to `floor`, for `a` of order `2r`.
pub fn sqrt_symbol(a: &Symbol, floor: i32) -> Result<Symbol, SymbolError> {
    let lead = leading(a)?;
    if lead.order % 2 != 0 {
        return Err(SymbolError::OddOrder(lead.order));
    }
    let r = lead.order / 2;
    if !lead.central.im.is_zero() {
        return Err(SymbolError::EllipticityShape("leading scalar is not real".into()));
    }
    let c = lead.central.re.clone();
    let p0 = rational_sqrt(&c)
        .ok_or_else(|| SymbolError::EllipticityShape(format!("leading scalar {} has no rational square root", c)))?;
    let x = lead.nilpotent.scale_rational(&(Rational::one() / &c));
    let top = matrix_series(&x, |k| ExactScalar::from_rational(half_binomial(k))).scale_rational(&p0);
    sqrt_with_top(a, floor, r, p0, top)
}

/// Square root with a prescribed leading matrix `top` (must satisfy `top² = a`'s
/// leading matrix and be `p0 + nilpotent`).
pub fn sqrt_symbol_with_leading(a: &Symbol, floor: i32, top: SpinMatrix) -> Result<Symbol, SymbolError> {
    let lead = leading(a)?;
    if lead.order % 2 != 0 {
        return Err(SymbolError::OddOrder(lead.order));
    }
    let p0 = top
        .t_coefficient(0)
        .as_scalar_diagonal()
        .and_then(|e| e.as_scalar())
        .and_then(|s| s.as_rational())
        .filter(|p| p.is_positive())
        .ok_or_else(|| SymbolError::EllipticityShape("prescribed leading part is not positive central".into()))?;
    sqrt_with_top(a, floor, lead.order / 2, p0, top)
}

fn sqrt_with_top(a: &Symbol, floor: i32, r: i32, p0: Rational, top: SpinMatrix) -> Result<Symbol, SymbolError> {
    let dim = a.dim();
    let q = &top - &SpinMatrix::scalar_diagonal(crate::algebra::AlgebraElement::from_rational(p0.clone()));
    let mut eff = floor;
    if let Some(fa) = a.floor() {
        eff = eff.max(fa - r);
    }
    let mut out = Symbol::zero(dim)?;
    out.floor = Some(eff);
    if r < eff {
        return Ok(out);
    }
    let b_top = HomogeneousComponent::constant(dim, r, top);
    out.insert(b_top.clone());
    let mut left = LeftFactor::new();
    let mut right = RightFactor::new();
    left.push(b_top.clone());
    right.push(b_top);
    for k in 1..=(r - eff) {
        let target = 2 * r - k;
        let mut y = a.component_or_zero(target);
        y.sub_assign_ref(&star_degree(dim, &mut left, &mut right, target)?);
        let next = solve_anticommutator(&p0, &q, &y.shift_degree(-r));
        left.push(next.clone());
        right.push(next.clone());
        out.insert(next);
    }
    Ok(out)
}

/// `σ(D |D|^{-1})` down to `floor`.
pub fn sign_symbol(f: &OperatorFamily, floor: i32) -> Result<Symbol, SymbolError> {
    let (d, d2) = dirac_symbol(f)?;
    let abs = sqrt_symbol(&d2, floor + 1)?;
    let abs_inv = invert_symbol(&abs, floor - 1)?;
    let s = star_product(&d, &abs_inv, floor)?;
    s.require_depth(floor)?;
    Ok(s)
}
