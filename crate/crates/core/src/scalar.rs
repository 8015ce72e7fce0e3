//! Exact coefficient ring.
//!
//! An [`ExactScalar`] is a finite sum `Σ c_{p,j} π^{p/2} t^j` with Gaussian
//! rational coefficients `c_{p,j}`. The transcendental π is formal (only
//! half-integer powers ever arise from sphere and Gaussian integrals) and t is
//! a nilpotent deformation parameter: every scalar carries a cap `M` and all
//! grades `j > M` are identically zero.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::ScalarError;

pub type Rational = BigRational;
pub type ComplexRational = Complex<Rational>;

/// Cap value for scalars that are not truncated in t.
pub const UNBOUNDED: u32 = u32::MAX;

/// Exponent pair of a scalar term: `π^{pi_half_power/2} · t^{t_power}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Grade {
    pub pi_half_power: u32,
    pub t_power: u32,
}

impl Grade {
    pub const ONE: Grade = Grade { pi_half_power: 0, t_power: 0 };

    pub fn new(pi_half_power: u32, t_power: u32) -> Self {
        Grade { pi_half_power, t_power }
    }
}

#[derive(Clone, Debug)]
pub struct ExactScalar {
    // sorted by grade, no zero coefficients
    terms: Vec<(Grade, ComplexRational)>,
    t_cap: u32,
}

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rational_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn complex_is_zero(c: &ComplexRational) -> bool {
    c.re.is_zero() && c.im.is_zero()
}

impl ExactScalar {
    pub fn zero() -> Self {
        ExactScalar { terms: Vec::new(), t_cap: UNBOUNDED }
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(rational_int(n))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_rational(rational(num, den))
    }

    pub fn from_rational(q: Rational) -> Self {
        Self::from_complex(Complex::new(q, Rational::zero()))
    }

    pub fn from_complex(c: ComplexRational) -> Self {
        Self::monomial(c, Grade::ONE)
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Self::from_complex(Complex::new(Rational::zero(), Rational::one()))
    }

    /// `c · π^{p/2} · t^j`.
    pub fn monomial(c: ComplexRational, grade: Grade) -> Self {
        let terms = if complex_is_zero(&c) { Vec::new() } else { vec![(grade, c)] };
        ExactScalar { terms, t_cap: UNBOUNDED }
    }

    /// `π^{p/2}`.
    pub fn pi_half_power(p: u32) -> Self {
        Self::monomial(Complex::new(Rational::one(), Rational::zero()), Grade::new(p, 0))
    }

    /// `t^j`, untruncated.
    pub fn t_power(j: u32) -> Self {
        Self::monomial(Complex::new(Rational::one(), Rational::zero()), Grade::new(0, j))
    }

    pub fn t_cap(&self) -> u32 {
        self.t_cap
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms[0].0 == Grade::ONE
            && self.terms[0].1.re.is_one()
            && self.terms[0].1.im.is_zero()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Grade, &ComplexRational)> {
        self.terms.iter().map(|(g, c)| (g, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// Drops all grades above `cap` and records `cap` as the truncation order.
    pub fn truncate_t(&self, cap: u32) -> Self {
        ExactScalar {
            terms: self.terms.iter().filter(|(g, _)| g.t_power <= cap).cloned().collect(),
            t_cap: cap,
        }
    }

    /// Coefficient of `t^j`, returned as a t-free scalar.
    pub fn t_coefficient(&self, j: u32) -> Self {
        ExactScalar {
            terms: self
                .terms
                .iter()
                .filter(|(g, _)| g.t_power == j)
                .map(|(g, c)| (Grade::new(g.pi_half_power, 0), c.clone()))
                .collect(),
            t_cap: UNBOUNDED,
        }
    }

    /// Smallest t-power carrying a nonzero coefficient.
    pub fn min_t_power(&self) -> Option<u32> {
        self.terms.iter().map(|(g, _)| g.t_power).min()
    }

    pub fn max_t_power(&self) -> Option<u32> {
        self.terms.iter().map(|(g, _)| g.t_power).max()
    }

    /// The value as a plain Gaussian rational, if it has no π or t dependence.
    pub fn as_complex_rational(&self) -> Option<ComplexRational> {
        match self.terms.as_slice() {
            [] => Some(Complex::new(Rational::zero(), Rational::zero())),
            [(g, c)] if *g == Grade::ONE => Some(c.clone()),
            _ => None,
        }
    }

    pub fn as_rational(&self) -> Option<Rational> {
        self.as_complex_rational().filter(|c| c.im.is_zero()).map(|c| c.re)
    }

    pub fn conj(&self) -> Self {
        ExactScalar {
            terms: self.terms.iter().map(|(g, c)| (*g, c.conj())).collect(),
            t_cap: self.t_cap,
        }
    }

    pub fn scale(&self, c: &ComplexRational) -> Self {
        if complex_is_zero(c) {
            return ExactScalar { terms: Vec::new(), t_cap: self.t_cap };
        }
        ExactScalar {
            terms: self.terms.iter().map(|(g, x)| (*g, x * c)).collect(),
            t_cap: self.t_cap,
        }
    }

    pub fn scale_rational(&self, q: &Rational) -> Self {
        self.scale(&Complex::new(q.clone(), Rational::zero()))
    }

    /// Numerical value at `pi = π` and a given value of t.
    pub fn to_complex_f64(&self, t: f64) -> Complex<f64> {
        let mut acc = Complex::new(0.0, 0.0);
        for (g, c) in &self.terms {
            let w = std::f64::consts::PI.powf(g.pi_half_power as f64 / 2.0)
                * t.powi(g.t_power as i32);
            let re = c.re.to_f64().unwrap_or(f64::NAN);
            let im = c.im.to_f64().unwrap_or(f64::NAN);
            acc += Complex::new(re, im) * w;
        }
        acc
    }

    fn from_map(map: BTreeMap<Grade, ComplexRational>, t_cap: u32) -> Self {
        ExactScalar {
            terms: map
                .into_iter()
                .filter(|(g, c)| g.t_power <= t_cap && !complex_is_zero(c))
                .collect(),
            t_cap,
        }
    }

    fn merge(&self, other: &Self, negate: bool) -> Self {
        let cap = self.t_cap.min(other.t_cap);
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let a = &self.terms;
        let b = &other.terms;
        while i < a.len() || j < b.len() {
            let pick = if i == a.len() {
                std::cmp::Ordering::Greater
            } else if j == b.len() {
                std::cmp::Ordering::Less
            } else {
                a[i].0.cmp(&b[j].0)
            };
            match pick {
                std::cmp::Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    let c = if negate { -b[j].1.clone() } else { b[j].1.clone() };
                    out.push((b[j].0, c));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = if negate { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                    if !complex_is_zero(&c) {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        if cap != UNBOUNDED {
            out.retain(|(g, _)| g.t_power <= cap);
        }
        ExactScalar { terms: out, t_cap: cap }
    }

    fn product(&self, other: &Self) -> Self {
        let cap = self.t_cap.min(other.t_cap);
        if self.terms.len() == 1 && other.terms.len() == 1 {
            let (ga, ca) = &self.terms[0];
            let (gb, cb) = &other.terms[0];
            let g = Grade::new(ga.pi_half_power + gb.pi_half_power, ga.t_power + gb.t_power);
            if g.t_power > cap {
                return ExactScalar { terms: Vec::new(), t_cap: cap };
            }
            let c = ca * cb;
            let terms = if complex_is_zero(&c) { Vec::new() } else { vec![(g, c)] };
            return ExactScalar { terms, t_cap: cap };
        }
        let mut map: BTreeMap<Grade, ComplexRational> = BTreeMap::new();
        for (ga, ca) in &self.terms {
            for (gb, cb) in &other.terms {
                let t_power = ga.t_power + gb.t_power;
                if t_power > cap {
                    continue;
                }
                let g = Grade::new(ga.pi_half_power + gb.pi_half_power, t_power);
                let c = ca * cb;
                map.entry(g)
                    .and_modify(|acc| *acc += &c)
                    .or_insert(c);
            }
        }
        Self::from_map(map, cap)
    }
}

impl PartialEq for ExactScalar {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl Eq for ExactScalar {}

impl Default for ExactScalar {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<Rational> for ExactScalar {
    fn from(q: Rational) -> Self {
        Self::from_rational(q)
    }
}

impl From<i64> for ExactScalar {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl Add<&ExactScalar> for &ExactScalar {
    type Output = ExactScalar;
    fn add(self, rhs: &ExactScalar) -> ExactScalar {
        self.merge(rhs, false)
    }
}

impl Add for ExactScalar {
    type Output = ExactScalar;
    fn add(self, rhs: ExactScalar) -> ExactScalar {
        self.merge(&rhs, false)
    }
}

impl Sub<&ExactScalar> for &ExactScalar {
    type Output = ExactScalar;
    fn sub(self, rhs: &ExactScalar) -> ExactScalar {
        self.merge(rhs, true)
    }
}

impl Sub for ExactScalar {
    type Output = ExactScalar;
    fn sub(self, rhs: ExactScalar) -> ExactScalar {
        self.merge(&rhs, true)
    }
}

impl Mul<&ExactScalar> for &ExactScalar {
    type Output = ExactScalar;
    fn mul(self, rhs: &ExactScalar) -> ExactScalar {
        self.product(rhs)
    }
}

impl Mul for ExactScalar {
    type Output = ExactScalar;
    fn mul(self, rhs: ExactScalar) -> ExactScalar {
        self.product(&rhs)
    }
}

impl Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar {
            terms: self.terms.iter().map(|(g, c)| (*g, -c.clone())).collect(),
            t_cap: self.t_cap,
        }
    }
}

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        -&self
    }
}

impl AddAssign<&ExactScalar> for ExactScalar {
    fn add_assign(&mut self, rhs: &ExactScalar) {
        *self = self.merge(rhs, false);
    }
}

impl SubAssign<&ExactScalar> for ExactScalar {
    fn sub_assign(&mut self, rhs: &ExactScalar) {
        *self = self.merge(rhs, true);
    }
}

impl MulAssign<&ExactScalar> for ExactScalar {
    fn mul_assign(&mut self, rhs: &ExactScalar) {
        *self = self.product(rhs);
    }
}

impl std::iter::Sum for ExactScalar {
    fn sum<I: Iterator<Item = ExactScalar>>(iter: I) -> Self {
        iter.fold(ExactScalar::zero(), |acc, x| acc + x)
    }
}

/// `Γ(k/2)` as `(rational, p)` meaning `rational · π^{p/2}`, for `k ≥ 1`.
pub(crate) fn gamma_half_parts(k: u32) -> (Rational, u32) {
    debug_assert!(k >= 1);
    if k % 2 == 0 {
        let n = k / 2;
        let mut f = BigInt::one();
        for i in 2..n {
            f *= BigInt::from(i);
        }
        (Rational::from_integer(f), 0)
    } else {
        // Γ(m + 1/2) = Π_{i=1}^{m} (i - 1/2) · √π
        let m = (k - 1) / 2;
        let mut q = Rational::one();
        for i in 1..=m {
            q *= rational(2 * i as i64 - 1, 2);
        }
        (q, 1)
    }
}

/// Exact `Γ(x)` for a positive half-integer `x`.
pub fn half_gamma(x: &Rational) -> Result<ExactScalar, ScalarError> {
    let two_x = x * rational_int(2);
    if !two_x.is_integer() || !two_x.is_positive() {
        return Err(ScalarError::NotPositiveHalfInteger(x.to_string()));
    }
    let k = two_x
        .to_integer()
        .to_u32()
        .ok_or_else(|| ScalarError::NotPositiveHalfInteger(x.to_string()))?;
    let (q, p) = gamma_half_parts(k);
    Ok(ExactScalar::monomial(Complex::new(q, Rational::zero()), Grade::new(p, 0)))
}

pub(crate) fn fmt_complex(c: &ComplexRational) -> String {
    if c.im.is_zero() {
        c.re.to_string()
    } else if c.re.is_zero() {
        if c.im.is_one() {
            "i".into()
        } else if (-&c.im).is_one() {
            "-i".into()
        } else {
            format!("{} i", c.im)
        }
    } else if c.im.is_negative() {
        format!("({} - {} i)", c.re, -&c.im)
    } else {
        format!("({} + {} i)", c.re, c.im)
    }
}

pub(crate) fn fmt_pi(p: u32) -> Option<String> {
    match p {
        0 => None,
        2 => Some("pi".into()),
        p if p % 2 == 0 => Some(format!("pi^{{{}}}", p / 2)),
        p => Some(format!("pi^{{{}/2}}", p)),
    }
}

fn fmt_term(g: &Grade, c: &ComplexRational) -> String {
    let mut factors = Vec::new();
    if let Some(pi) = fmt_pi(g.pi_half_power) {
        factors.push(pi);
    }
    match g.t_power {
        0 => {}
        1 => factors.push("t".into()),
        j => factors.push(format!("t^{}", j)),
    }
    let coeff = fmt_complex(c);
    if factors.is_empty() {
        return coeff;
    }
    let joined = factors.join(" * ");
    match coeff.as_str() {
        "1" => joined,
        "-1" => format!("-{}", joined),
        _ => format!("{} * {}", coeff, joined),
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (g, c)) in self.terms.iter().enumerate() {
            let s = fmt_term(g, c);
            if idx == 0 {
                write!(f, "{}", s)?;
            } else if let Some(rest) = s.strip_prefix('-') {
                write!(f, " - {}", rest)?;
            } else {
                write!(f, " + {}", s)?;
            }
        }
        Ok(())
    }
}
