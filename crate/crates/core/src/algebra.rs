//! Free unital *-algebra over [`ExactScalar`] in abstract generators,
//! closed under the formal derivations δ₁, δ₂, δ₃.
//!
//! Directions are 0-based (`0..3`) in the API and 1-based in rendered text.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::AlgebraError;
use crate::scalar::{rational_int, ComplexRational, ExactScalar, Grade, Rational};

pub const MAX_DIRECTIONS: usize = 3;
const NAME_BYTES: usize = 12;

/// An atom `δ^α(g)` or `δ^α(g*)`, where `g` is a declared base generator.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Generator {
    name: [u8; NAME_BYTES],
    deriv: [u8; MAX_DIRECTIONS],
    star: bool,
    hermitian: bool,
}

impl Generator {
    fn with_flags(name: &str, hermitian: bool) -> Result<Self, AlgebraError> {
        let bytes = name.as_bytes();
        let valid = !bytes.is_empty()
            && bytes.len() <= NAME_BYTES
            && bytes[0].is_ascii_alphabetic()
            && bytes.iter().all(|b| b.is_ascii_alphanumeric() || *b == b'_');
        if !valid {
            return Err(AlgebraError::InvalidName(name.to_string()));
        }
        let mut buf = [0u8; NAME_BYTES];
        buf[..bytes.len()].copy_from_slice(bytes);
        Ok(Generator { name: buf, deriv: [0; MAX_DIRECTIONS], star: false, hermitian })
    }

    /// A self-adjoint base generator such as `h` or `A1`.
    pub fn hermitian(name: &str) -> Result<Self, AlgebraError> {
        Self::with_flags(name, true)
    }

    /// A base generator with no adjointness relation.
    pub fn free(name: &str) -> Result<Self, AlgebraError> {
        Self::with_flags(name, false)
    }

    pub fn name(&self) -> &str {
        let len = self.name.iter().position(|b| *b == 0).unwrap_or(NAME_BYTES);
        std::str::from_utf8(&self.name[..len]).expect("ascii name")
    }

    pub fn derivatives(&self) -> [u8; MAX_DIRECTIONS] {
        self.deriv
    }

    pub fn derivative_order(&self) -> u32 {
        self.deriv.iter().map(|d| *d as u32).sum()
    }

    pub fn is_star(&self) -> bool {
        self.star
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    /// The underlying base atom with derivatives stripped.
    pub fn base(&self) -> Generator {
        Generator { deriv: [0; MAX_DIRECTIONS], ..*self }
    }

    /// Same base, same star flag, no derivatives applied.
    pub fn same_atom(&self, other: &Generator) -> bool {
        self.name == other.name && self.star == other.star
    }

    /// `δ_axis` applied once more.
    pub fn derive(&self, axis: usize) -> Result<Generator, AlgebraError> {
        if axis >= MAX_DIRECTIONS {
            return Err(AlgebraError::DirectionOutOfRange(axis + 1));
        }
        let mut g = *self;
        g.deriv[axis] += 1;
        Ok(g)
    }

    pub fn with_derivatives(&self, deriv: [u8; MAX_DIRECTIONS]) -> Generator {
        Generator { deriv, ..*self }
    }

    /// `(δ^α g)* = (−1)^{|α|} δ^α(g*)`; returns the atom and the sign.
    fn adjoint(&self) -> (Generator, bool) {
        let star = if self.hermitian { false } else { !self.star };
        (Generator { star, ..*self }, self.derivative_order() % 2 == 1)
    }
}

impl fmt::Debug for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let atom = if self.star { format!("adj({})", self.name()) } else { self.name().to_string() };
        if self.derivative_order() == 0 {
            return write!(f, "{}", atom);
        }
        let dirs: Vec<String> = self
            .deriv
            .iter()
            .enumerate()
            .flat_map(|(axis, &k)| std::iter::repeat((axis + 1).to_string()).take(k as usize))
            .collect();
        write!(f, "d({})({})", dirs.join(","), atom)
    }
}

/// Ordered product of generators; the empty word is the unit.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Generator>);

impl Word {
    pub fn unit() -> Self {
        Word(Vec::new())
    }

    pub fn new(factors: Vec<Generator>) -> Self {
        Word(factors)
    }

    pub fn factors(&self) -> &[Generator] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Lexicographically minimal cyclic rotation.
    pub fn min_rotation(&self) -> Word {
        let n = self.0.len();
        if n <= 1 {
            return self.clone();
        }
        let mut best = self.0.clone();
        let mut cand = self.0.clone();
        for _ in 1..n {
            cand.rotate_left(1);
            if cand < best {
                best.clone_from(&cand);
            }
        }
        Word(best)
    }

    /// Total derivative multi-index carried by the word.
    pub fn total_derivatives(&self) -> [u32; MAX_DIRECTIONS] {
        let mut out = [0u32; MAX_DIRECTIONS];
        for g in &self.0 {
            for (o, d) in out.iter_mut().zip(g.deriv.iter()) {
                *o += *d as u32;
            }
        }
        out
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "[1]");
        }
        let mut parts = Vec::new();
        let mut i = 0;
        while i < self.0.len() {
            let mut j = i + 1;
            while j < self.0.len() && self.0[j] == self.0[i] {
                j += 1;
            }
            if j - i == 1 {
                parts.push(self.0[i].to_string());
            } else {
                parts.push(format!("{}^{}", self.0[i], j - i));
            }
            i = j;
        }
        write!(f, "[{}]", parts.join(" . "))
    }
}

/// Finite linear combination of words with [`ExactScalar`] coefficients.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct AlgebraElement {
    terms: BTreeMap<Word, ExactScalar>,
}

impl AlgebraElement {
    pub fn zero() -> Self {
        AlgebraElement { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::scalar(ExactScalar::one())
    }

    pub fn scalar(s: ExactScalar) -> Self {
        Self::term(Word::unit(), s)
    }

    pub fn from_int(n: i64) -> Self {
        Self::scalar(ExactScalar::from_int(n))
    }

    pub fn from_rational(q: Rational) -> Self {
        Self::scalar(ExactScalar::from_rational(q))
    }

    pub fn from_complex(c: ComplexRational) -> Self {
        Self::scalar(ExactScalar::from_complex(c))
    }

    pub fn generator(g: Generator) -> Self {
        Self::term(Word(vec![g]), ExactScalar::one())
    }

    pub fn word(w: Word) -> Self {
        Self::term(w, ExactScalar::one())
    }

    pub fn term(w: Word, s: ExactScalar) -> Self {
        let mut terms = BTreeMap::new();
        if !s.is_zero() {
            terms.insert(w, s);
        }
        AlgebraElement { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Word, ExactScalar)>>(iter: I) -> Self {
        let mut out = AlgebraElement::zero();
        for (w, s) in iter {
            out.add_term(w, &s);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &ExactScalar)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Word, ExactScalar)> {
        self.terms.into_iter()
    }

    pub fn coefficient(&self, w: &Word) -> ExactScalar {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    /// The element as a pure scalar, if only the unit word occurs.
    pub fn as_scalar(&self) -> Option<ExactScalar> {
        match self.terms.len() {
            0 => Some(ExactScalar::zero()),
            1 => self.terms.get(&Word::unit()).cloned(),
            _ => None,
        }
    }

    pub fn add_term(&mut self, w: Word, s: &ExactScalar) {
        if s.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(s.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + s;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add_assign_ref(&mut self, other: &AlgebraElement) {
        for (w, s) in &other.terms {
            self.add_term(w.clone(), s);
        }
    }

    pub fn sub_assign_ref(&mut self, other: &AlgebraElement) {
        for (w, s) in &other.terms {
            self.add_term(w.clone(), &-s);
        }
    }

    /// `self += c · a · b`, without materializing the product.
    pub fn add_product(&mut self, c: &ExactScalar, a: &AlgebraElement, b: &AlgebraElement) {
        for (wa, sa) in &a.terms {
            let sac = if c.is_one() { sa.clone() } else { sa * c };
            if sac.is_zero() {
                continue;
            }
            for (wb, sb) in &b.terms {
                let s = &sac * sb;
                self.add_term(wa.concat(wb), &s);
            }
        }
    }

    pub fn scale(&self, s: &ExactScalar) -> Self {
        let mut out = AlgebraElement::zero();
        if s.is_zero() {
            return out;
        }
        for (w, c) in &self.terms {
            let p = c * s;
            if !p.is_zero() {
                out.terms.insert(w.clone(), p);
            }
        }
        out
    }

    pub fn scale_rational(&self, q: &Rational) -> Self {
        self.scale(&ExactScalar::from_rational(q.clone()))
    }

    pub fn scale_complex(&self, c: &ComplexRational) -> Self {
        let mut out = AlgebraElement::zero();
        for (w, s) in &self.terms {
            let p = s.scale(c);
            if !p.is_zero() {
                out.terms.insert(w.clone(), p);
            }
        }
        out
    }

    pub fn multiply(&self, other: &AlgebraElement) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        out.add_product(&ExactScalar::one(), self, other);
        out
    }

    /// Reverse words, adjoint every atom, conjugate coefficients.
    pub fn adjoint(&self) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (w, s) in &self.terms {
            let mut negate = false;
            let factors: Vec<Generator> = w
                .0
                .iter()
                .rev()
                .map(|g| {
                    let (a, sign) = g.adjoint();
                    negate ^= sign;
                    a
                })
                .collect();
            let c = if negate { -s.conj() } else { s.conj() };
            out.add_term(Word(factors), &c);
        }
        out
    }

    /// Formal derivation `δ_axis` via the Leibniz rule.
    pub fn delta(&self, axis: usize) -> Result<AlgebraElement, AlgebraError> {
        if axis >= MAX_DIRECTIONS {
            return Err(AlgebraError::DirectionOutOfRange(axis + 1));
        }
        let mut out = AlgebraElement::zero();
        for (w, s) in &self.terms {
            for i in 0..w.0.len() {
                let mut f = w.0.clone();
                f[i] = f[i].derive(axis)?;
                out.add_term(Word(f), s);
            }
        }
        Ok(out)
    }

    /// `δ^α` for a multi-index α.
    pub fn delta_multi(&self, alpha: &[u8]) -> Result<AlgebraElement, AlgebraError> {
        let mut acc = self.clone();
        for (axis, &k) in alpha.iter().enumerate() {
            for _ in 0..k {
                if acc.is_zero() {
                    return Ok(acc);
                }
                acc = acc.delta(axis)?;
            }
        }
        Ok(acc)
    }

    pub fn truncate_t(&self, cap: u32) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (w, s) in &self.terms {
            let c = s.truncate_t(cap);
            if !c.is_zero() {
                out.terms.insert(w.clone(), c);
            }
        }
        out
    }

    /// Coefficient of `t^j`, as a t-free element.
    pub fn t_coefficient(&self, j: u32) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (w, s) in &self.terms {
            let c = s.t_coefficient(j);
            if !c.is_zero() {
                out.terms.insert(w.clone(), c);
            }
        }
        out
    }

    pub fn max_t_power(&self) -> Option<u32> {
        self.terms.values().filter_map(|s| s.max_t_power()).max()
    }

    pub fn min_t_power(&self) -> Option<u32> {
        self.terms.values().filter_map(|s| s.min_t_power()).min()
    }

    /// Smallest truncation cap among the coefficients.
    pub fn t_cap(&self) -> u32 {
        self.terms.values().map(|s| s.t_cap()).min().unwrap_or(crate::scalar::UNBOUNDED)
    }

    /// Keeps the words satisfying `keep`.
    pub fn filter_words<F: Fn(&Word) -> bool>(&self, keep: F) -> AlgebraElement {
        AlgebraElement {
            terms: self.terms.iter().filter(|(w, _)| keep(w)).map(|(w, s)| (w.clone(), s.clone())).collect(),
        }
    }

    /// Replace every word by its minimal rotation and recombine.
    pub(crate) fn cyclic_normal_form(&self) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (w, s) in &self.terms {
            out.add_term(w.min_rotation(), s);
        }
        out
    }
}

/// The order-`cap` Taylor polynomial of `exp(c·t·base)`.
pub fn exp_expand(base: Generator, c: &Rational, cap: u32) -> AlgebraElement {
    let mut out = AlgebraElement::zero();
    let mut coeff = Rational::one();
    for j in 0..=cap {
        if j > 0 {
            coeff = coeff * c / rational_int(j as i64);
        }
        if coeff.is_zero() {
            break;
        }
        let s = ExactScalar::monomial(Complex::new(coeff.clone(), Rational::zero()), Grade::new(0, j))
            .truncate_t(cap);
        out.add_term(Word(vec![base; j as usize]), &s);
    }
    // keep every coefficient carrying the cap, including the unit term
    out.truncate_t(cap)
}

impl fmt::Debug for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

fn compact_rational_part(c: &ComplexRational) -> String {
    let s = crate::scalar::fmt_complex(c);
    if c.im.is_zero() && c.re.is_integer() {
        s
    } else if s.starts_with('(') || s == "i" || s == "-i" {
        s
    } else {
        format!("({})", s)
    }
}

/// Renders a coefficient as a prefix for `*[word]`; `None` means the coefficient 1.
fn coefficient_prefix(s: &ExactScalar) -> Option<String> {
    if s.is_one() {
        return None;
    }
    if s.len() != 1 {
        return Some(format!("({})", s));
    }
    let (g, c) = s.terms().next().expect("one term");
    let mut factors = Vec::new();
    if let Some(pi) = crate::scalar::fmt_pi(g.pi_half_power) {
        factors.push(pi);
    }
    match g.t_power {
        0 => {}
        1 => factors.push("t".into()),
        j => factors.push(format!("t^{}", j)),
    }
    let num = compact_rational_part(c);
    let lead = match (num.as_str(), factors.is_empty()) {
        ("1", false) => None,
        ("-1", false) => Some("-".to_string()),
        _ => Some(num),
    };
    Some(match lead {
        None => factors.join("*"),
        Some(l) if l == "-" => format!("-{}", factors.join("*")),
        Some(l) if factors.is_empty() => l,
        Some(l) => format!("{}*{}", l, factors.join("*")),
    })
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (w, s)) in self.terms.iter().enumerate() {
            let body = match coefficient_prefix(s) {
                None => w.to_string(),
                Some(p) if p == "-1" => format!("-{}", w),
                Some(p) => format!("{}*{}", p, w),
            };
            if idx == 0 {
                write!(f, "{}", body)?;
            } else if let Some(rest) = body.strip_prefix('-') {
                write!(f, " - {}", rest)?;
            } else {
                write!(f, " + {}", body)?;
            }
        }
        Ok(())
    }
}

impl Add<&AlgebraElement> for &AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: &AlgebraElement) -> AlgebraElement {
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
}

impl Add for AlgebraElement {
    type Output = AlgebraElement;
    fn add(mut self, rhs: AlgebraElement) -> AlgebraElement {
        self.add_assign_ref(&rhs);
        self
    }
}

impl Sub<&AlgebraElement> for &AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: &AlgebraElement) -> AlgebraElement {
        let mut out = self.clone();
        out.sub_assign_ref(rhs);
        out
    }
}

impl Sub for AlgebraElement {
    type Output = AlgebraElement;
    fn sub(mut self, rhs: AlgebraElement) -> AlgebraElement {
        self.sub_assign_ref(&rhs);
        self
    }
}

impl Mul<&AlgebraElement> for &AlgebraElement {
    type Output = AlgebraElement;
    fn mul(self, rhs: &AlgebraElement) -> AlgebraElement {
        self.multiply(rhs)
    }
}

impl Mul for AlgebraElement {
    type Output = AlgebraElement;
    fn mul(self, rhs: AlgebraElement) -> AlgebraElement {
        self.multiply(&rhs)
    }
}

impl Neg for &AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        AlgebraElement { terms: self.terms.iter().map(|(w, s)| (w.clone(), -s)).collect() }
    }
}

impl Neg for AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        -&self
    }
}

impl From<Generator> for AlgebraElement {
    fn from(g: Generator) -> Self {
        AlgebraElement::generator(g)
    }
}

impl From<ExactScalar> for AlgebraElement {
    fn from(s: ExactScalar) -> Self {
        AlgebraElement::scalar(s)
    }
}
