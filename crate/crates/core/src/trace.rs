//! Formal trace classes.
//!
//! `τ` is modelled by quotients of the free algebra: [`tau_class`] uses the
//! cyclic quotient (`τ(ab) = τ(ba)`), and [`TauClass::modulo_derivations`]
//! additionally kills total derivatives (`τ(δ_μ x) = 0`), which is the relation
//! the trace on the torus satisfies and the one integration by parts needs.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Zero};

use crate::algebra::{AlgebraElement, Generator, Word, MAX_DIRECTIONS};
use crate::scalar::{ExactScalar, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Quotient {
    Cyclic,
    CyclicAndDerivations,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TauClass {
    representative: AlgebraElement,
    quotient: Quotient,
}

/// Cyclic normal form of `a`.
pub fn tau_class(a: &AlgebraElement) -> TauClass {
    TauClass { representative: a.cyclic_normal_form(), quotient: Quotient::Cyclic }
}

impl TauClass {
    pub fn zero() -> Self {
        TauClass { representative: AlgebraElement::zero(), quotient: Quotient::Cyclic }
    }

    pub fn representative(&self) -> &AlgebraElement {
        &self.representative
    }

    pub fn quotient(&self) -> Quotient {
        self.quotient
    }

    pub fn is_zero(&self) -> bool {
        self.representative.is_zero()
    }

    /// Canonical representative modulo cyclic rotations and total derivatives.
    pub fn modulo_derivations(&self) -> TauClass {
        if self.quotient == Quotient::CyclicAndDerivations {
            return self.clone();
        }
        TauClass {
            representative: reduce_derivations(&self.representative),
            quotient: Quotient::CyclicAndDerivations,
        }
    }

    fn combine(&self, other: &TauClass, negate: bool) -> TauClass {
        let q = if self.quotient == other.quotient { self.quotient } else { Quotient::CyclicAndDerivations };
        let (a, b) = if q == Quotient::CyclicAndDerivations {
            (self.modulo_derivations(), other.modulo_derivations())
        } else {
            (self.clone(), other.clone())
        };
        let rep = if negate {
            &a.representative - &b.representative
        } else {
            &a.representative + &b.representative
        };
        TauClass { representative: rep, quotient: q }
    }

    pub fn add(&self, other: &TauClass) -> TauClass {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &TauClass) -> TauClass {
        self.combine(other, true)
    }

    pub fn scale(&self, s: &ExactScalar) -> TauClass {
        TauClass { representative: self.representative.scale(s), quotient: self.quotient }
    }

    pub fn t_coefficient(&self, j: u32) -> TauClass {
        TauClass { representative: self.representative.t_coefficient(j), quotient: self.quotient }
    }
}

impl fmt::Display for TauClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "tau({})", self.representative)
    }
}

type Signature = (Vec<Generator>, [u32; MAX_DIRECTIONS]);

fn signature(w: &Word) -> Signature {
    let mut atoms: Vec<Generator> = w.factors().iter().map(|g| g.base()).collect();
    atoms.sort();
    (atoms, w.total_derivatives())
}

/// Reduced row echelon basis of a space of relations between cyclic words.
/// Each row has a pivot (its largest word, coefficient 1) absent from all other rows.
#[derive(Default)]
struct RelationBasis {
    rows: Vec<(Word, BTreeMap<Word, Rational>)>,
}

impl RelationBasis {
    fn insert(&mut self, mut row: BTreeMap<Word, Rational>) {
        for (pivot, r) in &self.rows {
            if let Some(c) = row.get(pivot).cloned() {
                axpy(&mut row, &-c, r);
            }
        }
        let Some((pivot, lead)) = row.iter().next_back().map(|(w, c)| (w.clone(), c.clone())) else {
            return;
        };
        let inv = Rational::one() / lead;
        for v in row.values_mut() {
            *v = &*v * &inv;
        }
        for (_, r) in self.rows.iter_mut() {
            if let Some(c) = r.get(&pivot).cloned() {
                axpy(r, &-c, &row);
            }
        }
        self.rows.push((pivot, row));
    }
}

fn axpy(target: &mut BTreeMap<Word, Rational>, c: &Rational, row: &BTreeMap<Word, Rational>) {
    for (w, v) in row {
        let entry = target.entry(w.clone()).or_insert_with(Rational::zero);
        *entry += c * v;
        if entry.is_zero() {
            target.remove(w);
        }
    }
}

/// All words whose atoms are a permutation of `atoms` with total derivatives `total`,
/// one per cyclic class.
fn enumerate_cyclic_words(atoms: &[Generator], total: [u32; MAX_DIRECTIONS]) -> Vec<Word> {
    let mut perms = Vec::new();
    let mut current = Vec::new();
    let mut used = vec![false; atoms.len()];
    permute(atoms, &mut used, &mut current, &mut perms);

    let k = atoms.len();
    let mut distributions: Vec<Vec<[u8; MAX_DIRECTIONS]>> = vec![vec![[0; MAX_DIRECTIONS]; k]];
    for (axis, &n) in total.iter().enumerate() {
        let mut next = Vec::new();
        for d in &distributions {
            for comp in compositions(n, k) {
                let mut e = d.clone();
                for (slot, c) in e.iter_mut().zip(comp) {
                    slot[axis] = c as u8;
                }
                next.push(e);
            }
        }
        distributions = next;
    }

    let mut seen = std::collections::BTreeSet::new();
    for p in &perms {
        for d in &distributions {
            let w = Word::new(p.iter().zip(d).map(|(g, a)| g.with_derivatives(*a)).collect());
            seen.insert(w.min_rotation());
        }
    }
    seen.into_iter().collect()
}

fn permute(atoms: &[Generator], used: &mut [bool], current: &mut Vec<Generator>, out: &mut Vec<Vec<Generator>>) {
    if current.len() == atoms.len() {
        out.push(current.clone());
        return;
    }
    let mut last: Option<Generator> = None;
    for i in 0..atoms.len() {
        if used[i] || last == Some(atoms[i]) {
            continue;
        }
        last = Some(atoms[i]);
        used[i] = true;
        current.push(atoms[i]);
        permute(atoms, used, current, out);
        current.pop();
        used[i] = false;
    }
}

fn compositions(n: u32, k: usize) -> Vec<Vec<u32>> {
    if k == 0 {
        return if n == 0 { vec![vec![]] } else { vec![] };
    }
    if k == 1 {
        return vec![vec![n]];
    }
    let mut out = Vec::new();
    for first in 0..=n {
        for mut rest in compositions(n - first, k - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn relation_basis(sig: &Signature) -> RelationBasis {
    let (atoms, total) = sig;
    let mut basis = RelationBasis::default();
    for axis in 0..MAX_DIRECTIONS {
        if total[axis] == 0 {
            continue;
        }
        let mut lower = *total;
        lower[axis] -= 1;
        for w in enumerate_cyclic_words(atoms, lower) {
            let d = AlgebraElement::word(w).delta(axis).expect("axis in range").cyclic_normal_form();
            let row: BTreeMap<Word, Rational> = d
                .terms()
                .map(|(w, s)| (w.clone(), s.as_rational().expect("integer relation coefficients")))
                .collect();
            basis.insert(row);
        }
    }
    basis
}

fn reduce_derivations(a: &AlgebraElement) -> AlgebraElement {
    let cyc = a.cyclic_normal_form();
    let mut groups: BTreeMap<Signature, Vec<(Word, ExactScalar)>> = BTreeMap::new();
    for (w, s) in cyc.terms() {
        groups.entry(signature(w)).or_default().push((w.clone(), s.clone()));
    }
    let mut cache: HashMap<Signature, RelationBasis> = HashMap::new();
    let mut out = AlgebraElement::zero();
    for (sig, terms) in groups {
        let mut vec = AlgebraElement::from_terms(terms);
        if sig.0.is_empty() || sig.1.iter().all(|d| *d == 0) {
            out.add_assign_ref(&vec);
            continue;
        }
        let basis = cache.entry(sig.clone()).or_insert_with(|| relation_basis(&sig));
        for (pivot, row) in &basis.rows {
            let c = vec.coefficient(pivot);
            if c.is_zero() {
                continue;
            }
            for (w, q) in row {
                vec.add_term(w.clone(), &-c.scale_rational(q));
            }
        }
        out.add_assign_ref(&vec);
    }
    out
}
