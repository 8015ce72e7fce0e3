#![allow(dead_code)]

use ncps_core::algebra::{AlgebraElement, Generator, Word};
use ncps_core::clifford::GammaMatrix;
use ncps_core::matrix::SpinMatrix;
use ncps_core::scalar::{rational, ExactScalar};
use ncps_core::symbol::{HomogeneousComponent, Symbol, XiMonomial};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn h() -> Generator {
    Generator::hermitian("h").unwrap()
}

pub fn g() -> Generator {
    Generator::hermitian("g").unwrap()
}

pub fn atoms() -> Vec<Generator> {
    vec![h(), g(), h().derive(0).unwrap(), g().derive(1).unwrap()]
}

pub fn random_coeff(rng: &mut ChaCha8Rng) -> ExactScalar {
    let mut n = rng.gen_range(-3i64..=3);
    if n == 0 {
        n = 1;
    }
    let re = ExactScalar::from_ratio(n, rng.gen_range(1i64..=2));
    if rng.gen_bool(0.25) {
        &re * &ExactScalar::i()
    } else {
        re
    }
}

pub fn random_element(rng: &mut ChaCha8Rng, max_len: usize) -> AlgebraElement {
    let atoms = atoms();
    let mut out = AlgebraElement::zero();
    for _ in 0..rng.gen_range(1..=2) {
        let len = rng.gen_range(0..=max_len);
        let w = Word::new((0..len).map(|_| atoms[rng.gen_range(0..atoms.len())]).collect());
        out.add_term(w, &random_coeff(rng));
    }
    out
}

pub fn random_matrix(rng: &mut ChaCha8Rng, dim: usize, max_len: usize) -> SpinMatrix {
    let mut m = SpinMatrix::zero();
    for _ in 0..rng.gen_range(1..=2) {
        let a = random_element(rng, max_len);
        let basis = rng.gen_range(0..=dim);
        let gamma = if basis == 0 { GammaMatrix::identity(dim).unwrap() } else { GammaMatrix::generator(dim, basis - 1).unwrap() };
        m.add_assign_ref(&SpinMatrix::tensor(&a, &gamma));
    }
    m
}

pub fn random_monomial(rng: &mut ChaCha8Rng, dim: usize) -> XiMonomial {
    let mut b = [0u8; 3];
    for e in b.iter_mut().take(dim) {
        *e = rng.gen_range(0..=1);
    }
    XiMonomial(b)
}

pub fn random_component(rng: &mut ChaCha8Rng, dim: usize, degree: i32, max_len: usize) -> HomogeneousComponent {
    let mut c = HomogeneousComponent::zero(dim, degree);
    for _ in 0..rng.gen_range(1..=2) {
        c.add_monomial(random_monomial(rng, dim), &random_matrix(rng, dim, max_len));
    }
    c
}

/// Exact symbol with components in degrees `order` and `order − 1`.
pub fn random_symbol(rng: &mut ChaCha8Rng, dim: usize, order: i32, max_len: usize) -> Symbol {
    let comps = [random_component(rng, dim, order, max_len), random_component(rng, dim, order - 1, max_len)];
    Symbol::from_components(dim, None, comps).unwrap()
}

pub fn half() -> num_rational::BigRational {
    rational(1, 2)
}
