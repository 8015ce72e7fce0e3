//! Seeded random elements and symbols for the property checks.

use ncps_core::symbol::{HomogeneousComponent, XiMonomial};
use ncps_core::{AlgebraElement, ExactScalar, GammaMatrix, Generator, SpinMatrix, Symbol, Word};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub struct Sampler {
    rng: ChaCha8Rng,
    atoms: Vec<Generator>,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        use rand::SeedableRng;
        let h = Generator::hermitian("h").expect("valid name");
        let g = Generator::hermitian("g").expect("valid name");
        let atoms = vec![h, g, h.derive(0).expect("axis"), g.derive(1).expect("axis"), Generator::free("u").expect("valid name")];
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed), atoms }
    }

    pub fn range(&mut self, lo: usize, hi: usize) -> usize {
        self.rng.gen_range(lo..=hi)
    }

    fn coefficient(&mut self) -> ExactScalar {
        let mut n = self.rng.gen_range(-3i64..=3);
        if n == 0 {
            n = 1;
        }
        let re = ExactScalar::from_ratio(n, self.rng.gen_range(1i64..=2));
        if self.rng.gen_bool(0.25) {
            &re * &ExactScalar::i()
        } else {
            re
        }
    }

    pub fn element(&mut self, max_len: usize) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for _ in 0..self.rng.gen_range(1..=2) {
            let len = self.rng.gen_range(0..=max_len);
            let w = Word::new((0..len).map(|_| self.atoms[self.rng.gen_range(0..self.atoms.len())]).collect());
            let c = self.coefficient();
            out.add_term(w, &c);
        }
        out
    }

    fn matrix(&mut self, dim: usize, max_len: usize) -> SpinMatrix {
        let mut m = SpinMatrix::zero();
        for _ in 0..self.rng.gen_range(1..=2) {
            let a = self.element(max_len);
            let basis = self.rng.gen_range(0..=dim);
            let gamma = if basis == 0 {
                GammaMatrix::identity(dim).expect("dimension checked")
            } else {
                GammaMatrix::generator(dim, basis - 1).expect("dimension checked")
            };
            m.add_assign_ref(&SpinMatrix::tensor(&a, &gamma));
        }
        m
    }

    fn component(&mut self, dim: usize, degree: i32, max_len: usize) -> HomogeneousComponent {
        let mut c = HomogeneousComponent::zero(dim, degree);
        for _ in 0..self.rng.gen_range(1..=2) {
            let mut b = [0u8; 3];
            for e in b.iter_mut().take(dim) {
                *e = self.rng.gen_range(0..=1);
            }
            let m = self.matrix(dim, max_len);
            c.add_monomial(XiMonomial(b), &m);
        }
        c
    }

    /// Exact symbol with components in degrees `order` and `order − 1`.
    pub fn symbol(&mut self, dim: usize, order: i32, max_len: usize) -> Symbol {
        let comps = [self.component(dim, order, max_len), self.component(dim, order - 1, max_len)];
        Symbol::from_components(dim, None, comps).expect("consistent dimensions")
    }
}
