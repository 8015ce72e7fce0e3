mod common;

use common::*;
use ncps_core::algebra::{AlgebraElement, Generator};
use ncps_core::clifford::{clifford_word, GammaMatrix};
use ncps_core::matrix::SpinMatrix;
use ncps_core::scalar::{rational, rational_int, ExactScalar, Rational};
use ncps_core::symbol::{
    dirac_symbol, invert_symbol, sign_symbol, sqrt_symbol, star_product, HomogeneousComponent, OperatorFamily,
    Symbol, SymbolTerm, XiMonomial,
};
use ncps_core::functionals::wres;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn a(i: usize) -> AlgebraElement {
    AlgebraElement::generator(Generator::hermitian(&format!("A{}", i + 1)).unwrap())
}

fn gamma_word(dim: usize, axes: &[usize]) -> SpinMatrix {
    SpinMatrix::from_gamma(&clifford_word(dim, axes).unwrap())
}

fn shipped_families() -> Vec<OperatorFamily> {
    vec![
        OperatorFamily::free(2).unwrap(),
        OperatorFamily::free(3).unwrap(),
        OperatorFamily::coupled(2).unwrap(),
        OperatorFamily::coupled(3).unwrap(),
        OperatorFamily::conformal(2, 2).unwrap(),
        OperatorFamily::conformal(3, 2).unwrap(),
        OperatorFamily::unitary_flow(3, vec![1, 0, 0], rational(1, 3)).unwrap(),
    ]
}

#[test]
fn free_dirac_symbol_matrix() {
    let (d, d2) = dirac_symbol(&OperatorFamily::free(3).unwrap()).unwrap();
    let c = d.component(1).unwrap();
    let one = AlgebraElement::one();
    let i = AlgebraElement::scalar(ExactScalar::i());
    // [[ξ₃, ξ₁−iξ₂],[ξ₁+iξ₂, −ξ₃]]
    let m1 = c.coefficient(&XiMonomial::axis(0));
    let m2 = c.coefficient(&XiMonomial::axis(1));
    let m3 = c.coefficient(&XiMonomial::axis(2));
    assert_eq!(m1, SpinMatrix::from_entries([[AlgebraElement::zero(), one.clone()], [one.clone(), AlgebraElement::zero()]]));
    assert_eq!(m2, SpinMatrix::from_entries([[AlgebraElement::zero(), -&i], [i.clone(), AlgebraElement::zero()]]));
    assert_eq!(m3, SpinMatrix::from_entries([[one.clone(), AlgebraElement::zero()], [AlgebraElement::zero(), -&one]]));
    let comps: Vec<_> = d2.components().collect();
    assert_eq!(comps.len(), 1);
    assert_eq!(*comps[0], HomogeneousComponent::constant(3, 2, SpinMatrix::identity()));
}

#[test]
fn coupled_square_matches_clifford_expansion() {
    for dim in [2, 3] {
        let (_, d2) = dirac_symbol(&OperatorFamily::coupled(dim).unwrap()).unwrap();
        let mut deg1 = HomogeneousComponent::zero(dim, 1);
        let mut deg0 = SpinMatrix::zero();
        for mu in 0..dim {
            for la in 0..dim {
                let gg = gamma_word(dim, &[mu, la]);
                deg1.add_monomial(XiMonomial::axis(mu), &gg.left_mul_element(&a(la)));
                deg1.add_monomial(XiMonomial::axis(la), &gg.left_mul_element(&a(mu)));
                let e = &a(la).delta(mu).unwrap() + &(&a(mu) * &a(la));
                deg0.add_assign_ref(&gg.left_mul_element(&e));
            }
        }
        assert_eq!(d2.component_or_zero(2), HomogeneousComponent::constant(dim, 2, SpinMatrix::identity()));
        assert_eq!(d2.component_or_zero(1), deg1);
        assert_eq!(d2.component_or_zero(0), HomogeneousComponent::constant(dim, 0, deg0));
    }
}

#[test]
fn conformal_first_order_symbol() {
    let (d, _) = dirac_symbol(&OperatorFamily::conformal(3, 1).unwrap()).unwrap();
    let hh = AlgebraElement::generator(h());
    let e2 = &AlgebraElement::one() + &hh.scale(&ExactScalar::t_power(1));
    let mut deg1 = HomogeneousComponent::zero(3, 1);
    let mut deg0 = SpinMatrix::zero();
    for mu in 0..3 {
        let g = GammaMatrix::generator(3, mu).unwrap();
        deg1.add_monomial(XiMonomial::axis(mu), &SpinMatrix::tensor(&e2, &g));
        let dh = hh.delta(mu).unwrap().scale(&ExactScalar::t_power(1).scale_rational(&half()));
        deg0.add_assign_ref(&SpinMatrix::tensor(&dh, &g));
    }
    assert_eq!(d.component_or_zero(1), deg1);
    assert_eq!(d.component_or_zero(0), HomogeneousComponent::constant(3, 0, deg0));
    assert_eq!(d.order(), Some(1));
    assert_eq!(d.lowest_degree(), Some(0));
}

#[test]
fn unitary_flow_symbol_is_shifted_momentum() {
    let t = rational(2, 5);
    let (d, _) = dirac_symbol(&OperatorFamily::unitary_flow(3, vec![1, 0, 0], t.clone()).unwrap()).unwrap();
    let g1 = SpinMatrix::from_gamma(&GammaMatrix::generator(3, 0).unwrap());
    assert_eq!(d.component_or_zero(0), HomogeneousComponent::constant(3, 0, g1.scale_rational(&t)));
    let (free, _) = dirac_symbol(&OperatorFamily::free(3).unwrap()).unwrap();
    assert_eq!(d.component_or_zero(1), free.component_or_zero(1));
}

#[test]
fn unit_of_star_product() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let one = Symbol::identity(3).unwrap();
    for _ in 0..10 {
        let b = random_symbol(&mut rng, 3, 1, 2);
        assert!(star_product(&one, &b, -3).unwrap().agrees_down_to(&b, -3));
        assert!(star_product(&b, &one, -3).unwrap().agrees_down_to(&b, -3));
    }
}

#[test]
fn star_product_is_associative() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for case in 0..100 {
        let dim = if case % 2 == 0 { 2 } else { 3 };
        let (oa, ob, oc) = [(1, 0, -1), (0, 1, 0), (-1, 0, 1), (0, 0, 0)][case % 4];
        let a = random_symbol(&mut rng, dim, oa, 1);
        let b = random_symbol(&mut rng, dim, ob, 1);
        let c = random_symbol(&mut rng, dim, oc, 1);
        let floor = -2;
        let left = star_product(&star_product(&a, &b, floor - oc).unwrap(), &c, floor).unwrap();
        let right = star_product(&a, &star_product(&b, &c, floor - oa).unwrap(), floor).unwrap();
        assert_eq!(left.floor(), Some(floor), "case {}", case);
        assert_eq!(right.floor(), Some(floor), "case {}", case);
        assert!(left.agrees_down_to(&right, floor), "case {}", case);
    }
}

#[test]
fn leibniz_rule() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for case in 0..30 {
        let dim = 2 + case % 2;
        let a = random_symbol(&mut rng, dim, 1, 2);
        let b = random_symbol(&mut rng, dim, 0, 2);
        for mu in 0..dim {
            let lhs = star_product(&a, &b, -3).unwrap().delta(mu).unwrap();
            let rhs = star_product(&a.delta(mu).unwrap(), &b, -3)
                .unwrap()
                .add(&star_product(&a, &b.delta(mu).unwrap(), -3).unwrap())
                .unwrap();
            assert!(lhs.agrees_down_to(&rhs, -3), "case {} axis {}", case, mu);
        }
    }
}

#[test]
fn degree_bookkeeping() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let a = random_symbol(&mut rng, 3, 1, 1);
        let b = random_symbol(&mut rng, 3, -1, 1);
        let p = star_product(&a, &b, -4).unwrap();
        assert!(p.order().map_or(true, |o| o <= 0));
        for c in p.components() {
            assert!(c.symbol_terms().iter().all(|t| t.degree() == c.degree()));
            assert!(c.degree() >= -4);
        }
    }
}

#[test]
fn inversion_and_square_root_round_trips() {
    for f in shipped_families() {
        let (d, d2) = dirac_symbol(&f).unwrap();
        let n = f.dim() as i32;
        let floor = -n - 1;
        let inv = invert_symbol(&d2, floor - 2).unwrap();
        assert!(star_product(&d2, &inv, floor).unwrap().agrees_down_to(&Symbol::identity(f.dim()).unwrap(), floor), "{}", f.name());
        let root = sqrt_symbol(&d2, floor + 1).unwrap();
        assert!(star_product(&root, &root, floor + 2).unwrap().agrees_down_to(&d2, floor + 2), "{}", f.name());
        let abs_inv = invert_symbol(&root, floor - 1).unwrap();
        assert!(star_product(&root, &abs_inv, floor).unwrap().agrees_down_to(&Symbol::identity(f.dim()).unwrap(), floor), "{}", f.name());
        // D has invertible leading part only through D², but D ⋆ |D|^{-1} ⋆ |D|^{-1} ⋆ D still returns 1
        let s = star_product(&d, &abs_inv, floor).unwrap();
        assert_eq!(s.order(), Some(0));
    }
}

#[test]
fn coupled_inverse_absolute_value() {
    let (_, d2) = dirac_symbol(&OperatorFamily::coupled(3).unwrap()).unwrap();
    let root = sqrt_symbol(&d2, -1).unwrap();
    let inv = invert_symbol(&root, -3).unwrap();
    // σ_{−1} = |ξ|^{-1} ⊗ I
    assert_eq!(inv.component_or_zero(-1), HomogeneousComponent::constant(3, -1, SpinMatrix::identity()));
    // σ_{−2} = −(A̸ξ̸ + ξ̸A̸)/(2|ξ|³), the symmetric part of the one-sided form −A̸ξ̸/|ξ|³
    let mut sym = HomogeneousComponent::zero(3, -2);
    for mu in 0..3 {
        for la in 0..3 {
            let gg = gamma_word(3, &[mu, la]);
            let term = gg.left_mul_element(&a(mu)).scale_rational(&rational(-1, 2));
            sym.add_monomial(XiMonomial::axis(la), &term);
            let gg2 = gamma_word(3, &[la, mu]);
            sym.add_monomial(XiMonomial::axis(la), &gg2.left_mul_element(&a(mu)).scale_rational(&rational(-1, 2)));
        }
    }
    assert_eq!(inv.component_or_zero(-2), sym);
    let mut scalar_form = HomogeneousComponent::zero(3, -2);
    for mu in 0..3 {
        scalar_form.add_monomial(XiMonomial::axis(mu), &SpinMatrix::scalar_diagonal(-&a(mu)));
    }
    assert_eq!(sym, scalar_form);
    assert!(inv.component(-3).is_some());
}

#[test]
fn square_root_examples() {
    let quad = Symbol::from_components(3, None, [HomogeneousComponent::constant(3, 2, SpinMatrix::identity())]).unwrap();
    let r = sqrt_symbol(&quad, -3).unwrap();
    assert_eq!(r.components().count(), 1);
    assert_eq!(r.component_or_zero(1), HomogeneousComponent::constant(3, 1, SpinMatrix::identity()));

    let (_, d2) = dirac_symbol(&OperatorFamily::coupled(3).unwrap()).unwrap();
    let r = sqrt_symbol(&d2, 0).unwrap();
    let mut expected = HomogeneousComponent::zero(3, 0);
    for mu in 0..3 {
        expected.add_monomial(XiMonomial::axis(mu), &SpinMatrix::scalar_diagonal(a(mu)));
    }
    assert_eq!(r.component_or_zero(0), expected);

    let (_, d2) = dirac_symbol(&OperatorFamily::conformal(3, 1).unwrap()).unwrap();
    let r = sqrt_symbol(&d2, 1).unwrap();
    let e = &AlgebraElement::one() + &AlgebraElement::generator(h()).scale(&ExactScalar::t_power(1));
    assert_eq!(r.component_or_zero(1), HomogeneousComponent::constant(3, 1, SpinMatrix::scalar_diagonal(e)));
}

#[test]
fn ellipticity_errors() {
    let odd = Symbol::from_components(3, None, [HomogeneousComponent::monomial(3, 1, XiMonomial::axis(0), SpinMatrix::identity())]).unwrap();
    assert!(invert_symbol(&odd, -2).is_err());
    let (d, _) = dirac_symbol(&OperatorFamily::free(3).unwrap()).unwrap();
    assert!(invert_symbol(&d, -2).is_err());
    let cubic = Symbol::from_components(3, None, [HomogeneousComponent::constant(3, 1, SpinMatrix::identity())]).unwrap();
    assert!(sqrt_symbol(&cubic, -2).is_err());
}

#[test]
fn free_sign_has_no_lower_terms() {
    let s = sign_symbol(&OperatorFamily::free(3).unwrap(), -3).unwrap();
    assert_eq!(s.components().count(), 1);
    let mut c = HomogeneousComponent::zero(3, 0);
    for mu in 0..3 {
        c.add_monomial(XiMonomial::axis(mu), &SpinMatrix::from_gamma(&GammaMatrix::generator(3, mu).unwrap()));
    }
    assert_eq!(s.component_or_zero(0), c);
}

#[test]
fn coupled_sign_has_residue_component() {
    let s = sign_symbol(&OperatorFamily::coupled(3).unwrap(), -3).unwrap();
    let c = s.component(-3).expect("degree −3 part");
    assert!(!c.is_zero());
    let r = wres(&s, 3).unwrap();
    assert!(!r.value.is_zero());
    assert!(r.traced.is_zero());
}

fn binomial_half(j: u32) -> Rational {
    // binom(−1/2, j)
    let mut acc = Rational::from_integer(1.into());
    for i in 0..j {
        acc = acc * (rational(-1, 2) - rational_int(i as i64)) / rational_int(i as i64 + 1);
    }
    acc
}

#[test]
fn unitary_flow_sign_matches_binomial_series() {
    let k = [1i64, 0, 0];
    let t = rational(1, 3);
    let v: Vec<Rational> = k.iter().map(|x| &t * rational_int(*x)).collect();
    let dim = 3;
    let floor = -4;
    // |ξ+v|^{-1} = |ξ|^{-1} Σ_j binom(−1/2, j) u^j with u = 2ξ·v/ξ² + v²/ξ²
    let mut u = Symbol::zero(dim).unwrap();
    let mut u1 = HomogeneousComponent::zero(dim, -1);
    for (axis, vi) in v.iter().enumerate() {
        u1.add_monomial(XiMonomial::axis(axis), &SpinMatrix::identity().scale_rational(&(vi * rational_int(2))));
    }
    u.insert(u1);
    let v2: Rational = v.iter().map(|x| x * x).sum();
    u.insert(HomogeneousComponent::constant(dim, -2, SpinMatrix::identity().scale_rational(&v2)));
    let mut series = Symbol::identity(dim).unwrap();
    let mut power = Symbol::identity(dim).unwrap();
    // the degree-1 slash needs |ξ+v|^{-1} one degree below the floor
    for j in 1..=(-floor) as u32 {
        power = power_mul(&power, &u, floor);
        let term = power.scale(&ExactScalar::from_rational(binomial_half(j)));
        series = series.add(&term).unwrap();
    }
    let mut inv_abs = Symbol::zero(dim).unwrap();
    for c in series.components() {
        if c.degree() >= floor {
            inv_abs.insert(c.shift_degree(-1));
        }
    }
    let mut slash = free_slash(dim);
    slash.insert(HomogeneousComponent::constant(
        dim,
        0,
        (0..dim).fold(SpinMatrix::zero(), |acc, ax| {
            &acc + &SpinMatrix::from_gamma(&GammaMatrix::generator(dim, ax).unwrap()).scale_rational(&v[ax])
        }),
    ));
    let mut oracle = Symbol::zero(dim).unwrap();
    for c1 in slash.components() {
        for c2 in inv_abs.components() {
            let p = c1.multiply(c2);
            if p.degree() >= floor {
                oracle.insert(p);
            }
        }
    }
    let f = OperatorFamily::unitary_flow(dim, k.to_vec(), t).unwrap();
    let s = sign_symbol(&f, floor).unwrap();
    assert!(s.agrees_down_to(&oracle, floor));
}

fn free_slash(dim: usize) -> Symbol {
    let mut c = HomogeneousComponent::zero(dim, 1);
    for mu in 0..dim {
        c.add_monomial(XiMonomial::axis(mu), &SpinMatrix::from_gamma(&GammaMatrix::generator(dim, mu).unwrap()));
    }
    Symbol::from_components(dim, None, [c]).unwrap()
}

/// Pointwise product of scalar-coefficient symbols, keeping degrees ≥ floor.
fn power_mul(a: &Symbol, b: &Symbol, floor: i32) -> Symbol {
    let mut out = Symbol::zero(a.dim()).unwrap();
    for x in a.components() {
        for y in b.components() {
            let p = x.multiply(y);
            if p.degree() >= floor {
                out.insert(p);
            }
        }
    }
    out
}

#[test]
fn normal_form_zero_tests() {
    let inv3 = |b: XiMonomial| SymbolTerm { coeff: SpinMatrix::identity(), xi_monomial: b, half_denominator: 3 };
    let mut terms: Vec<SymbolTerm> = (0..3).map(|ax| {
        let mut b = [0u8; 3];
        b[ax] = 2;
        inv3(XiMonomial(b))
    }).collect();
    terms.push(SymbolTerm { coeff: -&SpinMatrix::identity(), xi_monomial: XiMonomial::ONE, half_denominator: 1 });
    assert!(HomogeneousComponent::from_terms(3, &terms).unwrap().is_zero());
    let odd = SymbolTerm { coeff: SpinMatrix::identity(), xi_monomial: XiMonomial::axis(0), half_denominator: 1 };
    assert!(!HomogeneousComponent::from_terms(3, &[odd]).unwrap().is_zero());
    let hh = AlgebraElement::generator(h());
    let comm = &(&hh * &hh.delta(0).unwrap()) - &(&hh.delta(0).unwrap() * &hh);
    let t = SymbolTerm { coeff: SpinMatrix::scalar_diagonal(comm), xi_monomial: XiMonomial::axis(0), half_denominator: 0 };
    assert!(!HomogeneousComponent::from_terms(3, &[t]).unwrap().is_zero());
}
