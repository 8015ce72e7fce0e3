mod common;

use common::*;
use ncps_core::algebra::{exp_expand, AlgebraElement, Generator, Word};
use ncps_core::clifford::{clifford_word, levi_civita, GammaMatrix};
use ncps_core::scalar::{half_gamma, rational, ExactScalar};
use ncps_core::parse::parse_element;
use ncps_core::trace::tau_class;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn el(seed: u64, len: usize) -> AlgebraElement {
    random_element(&mut ChaCha8Rng::seed_from_u64(seed), len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn adjoint_is_involutive_antihomomorphism(s1 in any::<u64>(), s2 in any::<u64>()) {
        let a = el(s1, 3);
        let b = el(s2, 3);
        prop_assert_eq!(a.adjoint().adjoint(), a.clone());
        prop_assert_eq!((&a * &b).adjoint(), &b.adjoint() * &a.adjoint());
    }

    #[test]
    fn delta_is_a_derivation(s1 in any::<u64>(), s2 in any::<u64>(), axis in 0usize..3) {
        let a = el(s1, 3);
        let b = el(s2, 3);
        let lhs = (&a * &b).delta(axis).unwrap();
        let rhs = &(&a.delta(axis).unwrap() * &b) + &(&a * &b.delta(axis).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn delta_anticommutes_with_adjoint(s in any::<u64>(), axis in 0usize..3) {
        let a = el(s, 3);
        prop_assert_eq!(a.adjoint().delta(axis).unwrap(), -&a.delta(axis).unwrap().adjoint());
    }

    #[test]
    fn tau_kills_commutators(s1 in any::<u64>(), s2 in any::<u64>()) {
        let a = el(s1, 3);
        let b = el(s2, 3);
        prop_assert!(tau_class(&(&(&a * &b) - &(&b * &a))).is_zero());
    }

    #[test]
    fn exponential_group_law(p in -4i64..=4, q in -4i64..=4, cap in 0u32..4) {
        let c1 = rational(p, 2);
        let c2 = rational(q, 3);
        let lhs = &exp_expand(h(), &c1, cap) * &exp_expand(h(), &c2, cap);
        prop_assert_eq!(lhs.truncate_t(cap), exp_expand(h(), &(&c1 + &c2), cap));
    }

    #[test]
    fn rendering_round_trips_through_parser(s in any::<u64>(), p in 0u32..4, j in 0u32..3) {
        let a = el(s, 3).scale(&(&ExactScalar::pi_half_power(p) * &ExactScalar::t_power(j)));
        let b = &a + &el(s.wrapping_add(1), 2).adjoint();
        for x in [a, b] {
            prop_assert_eq!(parse_element(&x.to_string(), &[h(), g()]).unwrap(), x);
        }
    }

    #[test]
    fn total_derivatives_vanish_modulo_derivations(s in any::<u64>(), axis in 0usize..3) {
        let a = el(s, 2);
        prop_assert!(tau_class(&a.delta(axis).unwrap()).modulo_derivations().is_zero());
    }
}

#[test]
fn multiplication_examples() {
    let hh = AlgebraElement::generator(h());
    let dh = AlgebraElement::generator(h().derive(0).unwrap());
    assert_eq!(&hh * &dh, AlgebraElement::word(Word::new(vec![h(), h().derive(0).unwrap()])));
    assert_eq!(&AlgebraElement::one() * &hh, hh);
    let t = ExactScalar::t_power(1).truncate_t(1);
    let x = &hh + &(&hh * &hh).scale(&t);
    let expected = &(&hh * &hh) + &(&(&hh * &hh) * &hh).scale(&t);
    assert_eq!(&x * &hh, expected);
    assert_eq!((&x * &(&x * &hh)).max_t_power(), Some(1));
}

#[test]
fn adjoint_examples() {
    let dh = AlgebraElement::generator(h().derive(0).unwrap());
    assert_eq!(dh.adjoint(), -&dh);
    let a1 = AlgebraElement::generator(Generator::hermitian("A1").unwrap());
    let hh = AlgebraElement::generator(h());
    assert_eq!((&hh * &a1).adjoint(), &a1 * &hh);
    assert_eq!(AlgebraElement::scalar(ExactScalar::i()).adjoint(), AlgebraElement::scalar(-ExactScalar::i()));
    let u = AlgebraElement::generator(Generator::free("u").unwrap());
    assert_ne!(u.adjoint(), u);
    assert_eq!(u.adjoint().adjoint(), u);
}

#[test]
fn derivation_examples() {
    let hh = AlgebraElement::generator(h());
    let dh = AlgebraElement::generator(h().derive(0).unwrap());
    assert_eq!((&hh * &hh).delta(0).unwrap(), &(&dh * &hh) + &(&hh * &dh));
    assert!(AlgebraElement::one().delta(1).unwrap().is_zero());
    assert_eq!(h().derive(0).unwrap().derive(1).unwrap(), h().derive(1).unwrap().derive(0).unwrap());
    assert!(hh.delta(3).is_err());
}

#[test]
fn trace_class_examples() {
    let hh = AlgebraElement::generator(h());
    let dh = AlgebraElement::generator(h().derive(0).unwrap());
    assert!(tau_class(&(&(&hh * &dh) - &(&dh * &hh))).is_zero());
    assert_eq!(tau_class(&hh).representative(), &hh);
    let a: Vec<AlgebraElement> = (1..=3).map(|i| AlgebraElement::generator(Generator::hermitian(&format!("A{}", i)).unwrap())).collect();
    let x = &(&(&a[0] * &a[1]) * &a[2]) - &(&(&a[1] * &a[2]) * &a[0]);
    assert!(tau_class(&x).is_zero());
    // h δ²h + δh δh = δ(h δh) is zero only modulo derivations
    let d2h = AlgebraElement::generator(h().derive(0).unwrap().derive(0).unwrap());
    let y = &(&hh * &d2h) + &(&dh * &dh);
    assert!(!tau_class(&y).is_zero());
    assert!(tau_class(&y).modulo_derivations().is_zero());
}

#[test]
fn exponential_examples() {
    let hh = AlgebraElement::generator(h());
    let t = ExactScalar::t_power(1);
    assert_eq!(exp_expand(h(), &rational(1, 1), 1), &AlgebraElement::one() + &hh.scale(&t));
    let expected = &(&AlgebraElement::one() + &hh.scale(&t.scale_rational(&rational(1, 2))))
        + &(&hh * &hh).scale(&ExactScalar::t_power(2).scale_rational(&rational(1, 8)));
    assert_eq!(exp_expand(h(), &rational(1, 2), 2), expected);
    assert_eq!(exp_expand(h(), &rational(0, 1), 2), AlgebraElement::one());
}

#[test]
fn element_rendering() {
    let hh = AlgebraElement::generator(h());
    let dh = AlgebraElement::generator(h().derive(0).unwrap());
    let x = &(&hh * &dh) + &(&hh * &hh).scale(&ExactScalar::t_power(1).scale_rational(&rational(1, 2)));
    let s = x.to_string();
    assert!(s.contains("[h . d(1)(h)]"), "{}", s);
    assert!(s.contains("(1/2)*t*[h^2]"), "{}", s);
}

#[test]
fn scalar_examples() {
    assert_eq!(half_gamma(&rational(1, 2)).unwrap(), ExactScalar::pi_half_power(1));
    assert_eq!(half_gamma(&rational(3, 2)).unwrap(), ExactScalar::pi_half_power(1).scale_rational(&rational(1, 2)));
    assert_eq!(half_gamma(&rational(3, 1)).unwrap(), ExactScalar::from_int(2));
    assert!(half_gamma(&rational(0, 1)).is_err());
    assert!(half_gamma(&rational(1, 3)).is_err());
    let t = ExactScalar::t_power(1);
    let s = &(&ExactScalar::one() + &t) + &ExactScalar::t_power(2);
    assert_eq!(s.truncate_t(1), &ExactScalar::one() + &t);
    let pit3 = &ExactScalar::pi_half_power(2) * &ExactScalar::t_power(3);
    assert!(pit3.truncate_t(2).is_zero());
    assert_eq!(ExactScalar::from_ratio(3, 4).truncate_t(0), ExactScalar::from_ratio(3, 4));
    let c = ExactScalar::from_complex(num_complex::Complex::new(rational(3, 4), rational(1, 2)));
    let r = &(&c * &ExactScalar::pi_half_power(3)) * &ExactScalar::t_power(2);
    assert_eq!(r.to_string(), "(3/4 + 1/2 i) * pi^{3/2} * t^2");
}

proptest! {
    #[test]
    fn gamma_recurrence(k in 1i64..30) {
        let x = rational(k, 2);
        let lhs = half_gamma(&(&x + rational(1, 1))).unwrap();
        let rhs = half_gamma(&x).unwrap().scale_rational(&x);
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn clifford_tables() {
    for dim in [2usize, 3] {
        let cr = |n: i64| num_complex::Complex::new(rational(n, 1), rational(0, 1));
        for i in 0..dim {
            for j in 0..dim {
                let gi = GammaMatrix::generator(dim, i).unwrap();
                let gj = GammaMatrix::generator(dim, j).unwrap();
                let (ab, ba) = (&gi * &gj, &gj * &gi);
                for r in 0..2 {
                    for c in 0..2 {
                        let expected = if i == j && r == c { cr(2) } else { cr(0) };
                        assert_eq!(ab.entry(r, c) + ba.entry(r, c), expected);
                    }
                }
                let tr = clifford_word(dim, &[i, j]).unwrap().trace();
                assert_eq!(tr, ExactScalar::from_int(if i == j { 2 } else { 0 }));
            }
        }
    }
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                let tr = clifford_word(3, &[i, j, k]).unwrap().trace();
                let expected = ExactScalar::i().scale_rational(&rational(2 * levi_civita(i, j, k), 1));
                assert_eq!(tr, expected, "{} {} {}", i, j, k);
            }
        }
        assert!(clifford_word(3, &[i]).unwrap().trace().is_zero());
    }
    assert_eq!(clifford_word(3, &[0, 1, 2]).unwrap(), GammaMatrix::identity(3).unwrap().scale(&num_complex::Complex::new(rational(0, 1), rational(1, 1))));
}
