mod common;

use common::*;
use ncps_core::algebra::{AlgebraElement, Generator};
use ncps_core::clifford::GammaMatrix;
use ncps_core::functionals::{
    abs_inverse, base_degree, collapse_t, conformal_direction, conformal_sign_residue, cs_density_closed_form,
    cutoff_integral, filter_by_degree, induced_cs_density, laurent_residue, sphere_integral, variation_generators,
    variation_residue, wres, VanishingLevel,
};
use ncps_core::matrix::SpinMatrix;
use ncps_core::scalar::{rational, ExactScalar};
use ncps_core::symbol::{sign_symbol, slash, star_product, HomogeneousComponent, OperatorFamily, Symbol, XiMonomial};
use ncps_core::trace::tau_class;
use ncps_core::SymbolError;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn pi_power(p: u32, q: num_rational::BigRational) -> ExactScalar {
    ExactScalar::pi_half_power(p).scale_rational(&q)
}

/// `∫_{S²} ξ₁^a ξ₂^b ξ₃^c dS` by Simpson in `z = ξ₃` and an exact periodic rule in φ.
fn sphere_quadrature(a: i32, b: i32, c: i32) -> f64 {
    let nz = 20_000;
    let nphi = 64;
    let hz = 2.0 / nz as f64;
    let mut total = 0.0;
    for i in 0..=nz {
        let z = -1.0 + i as f64 * hz;
        let w = if i == 0 || i == nz { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
        let r = (1.0 - z * z).max(0.0).sqrt();
        let mut ring = 0.0;
        for j in 0..nphi {
            let phi = 2.0 * std::f64::consts::PI * j as f64 / nphi as f64;
            ring += (r * phi.cos()).powi(a) * (r * phi.sin()).powi(b);
        }
        ring *= 2.0 * std::f64::consts::PI / nphi as f64;
        total += w * ring * z.powi(c);
    }
    total * hz / 3.0
}

#[test]
fn sphere_integrals() {
    assert_eq!(sphere_integral(&XiMonomial::ONE, 3), pi_power(2, rational(4, 1)));
    assert!(sphere_integral(&XiMonomial([1, 0, 0]), 3).is_zero());
    let v = sphere_integral(&XiMonomial([2, 2, 0]), 3);
    assert_eq!(v, pi_power(2, rational(4, 15)));
    let q = sphere_quadrature(2, 2, 0);
    assert!((q - v.to_complex_f64(0.0).re).abs() < 1e-12, "{}", q);
    assert_eq!(sphere_integral(&XiMonomial::ONE, 2), pi_power(2, rational(2, 1)));
    assert_eq!(sphere_integral(&XiMonomial([2, 0, 0]), 2), pi_power(2, rational(1, 1)));
}

#[test]
fn sign_residues_vanish() {
    let free = wres(&sign_symbol(&OperatorFamily::free(3).unwrap(), -3).unwrap(), 3).unwrap();
    assert_eq!(free.vanishing_level(), VanishingLevel::Density);
    let coupled = wres(&sign_symbol(&OperatorFamily::coupled(3).unwrap(), -3).unwrap(), 3).unwrap();
    assert!(coupled.is_zero());
    assert!(coupled.vanishing_level() <= VanishingLevel::Trace);
    let f = OperatorFamily::conformal(3, 2).unwrap();
    let conf = wres(&sign_symbol(&f, -3).unwrap(), 3).unwrap();
    for j in 0..=2 {
        assert!(conf.t_coefficient(j).is_zero(), "t^{}", j);
    }
}

#[test]
fn residue_needs_depth() {
    let f = OperatorFamily::coupled(3).unwrap();
    let s = sign_symbol(&f, -2).unwrap();
    assert!(matches!(wres(&s, 3), Err(SymbolError::InsufficientDepth { .. })));
}

#[test]
fn residue_vanishes_on_differential_symbols() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..10 {
        let mut a = Symbol::zero(3).unwrap();
        for d in 0..=2 {
            let mut c = HomogeneousComponent::zero(3, d);
            for _ in 0..2 {
                let mut b = random_monomial(&mut rng, 3);
                b.0[0] += d as u8;
                let mut tot = b.total();
                while tot > d {
                    let ax = b.0.iter().position(|e| *e > 0).unwrap();
                    b.0[ax] -= 1;
                    tot -= 1;
                }
                c.add_monomial(b, &random_matrix(&mut rng, 3, 2));
            }
            a.insert(c);
        }
        assert!(wres(&a, 3).unwrap().value.is_zero());
    }
}

#[test]
fn cutoff_integral_examples() {
    let inv_sq = Symbol::from_components(3, None, [HomogeneousComponent::constant(3, -4, SpinMatrix::identity())]).unwrap();
    let c = cutoff_integral(&inv_sq, 3).unwrap();
    assert_eq!(c.finite_part, SpinMatrix::identity().scale(&pi_power(2, rational(4, 1))));
    assert!(!c.log_divergent);
    // radial oracle: 4π ∫_1^R r^{-4} r² dr on a log grid, R = e^{16}
    let steps = 200_000;
    let top = 16.0f64;
    let du = top / steps as f64;
    let radial: f64 = (0..steps)
        .map(|i| {
            let r = ((i as f64 + 0.5) * du).exp();
            r.powi(-4) * r * r * r * du
        })
        .sum::<f64>()
        * 4.0
        * std::f64::consts::PI;
    assert!((radial - c.finite_part.entry(0, 0).as_scalar().unwrap().to_complex_f64(0.0).re).abs() < 1e-5);

    let res = Symbol::from_components(3, None, [HomogeneousComponent::constant(3, -3, SpinMatrix::identity())]).unwrap();
    let c = cutoff_integral(&res, 3).unwrap();
    assert!(c.finite_part.is_zero() && c.log_divergent);
    let c = cutoff_integral(&Symbol::zero(3).unwrap(), 3).unwrap();
    assert!(c.finite_part.is_zero() && !c.log_divergent);
}

#[test]
fn laurent_residue_examples() {
    let hh = AlgebraElement::generator(h());
    let a = Symbol::from_components(3, None, [HomogeneousComponent::constant(3, -3, SpinMatrix::scalar_diagonal(hh.clone()))]).unwrap();
    let r = laurent_residue(&a, 2, 3).unwrap();
    assert_eq!(r, tau_class(&hh.scale(&pi_power(2, rational(4, 1)))));
    assert!(laurent_residue(&Symbol::zero(3).unwrap(), 1, 3).unwrap().is_zero());
    assert!(laurent_residue(&a, 0, 3).is_err());
    let s = sign_symbol(&OperatorFamily::coupled(3).unwrap(), -3).unwrap();
    assert!(laurent_residue(&s, 1, 3).unwrap().is_zero());
}

#[test]
fn variation_residues() {
    let free = OperatorFamily::free(3).unwrap();
    let dir = conformal_direction(3, h()).unwrap();
    let r = variation_residue(&free, &dir).unwrap();
    assert!(r.is_zero());
    // the same residue through cyclicity: −Wres(h · D|D|^{-1})
    assert!(conformal_sign_residue(3, h()).unwrap().is_zero());
    assert!(variation_residue(&free, &Symbol::zero(3).unwrap()).unwrap().value.is_zero());
    for t in [rational(0, 1), rational(1, 4), rational(2, 3), rational(-3, 2)] {
        let f = OperatorFamily::unitary_flow(3, vec![1, 0, 0], t).unwrap();
        let dir = slash(3, &[AlgebraElement::one(), AlgebraElement::zero(), AlgebraElement::zero()]).unwrap();
        let r = variation_residue(&f, &dir).unwrap();
        assert!(r.is_zero());
    }
}

#[test]
fn induced_chern_simons_density() {
    let vars = variation_generators(3);
    // A ≡ 0
    let free_inv = abs_inverse(&OperatorFamily::free(3).unwrap(), -3).unwrap();
    assert!(cs_density_closed_form(&free_inv, &vars).unwrap().is_zero());

    let f = OperatorFamily::coupled(3).unwrap();
    let dens = induced_cs_density(&f, &vars).unwrap();
    let closed = cs_density_closed_form(&abs_inverse(&f, -3).unwrap(), &vars).unwrap();
    assert_eq!(dens.traced, closed);
    assert!(!dens.tau_reduced.is_zero());
    // linear in the variations
    assert!(dens.traced.terms().all(|(w, _)| base_degree(w, &vars) == 1));

    // A ↦ tA with t² cap counts A-degree ≤ 2
    let g = OperatorFamily::coupled_graded(3, 2).unwrap();
    let graded = induced_cs_density(&g, &vars).unwrap();
    let bases: Vec<Generator> = (1..=3).map(|i| Generator::hermitian(&format!("A{}", i)).unwrap()).collect();
    assert_eq!(collapse_t(&graded.traced, 2), filter_by_degree(&dens.traced, &bases, 2));
}

#[test]
fn residue_trace_property() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for case in 0..50 {
        let dim = if case % 3 == 0 { 2 } else { 3 };
        let n = dim as i32;
        let (oa, ob) = [(1, 0), (0, 0), (1, -1), (0, -1)][case % 4];
        let a = random_symbol(&mut rng, dim, oa, 1);
        let b = random_symbol(&mut rng, dim, ob, 1);
        let ab = star_product(&a, &b, -n).unwrap();
        let ba = star_product(&b, &a, -n).unwrap();
        let r = wres(&ab.sub(&ba).unwrap(), dim).unwrap();
        assert!(r.tau_reduced.is_zero(), "case {}: {}", case, r.tau_reduced);
    }
}

#[test]
fn gamma_trace_identities_in_residues() {
    // Wres of ξ_μ|ξ|^{-4} γ^μ vanishes by parity, of |ξ|^{-3} γ¹γ²γ³ gives 2i·4π
    let mut c = HomogeneousComponent::zero(3, -3);
    for mu in 0..3 {
        c.add_monomial(XiMonomial::axis(mu), &SpinMatrix::from_gamma(&GammaMatrix::generator(3, mu).unwrap()));
    }
    let s = Symbol::from_components(3, None, [c]).unwrap();
    assert_eq!(wres(&s, 3).unwrap().vanishing_level(), VanishingLevel::Density);
    let g123 = ncps_core::clifford_word(3, &[0, 1, 2]).unwrap();
    let s = Symbol::from_components(3, None, [HomogeneousComponent::constant(3, -3, SpinMatrix::from_gamma(&g123))]).unwrap();
    let r = wres(&s, 3).unwrap();
    assert_eq!(r.traced, AlgebraElement::scalar(&pi_power(2, rational(8, 1)) * &ExactScalar::i()));
}
