use nalgebra::{DMatrix, Matrix2};
use ncps_num::operator::{gamma, gauge_conjugate, multiplication_matrix, slash};
use ncps_num::spectrum::matrix_eigenvalues;
use ncps_num::{
    build_operator, hermitian_eigenvalues, ConcreteElement, ModeBox, NumError, NumericFamily, OperatorBuilder, Spectrum,
    ThetaMatrix, TruncatedOperator, C64,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn generic_theta() -> ThetaMatrix {
    ThetaMatrix::new(vec![vec![0.0, 0.37, -0.21], vec![-0.37, 0.0, 0.59], vec![0.21, -0.59, 0.0]]).unwrap()
}

fn norms_with_sign(modes: &ModeBox, offset: &[f64]) -> Vec<f64> {
    let mut v: Vec<f64> = modes
        .modes()
        .flat_map(|k| {
            let n = k.iter().zip(offset).map(|(x, o)| (*x as f64 + o).powi(2)).sum::<f64>().sqrt();
            [n, -n]
        })
        .collect();
    v.sort_by(f64::total_cmp);
    v
}

fn max_gap(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

#[test]
fn clifford_relations_of_pauli_matrices() {
    for i in 0..3 {
        for j in 0..3 {
            let ac = gamma(i) * gamma(j) + gamma(j) * gamma(i);
            let expected = if i == j { Matrix2::identity() * c(2.0, 0.0) } else { Matrix2::zeros() };
            assert!((ac - expected).norm() < 1e-15);
        }
    }
    let g123 = gamma(0) * gamma(1) * gamma(2);
    assert!((g123 - Matrix2::identity() * c(0.0, 1.0)).norm() < 1e-15);
}

#[test]
fn free_spectrum_is_plus_minus_norm() {
    let op = build_operator(&NumericFamily::FreeDirac, &ThetaMatrix::zero(3), 3, 2, 0.0).unwrap();
    let modes = ModeBox::new(3, 2).unwrap();
    let expected = norms_with_sign(&modes, &[0.0; 3]);
    // block formula
    assert!(max_gap(&hermitian_eigenvalues(&op).unwrap(), &expected) < 1e-12);
    // dense eigensolver on the assembled matrix
    let dense = TruncatedOperator::from_dense(op.to_dense()).unwrap();
    assert!(!dense.is_block_diagonal());
    let values = hermitian_eigenvalues(&dense).unwrap();
    assert_eq!(values.len(), 250);
    assert!(max_gap(&values, &expected) < 1e-12);
    let flipped: Vec<f64> = values.iter().rev().map(|v| -v).collect();
    assert!(max_gap(&values, &flipped) < 1e-12);
}

#[test]
fn free_spectrum_dimension_two() {
    let op = build_operator(&NumericFamily::FreeDirac, &ThetaMatrix::planar(2, 0.3), 2, 5, 0.0).unwrap();
    let expected = norms_with_sign(&ModeBox::new(2, 5).unwrap(), &[0.0; 2]);
    assert!(max_gap(&hermitian_eigenvalues(&op).unwrap(), &expected) < 1e-12);
}

#[test]
fn symbol_matrix_example() {
    let block = slash(&[1.0, 1.0, 0.0]);
    assert_eq!(block[(0, 1)], c(1.0, -1.0));
    assert_eq!(block[(1, 0)], c(1.0, 1.0));
    let values = matrix_eigenvalues(&DMatrix::from_fn(2, 2, |i, j| block[(i, j)])).unwrap();
    assert!((values[0] + 2f64.sqrt()).abs() < 1e-14);
    assert!((values[1] - 2f64.sqrt()).abs() < 1e-14);
}

#[test]
fn identity_spectrum() {
    let op = TruncatedOperator::from_dense(DMatrix::identity(7, 7)).unwrap();
    assert!(hermitian_eigenvalues(&op).unwrap().iter().all(|v| (v - 1.0).abs() < 1e-15));
}

#[test]
fn random_hermitian_residual_and_trace() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let a = DMatrix::from_fn(50, 50, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let h = (&a + a.adjoint()) * c(0.5, 0.0);
    let spec = Spectrum::of_matrix(h.clone()).unwrap();
    let norm = spec.values.iter().map(|v| v.abs()).fold(0.0, f64::max);
    assert!(spec.max_residual <= 1e-9 * norm);
    let trace: f64 = (0..50).map(|i| h[(i, i)].re).sum();
    assert!((spec.values.iter().sum::<f64>() - trace).abs() < 1e-10);
    assert!(spec.values.windows(2).all(|w| w[0] <= w[1]));
    // independent check of every pair
    for j in 0..50 {
        let v = spec.vectors.column(j);
        let r = (&h * v - v * c(spec.values[j], 0.0)).norm();
        assert!(r <= 1e-9 * norm);
    }
}

#[test]
fn non_hermitian_input_is_rejected() {
    let mut m = DMatrix::<C64>::identity(3, 3);
    m[(0, 1)] = c(1.0, 0.0);
    assert!(matches!(TruncatedOperator::from_dense(m), Err(NumError::NonHermitian(_))));
}

#[test]
fn unitary_flow_is_shifted_free_operator() {
    let family = NumericFamily::UnitaryFlow { shift: vec![1, 0, 0] };
    let op = build_operator(&family, &generic_theta(), 3, 3, 0.5).unwrap();
    let expected = norms_with_sign(&ModeBox::new(3, 3).unwrap(), &[0.5, 0.0, 0.0]);
    assert!(max_gap(&hermitian_eigenvalues(&op).unwrap(), &expected) < 1e-12);
    // D_t − D = t·k·γ on every block
    let free = build_operator(&NumericFamily::FreeDirac, &generic_theta(), 3, 3, 0.0).unwrap();
    let diff = op.to_dense() - free.to_dense();
    let g = gamma(0) * c(0.5, 0.0);
    for i in 0..ModeBox::new(3, 3).unwrap().len() {
        assert!((diff.view((2 * i, 2 * i), (2, 2)) - g).norm() < 1e-15);
    }
    assert!((op.distance(&free).unwrap() - 0.5).abs() < 1e-15);
}

#[test]
fn conformal_operator_is_hermitian_and_close_to_free() {
    let theta = ThetaMatrix::planar(2, 0.41);
    let h = ConcreteElement::cosine(vec![1, 0], 1.0);
    let builder = OperatorBuilder::new(&NumericFamily::ConformalDirac { weyl_factor: h }, &theta, 2, 5).unwrap();
    let free = hermitian_eigenvalues(&builder.at(0.0).unwrap()).unwrap();
    let free_expected = norms_with_sign(&ModeBox::new(2, 5).unwrap(), &[0.0; 2]);
    assert!(max_gap(&free, &free_expected) < 1e-12);
    for t in [1e-3, 1e-2, 5e-2] {
        let op = builder.at(t).unwrap();
        assert!(op.hermiticity_defect() < 1e-12);
        let values = hermitian_eigenvalues(&op).unwrap();
        // Weyl: |λ_i(D_t) − λ_i(D)| ≤ ‖D_t − D‖, and ‖e^{x}De^{x} − D‖ ≤ (e^{2‖x‖} − 1)‖D‖ with ‖x‖ ≤ t/2.
        let dnorm = free.iter().map(|v| v.abs()).fold(0.0, f64::max);
        let bound = (t.exp() - 1.0) * dnorm;
        let gap = max_gap(&values, &free);
        assert!(gap <= bound, "t = {}: {} > {}", t, gap, bound);
        assert!(gap > 0.0);
    }
}

#[test]
fn construction_errors() {
    let theta = ThetaMatrix::planar(2, 0.1);
    let wide = ConcreteElement::cosine(vec![3, 0], 1.0);
    assert!(matches!(
        build_operator(&NumericFamily::ConformalDirac { weyl_factor: wide }, &theta, 2, 3, 0.1),
        Err(NumError::SupportOverflow { radius: 3, cutoff: 3 })
    ));
    let skew = ConcreteElement::unitary(vec![1, 0]);
    assert!(matches!(
        build_operator(&NumericFamily::ConformalDirac { weyl_factor: skew }, &theta, 2, 3, 0.1),
        Err(NumError::NotSelfAdjoint(_))
    ));
    assert!(matches!(build_operator(&NumericFamily::FreeDirac, &theta, 3, 2, 0.0), Err(NumError::ThetaShape { .. })));
    assert!(matches!(build_operator(&NumericFamily::FreeDirac, &ThetaMatrix::zero(4), 4, 2, 0.0), Err(NumError::UnsupportedDimension(4))));
    assert!(matches!(
        build_operator(&NumericFamily::UnitaryFlow { shift: vec![1, 0] }, &ThetaMatrix::zero(3), 3, 2, 0.0),
        Err(NumError::ModeShape { .. })
    ));
}

#[test]
fn shift_matrices_are_unitary_on_interior_columns() {
    let theta = generic_theta();
    let modes = ModeBox::new(3, 3).unwrap();
    for shift in [vec![1, 0, 0], vec![1, -1, 2], vec![0, 2, 1]] {
        let u = multiplication_matrix(&ConcreteElement::unitary(shift.clone()), &theta, &modes).unwrap();
        let gram = u.adjoint() * &u;
        for (j, k) in modes.modes().enumerate() {
            let inside = modes.index(&k.iter().zip(&shift).map(|(x, y)| x + y).collect::<Vec<_>>()).is_some();
            for i in 0..modes.len() {
                let expected = if i == j && inside { 1.0 } else { 0.0 };
                assert!((gram[(i, j)] - c(expected, 0.0)).norm() < 1e-12);
            }
        }
    }
}

#[test]
fn shift_matrices_satisfy_twisted_relation() {
    let theta = generic_theta();
    let modes = ModeBox::new(3, 3).unwrap();
    let pairs = [(vec![1, 0, 0], vec![0, 1, 0]), (vec![1, 1, 0], vec![0, -1, 1]), (vec![-1, 0, 1], vec![1, 1, 1])];
    for (k, l) in pairs {
        let uk = multiplication_matrix(&ConcreteElement::unitary(k.clone()), &theta, &modes).unwrap();
        let ul = multiplication_matrix(&ConcreteElement::unitary(l.clone()), &theta, &modes).unwrap();
        let sum: Vec<i64> = k.iter().zip(&l).map(|(a, b)| a + b).collect();
        let ukl = multiplication_matrix(&ConcreteElement::unitary(sum), &theta, &modes).unwrap();
        let phase = C64::from_polar(1.0, std::f64::consts::PI * theta.pairing(&k, &l));
        let lhs = uk * ul;
        let rhs = ukl * phase;
        for (j, mode) in modes.modes().enumerate() {
            if modes.is_interior(&mode, 2) {
                assert!((lhs.column(j) - rhs.column(j)).norm() < 1e-12);
            }
        }
    }
}

#[test]
fn gauge_conjugation_preserves_spectrum() {
    let theta = generic_theta();
    let op = build_operator(&NumericFamily::FreeDirac, &theta, 3, 3, 0.0).unwrap();
    let reference = hermitian_eigenvalues(&op).unwrap();
    for shift in [vec![1, 0, 0], vec![0, 1, -1]] {
        let conj = gauge_conjugate(&op, &shift, &theta).unwrap();
        let values = matrix_eigenvalues(&conj).unwrap();
        // the compression lives on the modes k with k + shift in the box;
        // its spectrum is that of D there, compared on the interior window
        let radius = 3 - shift.iter().map(|x| x.abs()).max().unwrap();
        let window = radius as f64 + 1e-7;
        let a: Vec<f64> = values.iter().copied().filter(|v| v.abs() <= window).collect();
        let b: Vec<f64> = reference.iter().copied().filter(|v| v.abs() <= window).collect();
        assert_eq!(a.len(), b.len());
        assert!(max_gap(&a, &b) < 1e-9);
    }
}

#[test]
fn theta_and_elements_round_trip_through_json() {
    let theta = generic_theta();
    let back: ThetaMatrix = serde_json::from_str(&serde_json::to_string(&theta).unwrap()).unwrap();
    assert_eq!(back, theta);
    assert!(serde_json::from_str::<ThetaMatrix>("[[0,1],[1,0]]").is_err());
    let family: NumericFamily =
        serde_json::from_str(r#"{"kind":"conformal_dirac","weyl_factor":[{"mode":[1,0],"re":0.5},{"mode":[-1,0],"re":0.5}]}"#).unwrap();
    assert_eq!(family, NumericFamily::ConformalDirac { weyl_factor: ConcreteElement::cosine(vec![1, 0], 1.0) });
}
