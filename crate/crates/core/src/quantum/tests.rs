use std::f64::consts::PI;

use approx::assert_abs_diff_eq;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::pauli::*;
use super::random::{haar_pure, haar_unitary, hermitian, wishart};
use super::*;

fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn ab() -> SystemDims {
    SystemDims::qubits(&["A", "B"])
}

fn abc() -> SystemDims {
    SystemDims::qubits(&["A", "B", "C"])
}

fn random_state(d: usize, dims: SystemDims, rng: &mut ChaCha8Rng) -> DensityMatrix {
    DensityMatrix::new(wishart(d, d, rng), dims).unwrap()
}

#[test]
fn system_dims_validation() {
    assert!(SystemDims::new(vec![2, 0], vec!["A", "B"]).is_err());
    assert!(SystemDims::new(vec![2, 2], vec!["A", "A"]).is_err());
    assert!(SystemDims::new(vec![2], vec!["A", "B"]).is_err());
    let d = SystemDims::new(vec![2, 3, 4], vec!["A", "B", "C"]).unwrap();
    assert_eq!(d.total(), 24);
    assert_eq!(d.dim_of_set(&["A", "C"]).unwrap(), 8);
    assert!(matches!(d.index_of("D"), Err(crate::Error::UnknownLabel(_))));
}

#[test]
fn density_matrix_rejects_invalid_input() {
    let bad_trace = CMatrix::identity(2, 2);
    assert!(matches!(
        DensityMatrix::new(bad_trace, SystemDims::qubits(&["A"])),
        Err(crate::Error::BadTrace { .. })
    ));
    let non_herm = CMatrix::from_row_slice(2, 2, &[ONE.scale(0.5), ONE, ZERO, ONE.scale(0.5)]);
    assert!(matches!(
        DensityMatrix::new(non_herm, SystemDims::qubits(&["A"])),
        Err(crate::Error::NotHermitian { .. })
    ));
    let negative = CMatrix::from_row_slice(2, 2, &[ONE.scale(1.5), ZERO, ZERO, ONE.scale(-0.5)]);
    assert!(matches!(
        DensityMatrix::new(negative, SystemDims::qubits(&["A"])),
        Err(crate::Error::NotPositive { .. })
    ));
}

#[test]
fn kron_identity_and_pauli() {
    assert_eq!(kron(&identity(2), &identity(2)), identity(4));
    let xx = kron(&x(), &x());
    for r in 0..4 {
        for c in 0..4 {
            let expected = if r + c == 3 { ONE } else { ZERO };
            assert_eq!(xx[(r, c)], expected);
        }
    }
}

#[test]
fn kron_matches_embedded_product_on_three_qubits() {
    let direct = kron(&kron(&x(), &identity(2)), &x());
    let dims = abc();
    let embedded = embed(&x(), "A", &dims).unwrap() * embed(&x(), "C", &dims).unwrap();
    assert_eq!(direct, embedded);
}

#[test]
fn partial_trace_of_bell_state_is_maximally_mixed() {
    let bell = DensityMatrix::from_pure(&phi_plus(), ab()).unwrap();
    let a = partial_trace(&bell, &["A"]).unwrap();
    assert!(max_abs(&(a.matrix() - identity(2).unscale(2.0))) < 1e-15);
    assert_eq!(a.dims().labels(), ["A"]);
}

#[test]
fn partial_trace_of_classical_three_qubit_state() {
    let rho = DensityMatrix::new(
        (projector(&bits("011")) + projector(&bits("100"))).unscale(2.0),
        abc(),
    )
    .unwrap();
    let rho_ab = partial_trace(&rho, &["A", "B"]).unwrap();
    let expected = (projector(&bits("01")) + projector(&bits("10"))).unscale(2.0);
    assert!(max_abs(&(rho_ab.matrix() - expected)) < 1e-15);
}

#[test]
fn partial_trace_keeps_original_order_and_rejects_unknown() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let rho = random_state(8, abc(), &mut rng);
    let ca = partial_trace(&rho, &["C", "A"]).unwrap();
    assert_eq!(ca.dims().labels(), ["A", "C"]);
    assert!(matches!(
        partial_trace(&rho, &["Z"]),
        Err(crate::Error::UnknownLabel(_))
    ));
}

#[test]
fn partial_transpose_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let ra = random_state(2, SystemDims::qubits(&["A"]), &mut rng);
    let rb = random_state(2, SystemDims::qubits(&["B"]), &mut rng);
    let product = ra.tensor(&rb).unwrap();
    let pt = partial_transpose(&product, "B").unwrap();
    let min = pt.symmetric_eigenvalues().min();
    assert!(min > -1e-12);

    // The partial transpose of |phi+> is SWAP/2, whose spectrum is {1/2,1/2,1/2,-1/2}.
    let bell = DensityMatrix::from_pure(&phi_plus(), ab()).unwrap();
    let pt = partial_transpose(&bell, "B").unwrap();
    assert_abs_diff_eq!(pt.symmetric_eigenvalues().min(), -0.5, epsilon = 1e-12);
    assert_abs_diff_eq!(pt.trace().re, 1.0, epsilon = 1e-12);
    assert!(hermitian_deviation(&pt) < 1e-15);

    let twice = partial_transpose_matrix(&pt, bell.dims(), "B").unwrap();
    assert_eq!(&twice, bell.matrix());
}

#[test]
fn permute_subsystems_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let dims = SystemDims::new(vec![2, 3, 2], vec!["A", "B", "C"]).unwrap();
    let rho = random_state(12, dims, &mut rng);
    let p = permute_subsystems(&rho, &["C", "A", "B"]).unwrap();
    assert_eq!(p.dims().dims(), [2, 2, 3]);
    let back = permute_subsystems(&p, &["A", "B", "C"]).unwrap();
    assert!(max_abs(&(back.matrix() - rho.matrix())) < 1e-15);
    let direct = partial_trace(&rho, &["A", "C"]).unwrap();
    let via = partial_trace(&p, &["A", "C"]).unwrap();
    let via = permute_subsystems(&via, &["A", "C"]).unwrap();
    assert!(max_abs(&(direct.matrix() - via.matrix())) < 1e-14);
}

#[test]
fn entropy_examples() {
    let pure = DensityMatrix::from_pure(&plus(), SystemDims::qubits(&["A"])).unwrap();
    assert_abs_diff_eq!(von_neumann_entropy(&pure), 0.0, epsilon = 1e-12);
    let mixed = DensityMatrix::maximally_mixed(SystemDims::qubits(&["A"]));
    assert_abs_diff_eq!(von_neumann_entropy(&mixed), 1.0, epsilon = 1e-12);
    let mixed2 = DensityMatrix::maximally_mixed(ab());
    assert_abs_diff_eq!(von_neumann_entropy(&mixed2), 2.0, epsilon = 1e-12);
    assert_abs_diff_eq!(binary_entropy(0.5), 1.0, epsilon = 1e-15);
    assert_eq!(binary_entropy(1.0), 0.0);
}

#[test]
fn relative_entropy_examples() {
    let q = SystemDims::qubits(&["A"]);
    let zero = DensityMatrix::from_pure(&ket(2, 0), q.clone()).unwrap();
    let mixed = DensityMatrix::maximally_mixed(q);
    assert_abs_diff_eq!(relative_entropy(&zero, &zero).unwrap(), 0.0, epsilon = 1e-12);
    assert_abs_diff_eq!(relative_entropy(&zero, &mixed).unwrap(), 1.0, epsilon = 1e-12);
    assert!(relative_entropy(&mixed, &zero).unwrap().is_infinite());
}

#[test]
fn dephase_examples() {
    let q = SystemDims::qubits(&["A"]);
    let plus_state = DensityMatrix::from_pure(&plus(), q.clone()).unwrap();
    let out = dephase(&plus_state, &MeasurementBasis::computational("A", 2)).unwrap();
    assert!(max_abs(&(out.matrix() - identity(2).unscale(2.0))) < 1e-15);

    // sum_c p_c rho_AB^c (x) |c><c| in a random basis of C is a fixed point.
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let u = haar_unitary(2, &mut rng);
    let basis = MeasurementBasis::from_unitary("C", &u).unwrap();
    let mut m = CMatrix::zeros(8, 8);
    for (k, p) in [(0, 0.3), (1, 0.7)] {
        let rho_ab = wishart(4, 2, &mut rng);
        m += kron(&rho_ab, &projector(&basis.vectors()[k])).scale(p);
    }
    let classical = DensityMatrix::new(m, abc()).unwrap();
    let out = dephase(&classical, &basis).unwrap();
    assert!(max_abs(&(out.matrix() - classical.matrix())) < 1e-14);
}

#[test]
fn measurement_basis_rejects_non_orthonormal() {
    let v = vec![ket(2, 0), plus()];
    assert!(matches!(
        MeasurementBasis::new("A", v),
        Err(crate::Error::NotOrthonormal { .. })
    ));
}

#[test]
fn hermitian_exp_examples() {
    let u0 = hermitian_exp(&x(), 0.0).unwrap();
    assert!(max_abs(&(u0 - identity(2))) < 1e-15);

    // exp(-i X pi/4) = cos(pi/4) I - i sin(pi/4) X
    let u = hermitian_exp(&x(), PI / 4.0).unwrap();
    let expected = (identity(2) - x() * I).unscale(2f64.sqrt());
    assert!(max_abs(&(u - expected)) < 1e-14);

    let non_herm = CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ZERO, ZERO]);
    assert!(matches!(
        hermitian_exp(&non_herm, 1.0),
        Err(crate::Error::NotHermitian { .. })
    ));
}

#[test]
fn hermitian_exp_group_property_and_unitarity() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..10 {
        let h = hermitian(6, &mut rng);
        let (t1, t2) = (0.37, -1.21);
        let u1 = hermitian_exp(&h, t1).unwrap();
        let u2 = hermitian_exp(&h, t2).unwrap();
        let u12 = hermitian_exp(&h, t1 + t2).unwrap();
        assert!(max_abs(&(&u1 * &u2 - &u12)) < 1e-12);
        assert!(max_abs(&(&u1 * u1.adjoint() - identity(6))) < 1e-10);
    }
}

#[test]
fn trace_norm_and_distance() {
    let q = SystemDims::qubits(&["A"]);
    let zero = DensityMatrix::from_pure(&ket(2, 0), q.clone()).unwrap();
    let one = DensityMatrix::from_pure(&ket(2, 1), q).unwrap();
    assert_abs_diff_eq!(trace_distance(zero.matrix(), one.matrix()), 1.0, epsilon = 1e-15);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn partial_trace_inverts_tensor_product(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ra = random_state(2, SystemDims::qubits(&["A"]), &mut rng);
        let rb = DensityMatrix::new(
            wishart(3, 2, &mut rng),
            SystemDims::new(vec![3], vec!["B"]).unwrap(),
        ).unwrap();
        let joint = ra.tensor(&rb).unwrap();
        let back = partial_trace(&joint, &["A"]).unwrap();
        prop_assert!(max_abs(&(back.matrix() - ra.matrix())) < 1e-12);
        let back_b = partial_trace(&joint, &["B"]).unwrap();
        prop_assert!(max_abs(&(back_b.matrix() - rb.matrix())) < 1e-12);
    }

    #[test]
    fn entropy_is_unitarily_invariant(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rho = random_state(4, ab(), &mut rng);
        let u = haar_unitary(4, &mut rng);
        let rotated = DensityMatrix::new(&u * rho.matrix() * u.adjoint(), ab()).unwrap();
        prop_assert!((von_neumann_entropy(&rho) - von_neumann_entropy(&rotated)).abs() < 1e-10);
    }

    #[test]
    fn relative_entropy_is_nonnegative(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rho = random_state(4, ab(), &mut rng);
        let sigma = random_state(4, ab(), &mut rng);
        let s = relative_entropy(&rho, &sigma).unwrap();
        prop_assert!(s > 0.0);
        prop_assert!(relative_entropy(&rho, &rho).unwrap().abs() < 1e-10);
    }

    #[test]
    fn dephasing_is_idempotent_and_does_not_decrease_entropy(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let psi = haar_pure(8, &mut rng);
        let rho = DensityMatrix::new(
            wishart(8, 3, &mut rng).scale(0.5) + (&psi * psi.adjoint()).scale(0.5),
            abc(),
        ).unwrap();
        let basis = MeasurementBasis::from_unitary("B", &haar_unitary(2, &mut rng)).unwrap();
        let once = dephase(&rho, &basis).unwrap();
        let twice = dephase(&once, &basis).unwrap();
        prop_assert!(max_abs(&(once.matrix() - twice.matrix())) < 1e-12);
        prop_assert!(von_neumann_entropy(&once) >= von_neumann_entropy(&rho) - 1e-10);
        prop_assert!(DensityMatrix::new(once.matrix().clone(), abc()).is_ok());
    }
}
