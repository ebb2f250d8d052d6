use ncg_core::fermion::{
    bilinear_form, canonical_basis, canonical_basis_from, det_identity_residual, fermion_action, fermion_action_blocks,
    fermion_integral, fermion_integral_in, field_strength, BasisStart, FermionField,
};
use ncg_core::fluctuations::{connes_one_form, total_fluctuation, FluctuatedDirac, OneFormGenerators};
use ncg_core::geometry::{sample_random_geometry, AlgebraKind};
use ncg_core::numerics::{c, determinant, pfaffian_skew, CMatrix, Tolerance};
use ncg_core::product::{build_product_triple, ProductTriple};
use ncg_core::sampling::{complex_gaussian_matrix, random_unitary, random_vector, seeded_rng};
use proptest::prelude::*;

fn tol() -> Tolerance {
    Tolerance::default()
}

fn kind_strategy() -> impl Strategy<Value = AlgebraKind> {
    prop_oneof![
        (1usize..4).prop_map(AlgebraKind::real),
        Just(AlgebraKind::quaternion(2)),
    ]
}

fn setup(kind: AlgebraKind, seed: u64) -> (ProductTriple, FluctuatedDirac) {
    let t = build_product_triple(&sample_random_geometry(kind, 1.0, seed).unwrap()).unwrap();
    let mut rng = seeded_rng(seed ^ 0x99);
    let n = kind.n();
    let pairs: Vec<_> = (0..2)
        .map(|_| (complex_gaussian_matrix(&mut rng, n, n, 0.7), complex_gaussian_matrix(&mut rng, n, n, 0.7)))
        .collect();
    let gen = OneFormGenerators::new(&t, &pairs).unwrap();
    let fd = total_fluctuation(&t, &connes_one_form(&t, &gen, true, tol()).unwrap());
    (t, fd)
}

#[test]
fn action_vanishes_for_zero_operator() {
    let (t, _) = setup(AlgebraKind::real(2), 1);
    let psi = FermionField::new(&t, random_vector(&mut seeded_rng(2), t.hilbert_dim())).unwrap();
    let zero = CMatrix::zeros(t.hilbert_dim(), t.hilbert_dim());
    assert_eq!(fermion_action(&t, &psi, &zero).unwrap(), c(0.0, 0.0));
}

#[test]
fn field_is_concatenation_of_charges() {
    let chi = vec![c(1.0, 0.0); 4];
    let xi = vec![c(0.0, 1.0); 4];
    let f = FermionField::from_components(&chi, &xi);
    assert_eq!(f.chi(), &chi[..]);
    assert_eq!(f.xi(), &xi[..]);
    assert_eq!(f.psi().len(), 8);
}

#[test]
fn field_strength_without_y() {
    let (t, fd) = setup(AlgebraKind::real(2), 3);
    let mut set = fd.coefficients.clone();
    set.y = std::array::from_fn(|_| CMatrix::zeros(2, 2));
    let no_y = FluctuatedDirac::from_coefficients(&t, set.clone());
    let fs = field_strength(&t, &no_y);
    assert!(fs.f.dist_max(&fs.f_theta) <= 1e-12);
    assert_eq!(fs.mixing.max_abs(), 0.0);

    set.theta = std::array::from_fn(|_| CMatrix::zeros(2, 2));
    let vacuum = FluctuatedDirac::from_coefficients(&t, set);
    assert_eq!(field_strength(&t, &vacuum).f.max_abs(), 0.0);
    assert!(det_identity_residual(&t, &vacuum).unwrap() <= 1e-12);
}

#[test]
fn determinant_identity_across_scales() {
    let (t, fd) = setup(AlgebraKind::real(2), 4);
    for s in [0.1, 1.0, 10.0] {
        let mut set = fd.coefficients.clone();
        for k in 0..4 {
            set.theta[k] = set.theta[k].scale_real(s);
            set.y[k] = set.y[k].scale_real(s);
        }
        let scaled = FluctuatedDirac::from_coefficients(&t, set);
        assert!(det_identity_residual(&t, &scaled).unwrap() <= 1e-7, "scale {s}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn bilinear_form_is_antisymmetric(kind in kind_strategy(), seed in any::<u64>()) {
        let (t, fd) = setup(kind, seed);
        let basis = canonical_basis(&t).unwrap();
        prop_assert!(basis.gram_residual() <= 1e-12);
        prop_assert_eq!(basis.pairing_residual(&t), 0.0);
        let a = bilinear_form(&t, &fd.assembled, &basis);
        prop_assert!(a.skew_deviation() <= 1e-9);
    }

    #[test]
    fn action_decomposes_over_charges(kind in kind_strategy(), seed in any::<u64>()) {
        let (t, fd) = setup(kind, seed);
        let psi = FermionField::new(&t, random_vector(&mut seeded_rng(seed), t.hilbert_dim())).unwrap();
        let whole = fermion_action(&t, &psi, &fd.assembled).unwrap();
        let split = fermion_action_blocks(&t, &psi, &fd).unwrap();
        prop_assert!((whole - split).norm() <= 1e-10 * whole.norm().max(1.0));
    }

    #[test]
    fn pfaffian_is_consistent_and_basis_independent(kind in kind_strategy(), seed in any::<u64>()) {
        let (t, fd) = setup(kind, seed);
        let d = &fd.assembled;
        let fi = fermion_integral(&t, d).unwrap();
        prop_assert!(fi.z >= 0.0);
        prop_assert!((fi.z - fi.sqrt_det).abs() <= 1e-7 * fi.sqrt_det.max(1e-300));
        prop_assert!(fi.det.re >= -1e-9);

        let basis = canonical_basis(&t).unwrap();
        let a = bilinear_form(&t, d, &basis);
        let pf = pfaffian_skew(&a, tol().with_abs(1e-9)).unwrap();
        let det_a = determinant(&a).unwrap();
        prop_assert!((pf * pf - det_a).norm() <= 1e-8 * det_a.norm());

        let other = canonical_basis_from(&t, BasisStart::Random(seed)).unwrap();
        let fi2 = fermion_integral_in(&t, d, &other).unwrap();
        prop_assert!((fi2.z - fi.z).abs() <= 1e-8 * fi.z);
    }

    #[test]
    fn integral_is_gauge_invariant(kind in kind_strategy(), seed in any::<u64>()) {
        let (t, fd) = setup(kind, seed);
        let u = random_unitary(&mut seeded_rng(seed), kind.n());
        let big = t.gauge_operator(&u, tol()).unwrap();
        let moved = big.matmul(&fd.assembled).matmul(&big.adjoint());
        let z = fermion_integral(&t, &fd.assembled).unwrap().z;
        let zu = fermion_integral(&t, &moved).unwrap().z;
        prop_assert!((z - zu).abs() <= 1e-8 * z);
    }

    #[test]
    fn field_strength_decomposes(kind in kind_strategy(), seed in any::<u64>()) {
        let (t, fd) = setup(kind, seed);
        prop_assert!(field_strength(&t, &fd).decomposition_residual() <= 1e-10);
        prop_assert!(det_identity_residual(&t, &fd).unwrap() <= 1e-8);
    }
}
