use proptest::prelude::*;

use jensen_lab_core::constructs::{
    average_conjugations, pinch, pinching_unitary, random_contraction_pair_with, ContractionPair,
    PairMode,
};
use jensen_lab_core::eigen::{eigh, min_eigenvalue_by_bisection, psd_tol};
use jensen_lab_core::random::{random_hermitian_in, random_projection_family, random_unitary};
use jensen_lab_core::verify::{
    check_hp_k_term, check_jensen, check_pinching_inequality, check_unitary_invariance,
};
use jensen_lab_core::{
    apply, make_function, ComplexMatrix, HermitianMatrix, Interval, OperatorMap,
};

fn unit() -> Interval {
    Interval::new(-1.0, 1.0).unwrap()
}

fn positive() -> Interval {
    Interval::new(0.0, 3.0).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eigh_reconstructs_and_orders(dim in 1usize..=16, seed in any::<u64>()) {
        let a = random_hermitian_in(&Interval::new(-5.0, 5.0).unwrap(), dim, seed).unwrap();
        let dec = eigh(&a).unwrap();
        let scale = 1.0 + a.max_norm();
        prop_assert!((&dec.reconstruct() - &a).max_norm() <= 1e-12 * scale * dim as f64);
        prop_assert!(dec.unitary.unitarity_residual() <= 1e-12 * dim as f64);
        prop_assert!(dec.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        let sum: f64 = dec.eigenvalues.iter().sum();
        prop_assert!((sum - a.trace()).abs() <= 1e-11 * scale * dim as f64);
    }

    #[test]
    fn bisection_agrees_with_jacobi(dim in 1usize..=12, seed in any::<u64>()) {
        let a = random_hermitian_in(&Interval::new(-3.0, 7.0).unwrap(), dim, seed).unwrap();
        let jacobi = eigh(&a).unwrap().min();
        let bisect = min_eigenvalue_by_bisection(&a, 1e-13);
        prop_assert!((jacobi - bisect).abs() <= 1e-10);
    }

    #[test]
    fn pinching_equals_average_of_conjugations(dim in 1usize..=16, k in 1usize..=5, seed in any::<u64>()) {
        let k = k.min(dim);
        let x = random_hermitian_in(&Interval::new(-4.0, 4.0).unwrap(), dim, seed).unwrap();
        let family = random_projection_family(dim, k, seed ^ 0x5a5a).unwrap();
        let u = pinching_unitary(&family);
        let lhs = pinch(&x, &family).unwrap();
        let rhs = average_conjugations(&x, &u, k).unwrap();
        prop_assert!((&lhs - &rhs).max_norm() <= 1e-10 * (1.0 + x.max_norm()));
    }

    #[test]
    fn functional_calculus_is_unitarily_covariant(dim in 1usize..=8, seed in any::<u64>()) {
        let a = random_hermitian_in(&positive(), dim, seed).unwrap();
        let u = random_unitary(dim, seed).unwrap();
        for name in ["square", "inverse", "neg_log", "entropy", "neg_sqrt", "cube"] {
            let map = OperatorMap::spectral(make_function(name, &[]).unwrap());
            let r = check_unitary_invariance(&map, &a, &u, 1e-9).unwrap();
            prop_assert!(r.pass, "{}: {}", name, r.margin);
        }
    }

    #[test]
    fn unitary_weights_make_jensen_an_equality(dim in 1usize..=6, seed in any::<u64>()) {
        let a = random_hermitian_in(&positive(), dim, seed).unwrap();
        let b = random_hermitian_in(&positive(), dim, seed.wrapping_add(1)).unwrap();
        let pair = random_contraction_pair_with(dim, seed, PairMode::Unitary).unwrap();
        for spec in ["spectral:square", "spectral:inverse", "trace", "affine:2,1"] {
            let map: OperatorMap = spec.parse().unwrap();
            let tol = psd_tol(&[&a, &b]) * 10.0;
            let r = check_jensen(&map, &a, &b, &pair, tol).unwrap();
            prop_assert!(r.margin.abs() <= tol, "{}: {}", spec, r.margin);
        }
    }

    #[test]
    fn two_term_hp_matches_jensen(dim in 1usize..=6, seed in any::<u64>()) {
        let a = random_hermitian_in(&positive(), dim, seed).unwrap();
        let b = random_hermitian_in(&positive(), dim, seed.wrapping_add(7)).unwrap();
        let pair = random_contraction_pair_with(dim, seed, PairMode::General).unwrap();
        for name in ["square", "inverse", "cube"] {
            let f = make_function(name, &[]).unwrap();
            let jensen = check_jensen(&OperatorMap::spectral(f.clone()), &a, &b, &pair, 1e-9).unwrap();
            let hp = check_hp_k_term(&f, &[a.clone(), b.clone()], &[pair.c().clone(), pair.d().clone()], 1e-9).unwrap();
            prop_assert!((jensen.margin - hp.margin).abs() <= 1e-10 * (1.0 + jensen.margin.abs()));
        }
    }

    #[test]
    fn pinching_is_hp_with_projection_weights(dim in 2usize..=6, k in 2usize..=4, seed in any::<u64>()) {
        let k = k.min(dim);
        let x = random_hermitian_in(&positive(), dim, seed).unwrap();
        let family = random_projection_family(dim, k, seed).unwrap();
        let f = make_function("inverse", &[]).unwrap();
        let pinching = check_pinching_inequality(&OperatorMap::spectral(f.clone()), &x, &family, 1e-9).unwrap();
        let weights: Vec<ComplexMatrix> = family.iter().map(|p| p.as_matrix().clone()).collect();
        let hp = check_hp_k_term(&f, &vec![x.clone(); k], &weights, 1e-9).unwrap();
        prop_assert!((pinching.margin - hp.margin).abs() <= 1e-10 * (1.0 + hp.margin.abs()));
        prop_assert!(pinching.pass);
    }

    #[test]
    fn projection_pairs_are_contraction_pairs(dim in 1usize..=8, seed in any::<u64>()) {
        let family = random_projection_family(dim, 1.max(dim / 2), seed).unwrap();
        let pair = ContractionPair::from_projection(&family.projections()[0]).unwrap();
        prop_assert!(pair.residual() <= 1e-12);
    }

    #[test]
    fn applying_identity_returns_the_input(dim in 1usize..=10, seed in any::<u64>()) {
        let a = random_hermitian_in(&unit(), dim, seed).unwrap();
        let id = make_function("identity", &[]).unwrap();
        prop_assert!((&apply(&id, &a).unwrap() - &a).max_norm() <= 1e-13 * dim as f64);
    }
}

#[test]
fn hermitian_matrix_json_round_trips() {
    let a = random_hermitian_in(&unit(), 5, 3).unwrap();
    let text = serde_json::to_string(&a).unwrap();
    let back: HermitianMatrix = serde_json::from_str(&text).unwrap();
    assert_eq!(a, back);
}
