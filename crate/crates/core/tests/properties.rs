use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use dwradius::bounds::{evaluate_all, evaluate_bound, BoundId};
use dwradius::harness::{gen_matrix, MatrixClass};
use dwradius::linalg::MatrixFile;
use dwradius::radii::{generalized_dw_radius, generalized_numerical_radius};
use dwradius::{ComplexMatrix, NormSpec};

fn norm_strategy() -> impl Strategy<Value = NormSpec> {
    prop_oneof![
        Just(NormSpec::operator()),
        Just(NormSpec::frobenius()),
        Just(NormSpec::trace()),
        Just(NormSpec::numerical_radius()),
        (1.0f64..6.0).prop_map(|p| NormSpec::schatten(p).unwrap()),
    ]
}

fn matrix_strategy() -> impl Strategy<Value = ComplexMatrix> {
    (0..MatrixClass::ALL.len(), 1usize..=4, any::<u64>()).prop_map(|(c, n, seed)| {
        gen_matrix(MatrixClass::ALL[c], n, &mut ChaCha8Rng::seed_from_u64(seed))
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn catalog_holds_except_refuted(t in matrix_strategy(), s_seed in any::<u64>(), norm in norm_strategy()) {
        let s = gen_matrix(MatrixClass::Ginibre, t.n(), &mut ChaCha8Rng::seed_from_u64(s_seed));
        for r in evaluate_all(&t, Some(&s), &norm).unwrap() {
            if r.bound != BoundId::RefutedUp {
                prop_assert!(r.satisfied, "{} margin {}", r.bound, r.margin);
            }
        }
    }

    #[test]
    fn radii_are_rotation_invariant_and_homogeneous(
        t in matrix_strategy(),
        norm in norm_strategy(),
        phi in 0.0f64..std::f64::consts::TAU,
        c in 0.1f64..5.0,
    ) {
        let w = generalized_numerical_radius(&t, &norm).unwrap().value;
        let rotated = generalized_numerical_radius(&t.rotate(phi), &norm).unwrap().value;
        prop_assert!((w - rotated).abs() <= 1e-8 * w.max(1.0));
        let scaled = generalized_numerical_radius(&t.scale_real(c), &norm).unwrap().value;
        prop_assert!((scaled - c * w).abs() <= 1e-8 * (c * w).max(1.0));
    }

    #[test]
    fn dw_n_dominates_its_parts(t in matrix_strategy(), norm in norm_strategy()) {
        let w = generalized_numerical_radius(&t, &norm).unwrap().value;
        let dw = generalized_dw_radius(&t, &norm).unwrap().value;
        prop_assert!(dw + 1e-9 * dw.max(1.0) >= w);
        let r = evaluate_bound(BoundId::SandwichDwn, &t, None, &norm).unwrap();
        prop_assert!(r.satisfied);
    }

    #[test]
    fn hermitian_w_n_equals_norm(seed in any::<u64>(), n in 1usize..=5, norm in norm_strategy()) {
        let h = gen_matrix(MatrixClass::Hermitian, n, &mut ChaCha8Rng::seed_from_u64(seed));
        let w = generalized_numerical_radius(&h, &norm).unwrap().value;
        prop_assert!((w - norm.eval(&h).unwrap()).abs() <= 1e-12 * w.max(1.0));
    }

    #[test]
    fn matrix_files_round_trip(t in matrix_strategy()) {
        let back = MatrixFile::parse(&MatrixFile::to_json(&t)).unwrap();
        prop_assert_eq!(back, t);
    }
}
