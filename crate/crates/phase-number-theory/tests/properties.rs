use phase_number_theory::*;
use proptest::prelude::*;

fn element() -> impl Strategy<Value = QuadExt> {
    (-20i64..20, 1i64..12, -20i64..20, 1i64..12).prop_map(|(an, ad, bn, bd)| QuadExt::from_ratios(an, ad, bn, bd, 3).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn conjugation_respects_products_and_sums(x in element(), y in element()) {
        prop_assert_eq!(x.mul(&y).unwrap().conjugate(), x.conjugate().mul(&y.conjugate()).unwrap());
        prop_assert_eq!(x.add(&y).unwrap().conjugate(), x.conjugate().add(&y.conjugate()).unwrap());
        prop_assert!(x.add(&x.conjugate()).unwrap().is_rational());
        prop_assert!(x.mul(&x.conjugate()).unwrap().is_rational());
    }

    #[test]
    fn division_undoes_multiplication(x in element(), y in element()) {
        prop_assume!(!y.is_zero());
        prop_assert_eq!(x.mul(&y).unwrap().div(&y).unwrap(), x);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn conjugation_commutes_with_tangent_multiples(x in element()) {
        let direct = tangent_multiples(&x, 50).unwrap();
        let conj = tangent_multiples(&x.conjugate(), 50).unwrap();
        for (q, (t, c)) in direct.iter().zip(&conj).enumerate() {
            prop_assert_eq!(&t.conjugate(), c, "q = {}", q + 1);
        }
    }

    #[test]
    fn three_distances_at_most(theta in 0.0f64..std::f64::consts::TAU, n in 2usize..3000) {
        prop_assert!(density_sweep(theta, n).gaps.len() <= 3);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn arctan_addition_congruence(x in -50.0f64..50.0, y in -50.0f64..50.0) {
        prop_assume!((1.0 - x * y).abs() > 1e-6);
        prop_assert!(congruence_defect(x, y) < 1e-9);
    }
}
