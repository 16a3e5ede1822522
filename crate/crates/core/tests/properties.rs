mod common;

use common::*;
use pdescent_core::ellcurve::Kodaira;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig { cases: 100, ..ProptestConfig::default() })]

    #[test]
    fn pairing_is_symmetric_and_bilinear(a in [tiny(), tiny()], b in [small(), small()], c in [tiny(), tiny()]) {
        check_bilinear(&a, &b, &c)?;
    }

    #[test]
    fn fractional_parts_are_the_monodromy_pairing(a in [small(), small()], b in [small(), small()]) {
        check_monodromy(&a, &b)?;
    }

    #[test]
    fn orientation_does_not_change_the_class(a in [small(), small()], b in [small(), small()], which in 0usize..3) {
        check_flip(&a, &b, which)?;
    }

    #[test]
    fn kummer_map_is_a_homomorphism(a in [tiny(), tiny(), tiny()], b in [tiny(), tiny(), tiny()]) {
        check_kummer_hom(&a, &b)?;
    }

    #[test]
    fn psi_factors_through_kummer(a in [small(), small(), small()]) {
        check_psi_factors(&a)?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 60, ..ProptestConfig::default() })]

    #[test]
    fn local_power_test_matches_enumeration(case in 0usize..10, which in 0usize..2, a in -40i64..40, b in -40i64..40) {
        check_local_power(case, which, a, b)?;
    }

    #[test]
    fn fibral_tables_solve_the_intersection_equations((n, k) in (2u32..=50).prop_flat_map(|n| (Just(n), 1..n))) {
        check_fibral(Kodaira::I(n), k)?;
    }

    #[test]
    fn star_tables_solve_the_intersection_equations(n in 0u32..=20, k in 1u32..4) {
        check_fibral(Kodaira::IStar(n), k)?;
    }
}
