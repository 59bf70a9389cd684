use pageturner::complex::{
    beilinson_truncate, check_pages_against_oracle, day_convolution_complex, default_ranges, e2_homotopy,
    is_levelwise_quasi_iso, mod_tau, pi_tw, spiral_sequence, weight_at_least, ExactCouple,
};
use pageturner::verify::gen;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn exact_couples_are_exact(seed in any::<u64>(), collapse in any::<bool>()) {
        let x = gen::random_complex(&mut gen::rng(seed, 20), if collapse { 1.0 } else { 0.0 });
        let (s, t) = default_ranges(&x, 3);
        let mut c = ExactCouple::from_filtered(&x, s, t);
        for _ in 0..3 {
            prop_assert!(c.exactness_failures().is_empty(), "{:?}", c.exactness_failures());
            prop_assert!(c.page().squares_to_zero());
            c = c.derived();
        }
    }

    #[test]
    fn pages_match_the_subquotient_oracle(seed in any::<u64>()) {
        let x = gen::random_complex(&mut gen::rng(seed, 21), 0.0);
        prop_assert!(check_pages_against_oracle(&x, 4).is_ok());
    }

    #[test]
    fn e2_homotopy_is_homotopy_mod_tau(seed in any::<u64>(), t in -1i32..3, w in -2i32..3) {
        let x = gen::random_complex(&mut gen::rng(seed, 22), 0.5);
        prop_assert!(pi_tw(&mod_tau(&x), t, w).is_isomorphic(&e2_homotopy(&x, t, w).unwrap()));
    }

    #[test]
    fn spiral_is_exact(seed in any::<u64>()) {
        let x = gen::random_complex(&mut gen::rng(seed, 23), 0.3);
        let r = spiral_sequence(&x, (-1, 3), (-1, 2)).unwrap();
        prop_assert!(r.failures.is_empty(), "{:?}", r.failures);
    }

    #[test]
    fn truncation_is_idempotent(seed in any::<u64>(), w in -1i32..2) {
        let x = gen::random_complex(&mut gen::rng(seed, 24), 0.3);
        let t = beilinson_truncate(&x, w).unwrap();
        prop_assert!(weight_at_least(&t.y, w).holds);
        let again = beilinson_truncate(&t.y, w).unwrap();
        let range = (t.y.lo().min(x.lo()) - 1, t.y.hi().max(x.hi()) + 1);
        prop_assert!(is_levelwise_quasi_iso(&again.map, &again.y, &t.y, range));
    }

    #[test]
    fn weights_add_under_day_convolution(seed in any::<u64>(), w1 in -1i32..2, w2 in -1i32..2) {
        let mut r = gen::rng(seed, 25);
        let x = beilinson_truncate(&gen::random_complex(&mut r, 0.0), w1).unwrap().y;
        let y = beilinson_truncate(&gen::random_complex(&mut r, 0.0), w2).unwrap().y;
        prop_assert!(weight_at_least(&day_convolution_complex(&x, &y).unwrap(), w1 + w2).holds);
    }

    #[test]
    fn bigraded_suspension_shifts_homotopy(seed in any::<u64>(), a in -2i32..3, b in -2i32..3, t in -1i32..3, w in -2i32..3) {
        let x = gen::random_complex(&mut gen::rng(seed, 26), 0.3);
        let sx = x.bigraded_suspension(a, b);
        prop_assert!(pi_tw(&sx, t, w).is_isomorphic(&pi_tw(&x, t - a, w - b)));
    }
}
