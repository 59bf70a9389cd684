use pageturner::complex::{cofiber_inclusion, levelwise_cofiber, pi_tw, sphere, FilteredComplex};
use pageturner::hom::{ctau_hom_comparison, default_probes, successor_hom, successor_hom_map_upto};
use pageturner::verify::gen;
use proptest::prelude::*;

fn top(xs: &[&FilteredComplex]) -> i32 {
    xs.iter().filter(|x| !x.is_empty_window()).map(|x| x.hi()).max().unwrap_or(0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn spheres_corepresent_homotopy(seed in any::<u64>(), t in -1i32..4, w in -2i32..3) {
        let y = gen::random_complex(&mut gen::rng(seed, 30), 0.3);
        let lhs = successor_hom(&sphere(t, w), &y).unwrap().group;
        prop_assert!(lhs.is_isomorphic(&pi_tw(&y, t, w)));
    }

    #[test]
    fn successor_hom_is_additive_in_the_source(seed in any::<u64>()) {
        let mut r = gen::rng(seed, 31);
        let a = gen::random_cell_complex(&mut r).complex().clone();
        let b = gen::random_cell_complex(&mut r).complex().clone();
        let y = gen::random_complex(&mut r, 0.3);
        let sum = successor_hom(&a.direct_sum(&b), &y).unwrap().group;
        let parts = successor_hom(&a, &y).unwrap().group.direct_sum(&successor_hom(&b, &y).unwrap().group);
        prop_assert!(sum.is_isomorphic(&parts), "{} vs {}", sum, parts);
    }

    #[test]
    fn shift_quotients_are_invisible(seed in any::<u64>()) {
        let y = gen::random_cell_complex(&mut gen::rng(seed, 32)).complex().clone();
        let w = levelwise_cofiber(&y.tau(), &y, &y.shift(1)).unwrap();
        for a in default_probes((-1, 2), (-1, 1)) {
            prop_assert!(successor_hom(&a, &w).unwrap().group.is_trivial());
        }
    }

    #[test]
    fn consecutive_cofiber_maps_compose_to_zero(seed in any::<u64>()) {
        let mut r = gen::rng(seed, 33);
        let p = gen::random_cell_complex(&mut r).complex().clone();
        let q = gen::random_cell_complex(&mut r).complex().clone();
        let f = gen::random_filtered_map_complex(&mut r, &p, &q).unwrap();
        let c = levelwise_cofiber(&f, &p, &q).unwrap();
        let incl = cofiber_inclusion(&p, &q);
        for a in default_probes((0, 2), (-1, 1)) {
            let t = top(&[&p, &q, &c, &a]);
            let fs = successor_hom_map_upto(&a, &f, &p, &q, t).unwrap().2;
            let is = successor_hom_map_upto(&a, &incl, &q, &c, t).unwrap().2;
            prop_assert!(is.compose(&fs).is_zero());
        }
    }

    #[test]
    fn ctau_comparison_never_fails(seed in any::<u64>()) {
        let mut r = gen::rng(seed, 34);
        let x = gen::random_cell_complex(&mut r).complex().clone();
        let y = gen::random_complex(&mut r, 0.3);
        prop_assert!(ctau_hom_comparison(&x, &y, (-1, 2), (-1, 1)).is_ok());
    }
}
