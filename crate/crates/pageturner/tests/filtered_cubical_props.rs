use pageturner::cubical::{is_isomorphic, product, skeleton, Budget};
use pageturner::filtered_cubical::{
    check_adjunction, pi0_comparison, pullback_comparison, successor, FilteredCubicalMap,
};
use pageturner::verify::gen;
use proptest::prelude::*;

fn budget() -> Budget {
    Budget::from_env()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn adjunction_counts_agree(seed in any::<u64>()) {
        let mut r = gen::rng(seed, 10);
        let k = gen::random_cubical_set(&mut r, 2);
        let x = gen::random_filtered_cubical(&mut r, 2);
        let rep = check_adjunction(&k, &x, &mut budget()).unwrap();
        prop_assert_eq!(rep.filtered_maps, rep.plain_maps);
    }

    #[test]
    fn pullback_comparison_is_an_isomorphism(seed in any::<u64>()) {
        let mut r = gen::rng(seed, 11);
        let mut b = budget();
        let z = gen::random_filtered_cubical(&mut r, 1);
        let x = gen::random_filtered_cubical(&mut r, 1);
        let y = gen::random_filtered_cubical(&mut r, 1);
        let f = gen::random_filtered_map(&mut r, &x, &z, &mut b).unwrap();
        let g = gen::random_filtered_map(&mut r, &y, &z, &mut b).unwrap();
        let id = FilteredCubicalMap::identity(&z);
        let (x, f) = f.map_or((z.clone(), id.clone()), |f| (x, f));
        let (y, g) = g.map_or((z.clone(), id), |g| (y, g));
        let w = pullback_comparison(&x, &y, &z, &f, &g, 2, &mut b).unwrap();
        prop_assert_eq!(w.lhs_counts, w.rhs_counts);
    }

    #[test]
    fn pi0_lower_bound(seed in any::<u64>()) {
        let mut r = gen::rng(seed, 12);
        let x = gen::random_filtered_cubical(&mut r, 2);
        let rep = pi0_comparison(&x, &mut budget()).unwrap();
        prop_assert!(rep.successor_components >= rep.image_components);
        if rep.level_one_kan {
            prop_assert!(rep.equal());
        }
    }

    #[test]
    fn successor_preserves_products(seed in any::<u64>()) {
        let mut r = gen::rng(seed, 13);
        let x = gen::random_filtered_cubical(&mut r, 1);
        let y = gen::random_filtered_cubical(&mut r, 1);
        let mut b = budget();
        let lhs = successor(&x.product(&y), 2, &mut b).unwrap().set;
        let (sx, sy) = (successor(&x, 2, &mut b).unwrap(), successor(&y, 2, &mut b).unwrap());
        let rhs = skeleton(&product(&sx.set, &sy.set).set, 2).0;
        prop_assert!(is_isomorphic(&lhs, &rhs, &mut b).unwrap());
    }
}
