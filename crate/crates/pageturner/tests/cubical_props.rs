use pageturner::cubical::{
    box_map, box_product, colimit, enumerate_maps, is_isomorphic, pi0, skeleton, standard_cube, Budget, CubicalMap,
    CubicalSet, Diagram,
};
use pageturner::verify::gen;
use proptest::prelude::*;

fn budget() -> Budget {
    Budget::from_env()
}

/// `⋃_{p+q=n} sk^p K ⊠ sk^q L`, glued along the overlaps `sk^p K ⊠ sk^{q-1} L`.
fn skeleton_union(k: &CubicalSet, l: &CubicalSet, n: i32) -> CubicalSet {
    let pieces: Vec<_> = (0..=n).map(|p| box_product(&skeleton(k, p).0, &skeleton(l, n - p).0)).collect();
    let mut objects: Vec<CubicalSet> = pieces.iter().map(|b| b.set.clone()).collect();
    let mut arrows = Vec::new();
    for p in 0..n {
        let (kp, kp1) = (skeleton(k, p).0, skeleton(k, p + 1).0);
        let (lq, lq1) = (skeleton(l, n - p - 1).0, skeleton(l, n - p).0);
        let over = box_product(&kp, &lq);
        let o = objects.len();
        objects.push(over.set.clone());
        let (ik, il) = (inclusion(&kp, &kp1), inclusion(&lq, &lq1));
        let (id_k, id_l) = (CubicalMap::identity(&kp), CubicalMap::identity(&lq));
        let p = p as usize;
        arrows.push((o, p, box_map(&over, &pieces[p], (&kp, &id_k), (&lq1, &il))));
        arrows.push((o, p + 1, box_map(&over, &pieces[p + 1], (&kp1, &ik), (&lq, &id_l))));
    }
    colimit(&Diagram { objects, arrows }).unwrap().set
}

/// `sk^a X → sk^b X` for `a ≤ b`; skeleta keep the names of `X`.
fn inclusion(small: &CubicalSet, big: &CubicalSet) -> CubicalMap {
    let images = (0..small.counts().len())
        .map(|n| small.names(n).iter().map(|nm| big.find(nm).expect("skeleta share names")).collect())
        .collect();
    CubicalMap::new(small, big, images).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn skeleta_of_box_products(seed in any::<u64>(), n in 0i32..4) {
        let mut r = gen::rng(seed, 0);
        let k = gen::random_cubical_set(&mut r, 2);
        let l = gen::random_cubical_set(&mut r, 1);
        let union = skeleton_union(&k, &l, n);
        let sk = skeleton(&box_product(&k, &l).set, n).0;
        prop_assert!(is_isomorphic(&union, &sk, &mut budget()).unwrap());
    }

    #[test]
    fn box_product_is_associative_and_unital(seed in any::<u64>()) {
        let mut r = gen::rng(seed, 1);
        let (k, l, m) = (gen::random_cubical_set(&mut r, 1), gen::random_cubical_set(&mut r, 1), gen::random_cubical_set(&mut r, 1));
        let left = box_product(&box_product(&k, &l).set, &m).set;
        let right = box_product(&k, &box_product(&l, &m).set).set;
        prop_assert!(is_isomorphic(&left, &right, &mut budget()).unwrap());
        prop_assert!(is_isomorphic(&box_product(&standard_cube(0), &k).set, &k, &mut budget()).unwrap());
        prop_assert!(is_isomorphic(&box_product(&k, &standard_cube(0)).set, &k, &mut budget()).unwrap());
    }

    #[test]
    fn enumerated_maps_compose(seed in any::<u64>()) {
        let mut r = gen::rng(seed, 2);
        let (k, l, m) = (gen::random_cubical_set(&mut r, 1), gen::random_cubical_set(&mut r, 2), gen::random_cubical_set(&mut r, 1));
        let kl = enumerate_maps(&k, &l, 2, &mut budget()).unwrap();
        let lm = enumerate_maps(&l, &m, 2, &mut budget()).unwrap();
        let km = enumerate_maps(&k, &m, 2, &mut budget()).unwrap();
        for f in kl.iter().take(8) {
            for g in lm.iter().take(8) {
                prop_assert!(km.contains(&g.compose(&m, f)));
            }
        }
    }

    #[test]
    fn pi0_under_gluing_and_cylinders(seed in any::<u64>(), a in any::<prop::sample::Index>(), b in any::<prop::sample::Index>()) {
        let mut r = gen::rng(seed, 3);
        let (k, l) = (gen::random_cubical_set(&mut r, 2), gen::random_cubical_set(&mut r, 2));
        let pt = CubicalSet::point();
        let at = |x: &CubicalSet, v: usize| CubicalMap::new(&pt, x, vec![vec![pageturner::cubical::Cube::nondegenerate(0, v)]]).unwrap();
        let (a, b) = (a.index(k.count(0)), b.index(l.count(0)));
        let glued = colimit(&Diagram { objects: vec![k.clone(), l.clone(), pt.clone()], arrows: vec![(2, 0, at(&k, a)), (2, 1, at(&l, b))] }).unwrap().set;
        prop_assert_eq!(pi0(&glued).len(), pi0(&k).len() + pi0(&l).len() - 1);
        prop_assert_eq!(pi0(&box_product(&k, &standard_cube(1)).set).len(), pi0(&k).len());
    }
}
