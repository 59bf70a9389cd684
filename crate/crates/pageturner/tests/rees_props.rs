use pageturner::rees::{gr_rees, rees_tower, Base};
use proptest::prelude::*;

proptest! {
    #[test]
    fn integer_towers(n in 2i64..40, depth in 1usize..6) {
        let tower = rees_tower(&Base::integers(n), depth).unwrap();
        prop_assert!(tower.check_multiplicative().is_ok());
        let gr = gr_rees(&tower);
        // I^k / I^{k+1} = n^k Z / n^{k+1} Z
        for g in &gr.grades {
            prop_assert_eq!(g.orders(), &[n]);
        }
        prop_assert!(gr.t.iter().all(|t| t.is_iso()));
    }

    #[test]
    fn truncated_polynomial_towers(d in 2usize..6, depth in 1usize..6) {
        let tower = rees_tower(&Base::truncated(d).unwrap(), depth).unwrap();
        prop_assert!(tower.check_multiplicative().is_ok());
        // (x^k) / (x^{k+1}) in Z[x]/x^d is Z for k < d and zero beyond
        for (k, g) in gr_rees(&tower).grades.iter().enumerate() {
            let expected: &[i64] = if k < d { &[0] } else { &[] };
            prop_assert_eq!(g.orders(), expected);
        }
    }
}
