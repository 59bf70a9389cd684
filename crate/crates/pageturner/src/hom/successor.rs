use serde::Serialize;

use super::complex::HomComplex;
use crate::complex::{gr_level, levelwise_cofiber, ChainMap, FilteredComplex, FilteredMap};
use crate::linalg::{Group, Hom};
use crate::{Error, Result};

/// `[X, Y]† = im(τ_*: [X, Y] → [X, sh Y])`.
#[derive(Clone, Debug)]
pub struct SuccessorHom {
    pub group: Group,
    /// τ_* on `H_0`, from `[X, Y]` to `[X, sh Y]`.
    pub tau: Hom,
    pub lower: HomComplex,
    pub upper: HomComplex,
}

impl SuccessorHom {
    /// Filtered maps `X → Y` whose τ-images generate the group.
    pub fn generator_lifts(&self, x: &FilteredComplex, y: &FilteredComplex) -> Result<Vec<FilteredMap>> {
        let h = self.lower.complex.homology(0);
        self.group
            .gens()
            .iter()
            .map(|g| {
                let c = self.tau.preimage(g).expect("generators lie in the image");
                self.lower.to_filtered_map(x, y, &h.lift(&c))
            })
            .collect()
    }
}

pub(crate) fn top(x: &FilteredComplex, ys: &[&FilteredComplex]) -> i32 {
    ys.iter().filter(|y| !y.is_empty_window()).map(|y| y.hi()).chain([x.hi()]).max().unwrap()
}

/// `τ_*: [X, sh^n Y] → [X, sh^{n+1} Y]` with both hom complexes.
pub fn tau_on_hom(x: &FilteredComplex, y: &FilteredComplex, n: i32, top: i32) -> Result<(HomComplex, HomComplex, Hom)> {
    let top = if y.is_empty_window() { top } else { top.max(y.hi() - n) };
    let lower = HomComplex::filtered_upto(x, y, n, top)?;
    let upper = HomComplex::filtered_upto(x, y, n + 1, top)?;
    let g: Vec<ChainMap> = lower.levels().iter().map(|&m| y.map(m + n)).collect();
    let f = lower.post_compose(&upper, &g);
    let tau = f.homology_map(&lower.complex, &upper.complex, 0);
    Ok((lower, upper, tau))
}

pub(crate) fn successor_hom_upto(x: &FilteredComplex, y: &FilteredComplex, top: i32) -> Result<SuccessorHom> {
    let (lower, upper, tau) = tau_on_hom(x, y, 0, top)?;
    Ok(SuccessorHom { group: tau.image(), tau, lower, upper })
}

pub fn successor_hom(x: &FilteredComplex, y: &FilteredComplex) -> Result<SuccessorHom> {
    successor_hom_upto(x, y, top(x, &[y]))
}

/// `g_*: [X, Y]† → [X, Y']†` for a filtered map `g: Y → Y'`.
pub fn successor_hom_map(
    x: &FilteredComplex,
    g: &FilteredMap,
    y: &FilteredComplex,
    y2: &FilteredComplex,
) -> Result<(SuccessorHom, SuccessorHom, Hom)> {
    successor_hom_map_upto(x, g, y, y2, top(x, &[y, y2]))
}

/// As `successor_hom_map`, with hom complexes computed up to level `t`, so
/// that maps out of or into the same object share coordinates.
pub fn successor_hom_map_upto(
    x: &FilteredComplex,
    g: &FilteredMap,
    y: &FilteredComplex,
    y2: &FilteredComplex,
    t: i32,
) -> Result<(SuccessorHom, SuccessorHom, Hom)> {
    let a = successor_hom_upto(x, y, t)?;
    let b = successor_hom_upto(x, y2, t)?;
    let gs: Vec<ChainMap> = a.upper.levels().iter().map(|&m| g.at(m + 1)).collect();
    let on_upper = a.upper.post_compose(&b.upper, &gs).homology_map(&a.upper.complex, &b.upper.complex, 0);
    let h = Hom::from_fn(&a.group, &b.group, |v| on_upper.apply(v))
        .map_err(|_| Error::violation("induced map leaves the τ-image"))?;
    Ok((a, b, h))
}

/// Cone of `sh^{-1} X → X → Y`.
pub fn successor_cofiber(f: &FilteredMap, x: &FilteredComplex, y: &FilteredComplex) -> Result<FilteredComplex> {
    f.validate(x, y)?;
    let xs = x.shift(-1);
    let g = FilteredMap::from_fn(&xs, y, |m| f.at(m).compose(&x.map(m - 1), x.level(m - 1), x.level(m), y.level(m)));
    levelwise_cofiber(&g, &xs, y)
}

#[derive(Clone, Debug, Serialize)]
pub struct GradedCofiberCheck {
    pub checked: usize,
    pub mismatches: Vec<String>,
}

/// Compares `H_t gr^m Q` with `H_t gr^m Y ⊕ H_{t-1} gr^{m-1} X` for `Q` the successor cofiber.
pub fn graded_cofiber_check(
    f: &FilteredMap,
    x: &FilteredComplex,
    y: &FilteredComplex,
    (m0, m1): (i32, i32),
    (t0, t1): (i32, i32),
) -> Result<GradedCofiberCheck> {
    let q = successor_cofiber(f, x, y)?;
    let mut r = GradedCofiberCheck { checked: 0, mismatches: vec![] };
    for m in m0..=m1 {
        let (gq, gy, gx) = (gr_level(&q, m), gr_level(y, m), gr_level(x, m - 1));
        for t in t0..=t1 {
            r.checked += 1;
            let lhs = gq.homology(t);
            let rhs = gy.homology(t).direct_sum(&gx.homology(t - 1));
            if !lhs.is_isomorphic(&rhs) {
                r.mismatches.push(format!("gr^{m} in degree {t}: {lhs} vs {rhs}"));
            }
        }
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::ChainComplex;
    use crate::complex::{mod_tau, pi_tw, sphere, Below};
    use crate::linalg::Mat;
    use std::collections::BTreeMap;

    fn cone_p(p: i64) -> FilteredComplex {
        let l0 = ChainComplex::point(0);
        let l1 = ChainComplex::multiplication(0, p);
        let inc = ChainMap::new(&l0, &l1, BTreeMap::from([(0, Mat::from_rows(1, 1, vec![1]))])).unwrap();
        FilteredComplex::new(0, Below::Zero, vec![l0, l1], vec![inc]).unwrap()
    }

    #[test]
    fn spheres_corepresent_pi() {
        let y = mod_tau(&cone_p(3)).direct_sum(&sphere(1, 0));
        for t in -1..=2 {
            for w in -2..=2 {
                let s = successor_hom(&sphere(t, w), &y).unwrap();
                assert!(s.group.is_isomorphic(&pi_tw(&y, t, w)), "({t},{w})");
            }
        }
    }

    #[test]
    fn plain_hom_of_sphere_is_level_homology() {
        let y = cone_p(4);
        for (t, w) in [(0, 0), (0, -1), (0, 1)] {
            let h = HomComplex::filtered(&sphere(t, w), &y, 0).unwrap();
            assert!(h.complex.homology(0).is_isomorphic(&y.homology(t - w, t)));
        }
    }

    #[test]
    fn hom_into_zero() {
        let h = HomComplex::filtered(&sphere(0, 0), &FilteredComplex::zero(), 3).unwrap();
        assert!(h.complex.homology(0).is_trivial());
    }

    #[test]
    fn shift_quotient_is_invisible() {
        let s = sphere(0, 0);
        let w = successor_cofiber(&s.identity(), &s, &s).unwrap();
        assert!(successor_hom(&w, &w).unwrap().group.is_trivial());
        for (t, wt) in [(0, 0), (1, 0), (0, 1), (-1, -1)] {
            assert!(successor_hom(&sphere(t, wt), &w).unwrap().group.is_trivial());
        }
    }

    #[test]
    fn tau_cofiber_is_ctau() {
        let (a, b) = (sphere(0, -1), sphere(0, 0));
        let tau = FilteredMap::from_fn(&a, &b, |m| a.map(m));
        let q = successor_cofiber(&tau, &a, &b).unwrap();
        let c = mod_tau(&b);
        for m in -1..=4 {
            for t in -1..=2 {
                assert!(q.homology(m, t).is_isomorphic(&c.homology(m, t)));
            }
        }
    }

    #[test]
    fn graded_cofiber_splits() {
        let x = cone_p(2);
        let y = mod_tau(&x);
        let f = FilteredMap::from_fn(&x, &y, |m| crate::complex::cone_inclusion(x.level(m - 2), x.level(m)));
        let r = graded_cofiber_check(&f, &x, &y, (-1, 5), (-1, 3)).unwrap();
        assert!(r.mismatches.is_empty(), "{:?}", r.mismatches);
    }

    #[test]
    fn lifts_map_to_generators() {
        let y = cone_p(5);
        let x = sphere(0, 0);
        let s = successor_hom(&x, &y).unwrap();
        let lifts = s.generator_lifts(&x, &y).unwrap();
        assert_eq!(lifts.len(), s.group.ngens());
    }
}
