use std::collections::{HashMap, HashSet};

use super::filtered::{FilteredCubicalMap, FilteredCubicalSet};
use super::successor::{successor, successor_map, Cubes, System};
use crate::cubical::{
    check_kan, component_labels, homotopy_pullback, homotopy_pullback_upto, mapr_map, BoxWord, Budget, Coord,
    CubicalMap, HomotopyPullback,
};
use crate::{Error, Result};

/// `X ×^h_W Y` levelwise, with `W = Z` or `W = sh Z`.
#[derive(Clone, Debug)]
pub struct FilteredHomotopyPullback {
    pub filtered: FilteredCubicalSet,
    /// The pullback at each level of the window, from `filtered.lo()`.
    pub levels: Vec<HomotopyPullback>,
}

impl FilteredHomotopyPullback {
    pub fn at(&self, m: i32) -> &HomotopyPullback {
        let i = (m - self.filtered.lo()).clamp(0, self.levels.len() as i32 - 1);
        &self.levels[i as usize]
    }
}

pub fn homotopy_pullback_filtered(
    x: &FilteredCubicalSet,
    y: &FilteredCubicalSet,
    z: &FilteredCubicalSet,
    f: &FilteredCubicalMap,
    g: &FilteredCubicalMap,
    shifted: bool,
) -> Result<FilteredHomotopyPullback> {
    let s = shifted as i32;
    let lo = x.lo().max(y.lo());
    let hi = x.hi().max(y.hi()).max(z.hi() - s).max(lo);
    let leg = |h: &FilteredCubicalMap, n: i32| z.map_between(n, n + s).compose(z.level(n + s), &h.at(n));
    let levels: Vec<HomotopyPullback> =
        (lo..=hi).map(|n| homotopy_pullback(x.level(n), y.level(n), z.level(n + s), &leg(f, n), &leg(g, n))).collect();
    let mut maps = Vec::new();
    for n in lo..hi {
        let (a, b) = (&levels[(n - lo) as usize], &levels[(n + 1 - lo) as usize]);
        let (xm, ym) = (x.map(n), y.map(n));
        let pm = mapr_map(&a.path, &b.path, z.level(n + 1 + s), &z.map(n + s));
        let mut images = Vec::new();
        for d in 0..a.set().counts().len() {
            let mut im = Vec::new();
            for e in 0..a.set().count(d) {
                let (k, p, l) = a.split(x.level(n), y.level(n), crate::cubical::Cube::nondegenerate(d, e));
                let k = xm.apply(x.level(n + 1), k);
                let p = pm.apply(&b.path.set, p);
                let l = ym.apply(y.level(n + 1), l);
                im.push(
                    b.triple(k, p, l).ok_or_else(|| Error::violation("structure map leaves the homotopy pullback"))?,
                );
            }
            images.push(im);
        }
        maps.push(CubicalMap::new(a.set(), b.set(), images)?);
    }
    let filtered = FilteredCubicalSet::new(lo, levels.iter().map(|h| h.set().clone()).collect(), maps)?;
    Ok(FilteredHomotopyPullback { filtered, levels })
}

/// The comparison map `X^† ×^h_{Z^†} Y^† → (X ×^h_{sh Z} Y)^†` and the cube counts on both sides.
#[derive(Clone, Debug, serde::Serialize)]
pub struct PullbackWitness {
    pub dim_limit: usize,
    /// Nondegenerate cubes per dimension of the source.
    pub lhs_counts: Vec<usize>,
    pub rhs_counts: Vec<usize>,
    #[serde(skip)]
    pub map: CubicalMap,
}

/// Builds both sides and the natural map through `dim_limit`; fails with a
/// violation unless it is bijective on nondegenerate cubes in every dimension.
pub fn pullback_comparison(
    x: &FilteredCubicalSet,
    y: &FilteredCubicalSet,
    z: &FilteredCubicalSet,
    f: &FilteredCubicalMap,
    g: &FilteredCubicalMap,
    dim_limit: usize,
    budget: &mut Budget,
) -> Result<PullbackWitness> {
    let sx = successor(x, dim_limit, budget)?;
    let sy = successor(y, dim_limit, budget)?;
    let sz = successor(z, dim_limit + 1, budget)?;
    let fd = successor_map(z, f, &sx, &sz)?;
    let gd = successor_map(z, g, &sy, &sz)?;
    let lhs = homotopy_pullback_upto(&sx.set, &sy.set, &sz.set, &fd, &gd, Some(dim_limit));
    let h = homotopy_pullback_filtered(x, y, z, f, g, true)?;
    let rhs = successor(&h.filtered, dim_limit, budget)?;

    let mut cubes = Cubes::default();
    let mut images = Vec::new();
    for n in 0..lhs.set().counts().len() {
        let words = cubes.get(n).words.clone();
        let mut im = Vec::new();
        let mut seen = HashSet::new();
        for e in 0..lhs.set().count(n) {
            budget.spend(1)?;
            let (a, p, b) = lhs.split(&sx.set, &sy.set, crate::cubical::Cube::nondegenerate(n, e));
            let a_sys = sx.system_of(x, &mut cubes, a);
            let b_sys = sy.system_of(y, &mut cubes, b);
            let p_sys = sz.system_of(z, &mut cubes, lhs.path.to_m(&sz.set, p));
            let sys: System = words
                .iter()
                .enumerate()
                .map(|(i, w)| {
                    let m = w.src();
                    let mut coords = w.coords().to_vec();
                    coords.push(Coord::Var(m as u8));
                    let wi = BoxWord::new(m + 1, coords).expect("w ⊠ id is a face");
                    let q = p_sys[cubes.get(n + 1).position(&wi)];
                    let hm = h.at(m as i32);
                    hm.triple(a_sys[i], hm.path.from_m(q), b_sys[i])
                        .ok_or_else(|| Error::violation(format!("component {w} of a {n}-cube leaves the pullback")))
                })
                .collect::<Result<_>>()?;
            let c = rhs
                .normalize(&h.filtered, &mut cubes, &sys, n)
                .ok_or_else(|| Error::violation(format!("image of a {n}-cube is not a successor cube")))?;
            if c.is_degenerate() {
                return Err(Error::violation(format!("comparison sends a nondegenerate {n}-cube to a degenerate one")));
            }
            if !seen.insert(c.gen) {
                return Err(Error::violation(format!("comparison is not injective in dimension {n}")));
            }
            im.push(c);
        }
        images.push(im);
    }
    let map = CubicalMap::new(lhs.set(), &rhs.set, images)
        .map_err(|e| Error::violation(format!("comparison is not cubical: {e}")))?;
    let counts = |k: &crate::cubical::CubicalSet| (0..=dim_limit).map(|n| k.count(n)).collect::<Vec<_>>();
    let (lhs_counts, rhs_counts) = (counts(lhs.set()), counts(&rhs.set));
    if lhs_counts != rhs_counts {
        return Err(Error::violation(format!(
            "comparison is not surjective: {lhs_counts:?} cubes against {rhs_counts:?}"
        )));
    }
    Ok(PullbackWitness { dim_limit, lhs_counts, rhs_counts, map })
}

/// `π₀(X^†)` against `im(π₀ X⁰ → π₀ X¹)`.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Pi0Report {
    pub successor_components: usize,
    pub image_components: usize,
    /// No unfilled open boxes in `X¹` up to dimension 2.
    pub level_one_kan: bool,
}

impl Pi0Report {
    pub fn equal(&self) -> bool {
        self.successor_components == self.image_components
    }
}

/// Checks that vertices of `X⁰` connected in `X^†` stay connected in `X¹`.
pub fn pi0_comparison(x: &FilteredCubicalSet, budget: &mut Budget) -> Result<Pi0Report> {
    let sx = successor(x, 1, budget)?;
    let (x0, x1) = (x.level(0), x.level(1));
    let up = x.map(0);
    let labels1 = component_labels(x1);
    let image = |v: usize| labels1[up.image(0, v).gen as usize];
    // vertices of X^† are the vertices of X⁰, in the same order
    let labels = component_labels(&sx.set);
    let mut class: HashMap<usize, usize> = HashMap::new();
    for (v, &r) in labels.iter().enumerate() {
        if *class.entry(r).or_insert(image(v)) != image(v) {
            return Err(Error::violation("π₀(X^†) does not factor through π₀(X¹)"));
        }
    }
    let image_components = (0..x0.count(0)).map(image).collect::<HashSet<_>>().len();
    let level_one_kan = check_kan(x1, 2, budget)?.is_kan();
    Ok(Pi0Report { successor_components: class.len(), image_components, level_one_kan })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubical::{boundary, product, standard_cube, CubicalSet, DEFAULT_BUDGET};
    use crate::filtered_cubical::{free_filtered, skeletal_filtration};

    fn budget() -> Budget {
        Budget::new(DEFAULT_BUDGET)
    }

    fn to_point(x: &FilteredCubicalSet, pt: &FilteredCubicalSet) -> FilteredCubicalMap {
        let maps = (x.lo()..=x.hi()).map(|m| CubicalMap::to_point(x.level(m))).collect();
        FilteredCubicalMap::new(x, pt, x.lo(), maps).unwrap()
    }

    #[test]
    fn terminal_base_gives_products() {
        let x = skeletal_filtration(&standard_cube(1));
        let pt = free_filtered(0, &CubicalSet::point());
        let t = to_point(&x, &pt);
        let h = homotopy_pullback_filtered(&x, &x, &pt, &t, &t, false).unwrap();
        for n in 0..=1 {
            let p = product(x.level(n), x.level(n)).set;
            assert!(crate::cubical::is_isomorphic(h.filtered.level(n), &p, &mut budget()).unwrap());
        }
    }

    #[test]
    fn level_zero_vertices_of_the_interval_pullback() {
        let x = skeletal_filtration(&standard_cube(1));
        let id = FilteredCubicalMap::identity(&x);
        // unshifted: only constant paths in Z⁰; shifted: each of the three 1-cubes of □¹ with its own ends
        let h0 = homotopy_pullback_filtered(&x, &x, &x, &id, &id, false).unwrap();
        assert_eq!(h0.filtered.level(0).count(0), 2);
        let h1 = homotopy_pullback_filtered(&x, &x, &x, &id, &id, true).unwrap();
        assert_eq!(h1.filtered.level(0).count(0), 3);
    }

    #[test]
    fn comparison_for_identity_legs() {
        for k in [standard_cube(1), boundary(2).unwrap().0] {
            let x = skeletal_filtration(&k);
            let id = FilteredCubicalMap::identity(&x);
            let w = pullback_comparison(&x, &x, &x, &id, &id, 2, &mut budget()).unwrap();
            assert_eq!(w.lhs_counts, w.rhs_counts);
        }
    }

    #[test]
    fn comparison_over_a_point() {
        let x = skeletal_filtration(&standard_cube(1));
        let y = free_filtered(1, &boundary(1).unwrap().0);
        let pt = free_filtered(0, &CubicalSet::point());
        pullback_comparison(&x, &y, &pt, &to_point(&x, &pt), &to_point(&y, &pt), 2, &mut budget()).unwrap();
    }

    #[test]
    fn pi0_of_skeletal_objects() {
        let r = pi0_comparison(&skeletal_filtration(&standard_cube(1)), &mut budget()).unwrap();
        assert_eq!((r.successor_components, r.image_components), (1, 1));
        // □¹ has unfillable 2-boxes without connections
        assert!(!r.level_one_kan);
        let r = pi0_comparison(&free_filtered(0, &CubicalSet::point()), &mut budget()).unwrap();
        assert!(r.level_one_kan && r.equal());
        // two points joined only at level 2: connected nowhere below
        let b = skeletal_filtration(&boundary(1).unwrap().0);
        let r = pi0_comparison(&b, &mut budget()).unwrap();
        assert_eq!((r.successor_components, r.image_components), (2, 2));
    }
}
