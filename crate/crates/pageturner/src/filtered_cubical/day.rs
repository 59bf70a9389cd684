use std::collections::HashMap;

use super::filtered::{FilteredCubicalMap, FilteredCubicalSet};
use super::successor::{successor, successor_map, Cubes, Successor, System};
use crate::cubical::{
    box_map, box_product, skeleton, BoxProduct, BoxWord, Budget, Coord, Cube, CubicalMap, CubicalSet,
};
use crate::cubical::{colimit, Diagram};
use crate::{Error, Result};

/// `X ⊛ Y`, with level `n` the colimit of `X^p ⊠ Y^q` over `p + q ≤ n`.
#[derive(Clone, Debug)]
pub struct DayConvolution {
    pub result: FilteredCubicalSet,
    x_hi: i32,
    y_hi: i32,
    products: HashMap<(i32, i32), BoxProduct>,
    legs: HashMap<(i32, i32, i32), CubicalMap>,
}

fn nodes(x: &FilteredCubicalSet, y: &FilteredCubicalSet, n: i32) -> Vec<(i32, i32)> {
    let mut out = Vec::new();
    for p in x.lo()..=x.hi().min(n - y.lo()) {
        for q in y.lo()..=y.hi().min(n - p) {
            out.push((p, q));
        }
    }
    out
}

impl DayConvolution {
    /// The image of `a ⊠ b` for `a ∈ X^{m1}`, `b ∈ Y^{m2}` in level `m1 + m2`.
    pub fn cube(&self, m1: i32, a: Cube, m2: i32, b: Cube) -> Cube {
        let (p, q) = (m1.min(self.x_hi), m2.min(self.y_hi));
        let n = (m1 + m2).min(self.result.hi());
        let prod = &self.products[&(p, q)];
        self.legs[&(n, p, q)].apply(self.result.level(n), prod.cube(a, b))
    }
}

pub fn day_convolution(x: &FilteredCubicalSet, y: &FilteredCubicalSet) -> Result<DayConvolution> {
    if x.is_empty() || y.is_empty() {
        return Ok(DayConvolution {
            result: FilteredCubicalSet::empty(),
            x_hi: x.hi(),
            y_hi: y.hi(),
            products: HashMap::new(),
            legs: HashMap::new(),
        });
    }
    let (lo, hi) = (x.lo() + y.lo(), x.hi() + y.hi());
    let mut products = HashMap::new();
    for p in x.lo()..=x.hi() {
        for q in y.lo()..=y.hi() {
            products.insert((p, q), box_product(x.level(p), y.level(q)));
        }
    }
    let mut levels = Vec::new();
    let mut legs = HashMap::new();
    for n in lo..=hi {
        let ns = nodes(x, y, n);
        let pos: HashMap<(i32, i32), usize> = ns.iter().enumerate().map(|(i, &k)| (k, i)).collect();
        let mut d = Diagram { objects: ns.iter().map(|k| products[k].set.clone()).collect(), arrows: Vec::new() };
        for (i, &(p, q)) in ns.iter().enumerate() {
            let here = &products[&(p, q)];
            if let Some(&j) = pos.get(&(p + 1, q)) {
                let f = box_map(
                    here,
                    &products[&(p + 1, q)],
                    (x.level(p + 1), &x.map(p)),
                    (y.level(q), &CubicalMap::identity(y.level(q))),
                );
                d.arrows.push((i, j, f));
            }
            if let Some(&j) = pos.get(&(p, q + 1)) {
                let f = box_map(
                    here,
                    &products[&(p, q + 1)],
                    (x.level(p), &CubicalMap::identity(x.level(p))),
                    (y.level(q + 1), &y.map(q)),
                );
                d.arrows.push((i, j, f));
            }
        }
        let c = colimit(&d)?;
        for (&k, leg) in ns.iter().zip(c.legs) {
            legs.insert((n, k.0, k.1), leg);
        }
        levels.push(c.set);
    }
    let mut maps = Vec::new();
    for n in lo..hi {
        let (src, dst) = (&levels[(n - lo) as usize], &levels[(n + 1 - lo) as usize]);
        let mut images: Vec<Vec<Option<Cube>>> = src.counts().iter().map(|&c| vec![None; c]).collect();
        for (p, q) in nodes(x, y, n) {
            let prod = &products[&(p, q)].set;
            for (d, e) in prod.gens() {
                let z = legs[&(n, p, q)].image(d, e);
                if !z.is_degenerate() {
                    images[d][z.gen as usize] = Some(legs[&(n + 1, p, q)].image(d, e));
                }
            }
        }
        let images = images
            .into_iter()
            .map(|v| v.into_iter().map(|c| c.expect("every generator comes from a node")).collect())
            .collect();
        maps.push(CubicalMap::new(src, dst, images)?);
    }
    let result = FilteredCubicalSet::new(lo, levels, maps)?;
    Ok(DayConvolution { result, x_hi: x.hi(), y_hi: y.hi(), products, legs })
}

/// `f ⊛ g: X ⊛ Y → X' ⊛ Y'`.
pub fn day_map(
    (x, dxy): (&FilteredCubicalSet, &DayConvolution),
    (x2, dxy2): (&FilteredCubicalSet, &DayConvolution),
    f: &FilteredCubicalMap,
    (y, y2): (&FilteredCubicalSet, &FilteredCubicalSet),
    g: &FilteredCubicalMap,
) -> Result<FilteredCubicalMap> {
    let src = &dxy.result;
    let dst = &dxy2.result;
    if src.is_empty() {
        return FilteredCubicalMap::new(
            src,
            dst,
            src.lo().min(dst.lo()),
            vec![CubicalMap::from_empty(); (src.hi().max(dst.hi()) - src.lo().min(dst.lo()) + 1).max(1) as usize],
        );
    }
    let (lo, hi) = (src.lo(), src.hi().max(dst.hi()));
    let mut maps = Vec::new();
    for n in lo..=hi {
        let nl = n.min(src.hi());
        let level = src.level(n);
        let mut images: Vec<Vec<Option<Cube>>> = level.counts().iter().map(|&c| vec![None; c]).collect();
        for (p, q) in nodes(x, y, nl) {
            let prod = &dxy.products[&(p, q)];
            for (d, e) in prod.set.gens() {
                let z = dxy.legs[&(nl, p, q)].image(d, e);
                if z.is_degenerate() {
                    continue;
                }
                let (a, b) = prod.factors(d, e);
                // at levels above the window, p and q may be raised until they sum to n
                let (pp, qq) = (p + n - nl, q);
                let a = x.map_between(p, pp).apply(x.level(pp), a);
                let fa = f.at(pp).apply(x2.level(pp), a);
                let gb = g.at(qq).apply(y2.level(qq), b);
                images[d][z.gen as usize] = Some(dxy2.cube(pp, fa, qq, gb));
            }
        }
        let images = images
            .into_iter()
            .map(|v| v.into_iter().map(|c| c.expect("every generator comes from a node")).collect())
            .collect();
        maps.push(CubicalMap::new(level, dst.level(n), images)?);
    }
    FilteredCubicalMap::new(src, dst, lo, maps)
}

/// `X^† ⊠ Y^† → (X ⊛ Y)^†` through dimension `dim_limit`.
#[derive(Clone, Debug)]
pub struct LaxStructure {
    pub src: CubicalSet,
    pub pairs: BoxProduct,
    pub map: CubicalMap,
    pub sx: Successor,
    pub sy: Successor,
    pub sxy: Successor,
    pub day: DayConvolution,
}

/// Splits a face of `□^{p+q}` into faces of `□^p` and `□^q`.
fn split_word(w: &BoxWord, p: usize) -> (BoxWord, BoxWord) {
    let (l, r) = w.coords().split_at(p);
    let k = l.iter().filter(|c| matches!(c, Coord::Var(_))).count() as u8;
    let r: Vec<Coord> = r
        .iter()
        .map(|c| match *c {
            Coord::Var(j) => Coord::Var(j - k),
            c => c,
        })
        .collect();
    let rk = r.iter().filter(|c| matches!(c, Coord::Var(_))).count();
    (BoxWord::new(k as usize, l.to_vec()).expect("left half"), BoxWord::new(rk, r).expect("right half"))
}

pub fn lax_structure(
    x: &FilteredCubicalSet,
    y: &FilteredCubicalSet,
    dim_limit: usize,
    budget: &mut Budget,
) -> Result<LaxStructure> {
    let sx = successor(x, dim_limit, budget)?;
    let sy = successor(y, dim_limit, budget)?;
    let day = day_convolution(x, y)?;
    let sxy = successor(&day.result, dim_limit, budget)?;
    let pairs = box_product(&sx.set, &sy.set);
    let (src, _) = skeleton(&pairs.set, dim_limit as i32);
    let mut cubes = Cubes::default();
    let mut images = Vec::new();
    for n in 0..src.counts().len() {
        let words = cubes.get(n).words.clone();
        let mut im = Vec::new();
        for e in 0..src.count(n) {
            let (a, b) = pairs.factors(n, e);
            let (p, q) = (a.dim as usize, b.dim as usize);
            let (sa, sb) = (sx.system(p, a.gen as usize).clone(), sy.system(q, b.gen as usize).clone());
            let sys: System = words
                .iter()
                .map(|w| {
                    let (w1, w2) = split_word(w, p);
                    let (i1, i2) = (cubes.get(p).position(&w1), cubes.get(q).position(&w2));
                    day.cube(w1.src() as i32, sa[i1], w2.src() as i32, sb[i2])
                })
                .collect();
            im.push(
                sxy.normalize(&day.result, &mut cubes, &sys, n)
                    .ok_or_else(|| Error::violation("lax image is not a successor cube"))?,
            );
        }
        images.push(im);
    }
    let map = CubicalMap::new(&src, &sxy.set, images)
        .map_err(|e| Error::violation(format!("lax structure map is not cubical: {e}")))?;
    Ok(LaxStructure { src, pairs, map, sx, sy, sxy, day })
}

/// Checks the naturality square of the lax structure for `f ⊠ g`; returns the cubes checked.
pub fn lax_naturality(
    (x, x2, f): (&FilteredCubicalSet, &FilteredCubicalSet, &FilteredCubicalMap),
    (y, y2, g): (&FilteredCubicalSet, &FilteredCubicalSet, &FilteredCubicalMap),
    dim_limit: usize,
    budget: &mut Budget,
) -> Result<usize> {
    let a = lax_structure(x, y, dim_limit, budget)?;
    let b = lax_structure(x2, y2, dim_limit, budget)?;
    let fd = successor_map(x2, f, &a.sx, &b.sx)?;
    let gd = successor_map(y2, g, &a.sy, &b.sy)?;
    let fg = box_map(&a.pairs, &b.pairs, (&b.sx.set, &fd), (&b.sy.set, &gd));
    let day_fg = day_map((x, &a.day), (x2, &b.day), f, (y, y2), g)?;
    let top = successor_map(&b.day.result, &day_fg, &a.sxy, &b.sxy)?;
    let mut checked = 0;
    for (n, e) in a.src.gens() {
        let left = top.apply(&b.sxy.set, a.map.image(n, e));
        let right = b.map.apply(&b.sxy.set, fg.image(n, e));
        if left != right {
            return Err(Error::violation(format!("lax naturality fails on a {n}-cube")));
        }
        checked += 1;
    }
    Ok(checked)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubical::{is_isomorphic, standard_cube, DEFAULT_BUDGET};
    use crate::filtered_cubical::{free_filtered, skeletal_filtration, FilteredCubicalMap};

    fn budget() -> Budget {
        Budget::new(DEFAULT_BUDGET)
    }

    #[test]
    fn free_objects_convolve() {
        let (k, l) = (standard_cube(1), crate::cubical::boundary(1).unwrap().0);
        let d = day_convolution(&free_filtered(1, &k), &free_filtered(2, &l)).unwrap();
        let expect = box_product(&k, &l).set;
        assert_eq!(d.result.lo(), 3);
        assert!(is_isomorphic(d.result.level(3), &expect, &mut budget()).unwrap());
        assert!(d.result.level(2).is_empty());
    }

    #[test]
    fn skeleta_are_strong_monoidal() {
        let (k, l) = (standard_cube(1), standard_cube(2));
        let d = day_convolution(&skeletal_filtration(&k), &skeletal_filtration(&l)).unwrap();
        let sk = skeletal_filtration(&box_product(&k, &l).set);
        for n in 0..=3 {
            assert!(is_isomorphic(d.result.level(n), sk.level(n), &mut budget()).unwrap(), "level {n}");
        }
    }

    #[test]
    fn convolving_with_empty() {
        let d = day_convolution(&skeletal_filtration(&standard_cube(1)), &FilteredCubicalSet::empty()).unwrap();
        assert!(d.result.is_empty());
    }

    #[test]
    fn lax_map_for_constant_inputs_is_an_isomorphism() {
        let (k, l) = (standard_cube(1), crate::cubical::boundary(1).unwrap().0);
        let lax = lax_structure(&free_filtered(0, &k), &free_filtered(0, &l), 2, &mut budget()).unwrap();
        assert!(lax.map.is_iso(&lax.sxy.set));
    }

    #[test]
    fn lax_map_on_skeletal_intervals_is_injective() {
        let x = skeletal_filtration(&standard_cube(1));
        let lax = lax_structure(&x, &x, 2, &mut budget()).unwrap();
        assert!(lax.map.is_injective());
    }

    #[test]
    fn lax_naturality_for_identity_and_collapse() {
        let x = skeletal_filtration(&standard_cube(1));
        let pt = free_filtered(0, &CubicalSet::point());
        let id = FilteredCubicalMap::identity(&x);
        let bang = FilteredCubicalMap::new(
            &x,
            &pt,
            0,
            vec![CubicalMap::to_point(x.level(0)), CubicalMap::to_point(x.level(1))],
        )
        .unwrap();
        assert!(lax_naturality((&x, &x, &id), (&x, &x, &id), 2, &mut budget()).unwrap() > 0);
        lax_naturality((&x, &pt, &bang), (&x, &x, &id), 2, &mut budget()).unwrap();
    }
}
