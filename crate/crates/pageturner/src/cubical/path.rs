use std::collections::HashMap;

use super::boxword::BoxWord;
use super::set::{compress, full, Cube, CubicalMap, CubicalSet};

/// `Map^r(□¹, M)`: its `n`-cubes are the `(n+1)`-cubes of `M`, the last axis
/// being the interval direction.
///
/// Generators come in two kinds: an `(n+1)`-generator `y` of `M` gives the
/// path generator `y` of dimension `n`, and an `n`-generator gives the
/// constant path `c(y)` of dimension `n`.
#[derive(Clone, Debug)]
pub struct PathObject {
    pub set: CubicalSet,
    /// `M`-cube (of dimension one more) behind each generator.
    cubes: Vec<Vec<Cube>>,
    paths: Vec<usize>,
    ev: [CubicalMap; 2],
}

impl PathObject {
    /// The `n`-cube of the path object given by an `(n+1)`-cube of `M`.
    pub fn from_m(&self, c: Cube) -> Cube {
        let m = c.dim as usize - 1;
        let k = c.gen_dim();
        if c.keep >> m & 1 == 1 {
            Cube { dim: m as u8, keep: c.keep & full(m), gen: c.gen }
        } else {
            Cube { dim: m as u8, keep: c.keep, gen: (self.paths.get(k).copied().unwrap_or(0) + c.gen as usize) as u32 }
        }
    }

    /// The `(n+1)`-cube of `M` behind an `n`-cube of the path object.
    pub fn to_m(&self, m: &CubicalSet, c: Cube) -> Cube {
        let g = self.cubes[c.gen_dim()][c.gen as usize];
        let n = c.dim as usize;
        // the interval axis is never degenerated by the path object's operators
        m.restrict(g, &BoxWord::projection(n + 1, c.keep | 1 << n))
    }

    /// Evaluation at the end `ε` of the interval.
    pub fn ev(&self, eps: u8) -> &CubicalMap {
        &self.ev[eps as usize]
    }
}

pub fn mapr_interval(m: &CubicalSet) -> PathObject {
    let top = m.dim_cap();
    let mut names: Vec<Vec<String>> = Vec::new();
    let mut cubes: Vec<Vec<Cube>> = Vec::new();
    let mut paths = Vec::new();
    for n in 0..=top.max(-1) {
        let n = n as usize;
        let mut nm = Vec::new();
        let mut cs = Vec::new();
        for (y, s) in m.names(n + 1).iter().enumerate() {
            nm.push(s.clone());
            cs.push(Cube::nondegenerate(n + 1, y));
        }
        paths.push(nm.len());
        for (y, s) in m.names(n).iter().enumerate() {
            nm.push(format!("c({s})"));
            cs.push(Cube { dim: n as u8 + 1, keep: full(n), gen: y as u32 });
        }
        names.push(nm);
        cubes.push(cs);
    }
    super::set::dedupe(&mut names);
    let mut p =
        PathObject { set: CubicalSet::empty(), cubes, paths, ev: [CubicalMap::from_empty(), CubicalMap::from_empty()] };
    let mut faces = vec![Vec::new(); names.len()];
    for n in 1..names.len() {
        for &mc in &p.cubes[n] {
            let mut fs = Vec::with_capacity(2 * n);
            for i in 0..n {
                for e in 0..2 {
                    fs.push(p.from_m(m.restrict(mc, &BoxWord::face(n + 1, i, e))));
                }
            }
            faces[n].push(fs);
        }
    }
    p.set = CubicalSet::new(names, faces).expect("path object satisfies the cubical identities");
    p.ev = [0, 1].map(|e| {
        let images = p
            .cubes
            .iter()
            .enumerate()
            .map(|(n, v)| v.iter().map(|&mc| m.restrict(mc, &BoxWord::face(n + 1, n, e))).collect())
            .collect();
        CubicalMap::new(&p.set, m, images).expect("evaluation is a cubical map")
    });
    p
}

/// `Map^r(□¹, f)`.
pub fn mapr_map(src: &PathObject, dst: &PathObject, m2: &CubicalSet, f: &CubicalMap) -> CubicalMap {
    let images = src.cubes.iter().map(|v| v.iter().map(|&mc| dst.from_m(f.apply(m2, mc))).collect()).collect();
    CubicalMap::new(&src.set, &dst.set, images).expect("Map^r is functorial")
}

/// `A ×_C B` for `f: A → C`, `g: B → C`, remembering the pair behind each generator.
#[derive(Clone, Debug)]
pub struct FiberProduct {
    pub set: CubicalSet,
    index: HashMap<(Cube, Cube), u32>,
    pairs: Vec<Vec<(Cube, Cube)>>,
    pub left: CubicalMap,
    pub right: CubicalMap,
}

impl FiberProduct {
    /// The cube `(a, b)` for `n`-cubes with `f(a) = g(b)`, if it exists.
    pub fn pair(&self, a: Cube, b: Cube) -> Option<Cube> {
        assert_eq!(a.dim, b.dim, "pairs need equal dimensions");
        let n = a.dim as usize;
        let common = a.dropped() & b.dropped();
        let k = n - common.count_ones() as usize;
        let a2 = Cube { dim: k as u8, keep: compress(a.keep, common, n), gen: a.gen };
        let b2 = Cube { dim: k as u8, keep: compress(b.keep, common, n), gen: b.gen };
        let g = *self.index.get(&(a2, b2))?;
        Some(Cube { dim: n as u8, keep: full(n) & !common, gen: g })
    }

    pub fn components(&self, n: usize, x: usize) -> (Cube, Cube) {
        self.pairs[n][x]
    }

    /// Components of an arbitrary cube.
    pub fn split(&self, a: &CubicalSet, b: &CubicalSet, c: Cube) -> (Cube, Cube) {
        let (x, y) = self.pairs[c.gen_dim()][c.gen as usize];
        let p = BoxWord::projection(c.dim as usize, c.keep);
        (a.restrict(x, &p), b.restrict(y, &p))
    }
}

pub fn fiber_product(a: &CubicalSet, b: &CubicalSet, c: &CubicalSet, f: &CubicalMap, g: &CubicalMap) -> FiberProduct {
    fiber_product_upto(a, b, c, f, g, None)
}

/// The fiber product with generators of dimension at most `cap`.
pub fn fiber_product_upto(
    a: &CubicalSet,
    b: &CubicalSet,
    c: &CubicalSet,
    f: &CubicalMap,
    g: &CubicalMap,
    cap: Option<usize>,
) -> FiberProduct {
    let mut top = if a.is_empty() || b.is_empty() { -1 } else { a.dim_cap() + b.dim_cap() };
    if let Some(cap) = cap {
        top = top.min(cap as i32);
    }
    let mut names: Vec<Vec<String>> = Vec::new();
    let mut pairs: Vec<Vec<(Cube, Cube)>> = Vec::new();
    let mut index = HashMap::new();
    for n in 0..=top {
        let n = n as usize;
        let mut over: HashMap<Cube, Vec<Cube>> = HashMap::new();
        for y in b.all_cubes(n) {
            over.entry(g.apply(c, y)).or_default().push(y);
        }
        let mut nm = Vec::new();
        let mut ps = Vec::new();
        for x in a.all_cubes(n) {
            let Some(ys) = over.get(&f.apply(c, x)) else { continue };
            for &y in ys {
                if x.dropped() & y.dropped() != 0 {
                    continue;
                }
                index.insert((x, y), ps.len() as u32);
                nm.push(format!("({},{})", describe(a, x), describe(b, y)));
                ps.push((x, y));
            }
        }
        names.push(nm);
        pairs.push(ps);
    }
    super::set::dedupe(&mut names);
    let mut fp = FiberProduct {
        set: CubicalSet::empty(),
        index,
        pairs,
        left: CubicalMap::from_empty(),
        right: CubicalMap::from_empty(),
    };
    let mut faces = vec![Vec::new(); names.len()];
    for n in 1..names.len() {
        for &(x, y) in &fp.pairs[n] {
            let mut fs = Vec::with_capacity(2 * n);
            for i in 0..n {
                for e in 0..2 {
                    let w = BoxWord::face(n, i, e);
                    fs.push(fp.pair(a.restrict(x, &w), b.restrict(y, &w)).expect("faces of pairs are pairs"));
                }
            }
            faces[n].push(fs);
        }
    }
    fp.set = CubicalSet::new(names, faces).expect("fiber product satisfies the cubical identities");
    fp.left = CubicalMap::new(&fp.set, a, fp.pairs.iter().map(|v| v.iter().map(|p| p.0).collect()).collect())
        .expect("projection");
    fp.right = CubicalMap::new(&fp.set, b, fp.pairs.iter().map(|v| v.iter().map(|p| p.1).collect()).collect())
        .expect("projection");
    fp
}

/// `A × B`.
pub fn product(a: &CubicalSet, b: &CubicalSet) -> FiberProduct {
    let pt = CubicalSet::point();
    fiber_product(a, b, &pt, &CubicalMap::to_point(a), &CubicalMap::to_point(b))
}

pub(crate) fn describe(k: &CubicalSet, c: Cube) -> String {
    if c.is_degenerate() {
        format!("{}<{}>", k.name(c), super::boxword::degeneracy_word(c.dim as usize, c.keep))
    } else {
        k.name(c).to_string()
    }
}

/// `K ×^h_M L = (K ×_M Map^r(□¹, M)) ×_M L`, with the triple behind each cube.
#[derive(Clone, Debug)]
pub struct HomotopyPullback {
    pub path: PathObject,
    pub first: FiberProduct,
    pub second: FiberProduct,
}

impl HomotopyPullback {
    pub fn set(&self) -> &CubicalSet {
        &self.second.set
    }

    /// The cube `(k, p, l)`; `p` is a cube of the path object.
    pub fn triple(&self, k: Cube, p: Cube, l: Cube) -> Option<Cube> {
        let kp = self.first.pair(k, p)?;
        self.second.pair(kp, l)
    }

    /// Components `(k, p, l)` of an arbitrary cube.
    pub fn split(&self, kset: &CubicalSet, lset: &CubicalSet, c: Cube) -> (Cube, Cube, Cube) {
        let (kp, l) = self.second.split(&self.first.set, lset, c);
        let (k, p) = self.first.split(kset, &self.path.set, kp);
        (k, p, l)
    }
}

pub fn homotopy_pullback(
    k: &CubicalSet,
    l: &CubicalSet,
    m: &CubicalSet,
    f: &CubicalMap,
    g: &CubicalMap,
) -> HomotopyPullback {
    homotopy_pullback_upto(k, l, m, f, g, None)
}

/// The homotopy pullback with generators of dimension at most `cap`.
pub fn homotopy_pullback_upto(
    k: &CubicalSet,
    l: &CubicalSet,
    m: &CubicalSet,
    f: &CubicalMap,
    g: &CubicalMap,
    cap: Option<usize>,
) -> HomotopyPullback {
    let path = mapr_interval(m);
    let first = fiber_product_upto(k, &path.set, m, f, path.ev(0), cap);
    let ev1 = path.ev(1).compose(m, &first.right);
    let second = fiber_product_upto(&first.set, l, m, &ev1, g, cap);
    HomotopyPullback { path, first, second }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubical::{boundary, is_isomorphic, standard_cube, Budget};

    #[test]
    fn path_object_of_a_point() {
        let p = mapr_interval(&CubicalSet::point());
        assert_eq!(p.set.counts(), vec![1]);
    }

    #[test]
    fn paths_in_the_interval() {
        let i = standard_cube(1);
        let p = mapr_interval(&i);
        // all 1-cubes of □¹
        assert_eq!(p.set.count(0), i.all_cubes(1).len());
        for n in 0..3 {
            let all_p: usize = p.set.all_cubes(n).len();
            assert_eq!(all_p, i.all_cubes(n + 1).len());
        }
        let _ = (p.ev(0), p.ev(1));
    }

    #[test]
    fn paths_round_trip() {
        let sq = standard_cube(2);
        let p = mapr_interval(&sq);
        for n in 0..3 {
            for c in sq.all_cubes(n + 1) {
                assert_eq!(p.to_m(&sq, p.from_m(c)), c);
            }
        }
    }

    #[test]
    fn products() {
        let i = standard_cube(1);
        let sq = product(&i, &i);
        // without symmetries the cartesian square has a diagonal and two squares
        assert_eq!(sq.set.counts(), vec![4, 5, 2]);
        let (b, _) = boundary(1).unwrap();
        assert_eq!(product(&b, &b).set.counts(), vec![4]);
        let pt = product(&CubicalSet::point(), &i);
        assert!(is_isomorphic(&pt.set, &i, &mut Budget::new(10_000)).unwrap());
    }

    #[test]
    fn homotopy_pullback_over_a_point_is_the_product() {
        let i = standard_cube(1);
        let pt = CubicalSet::point();
        let h = homotopy_pullback(&i, &i, &pt, &CubicalMap::to_point(&i), &CubicalMap::to_point(&i));
        assert!(is_isomorphic(h.set(), &product(&i, &i).set, &mut Budget::new(1_000_000)).unwrap());
    }
}
