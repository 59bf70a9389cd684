use std::collections::HashMap;

use super::boxword::{BoxWord, Coord};
use crate::{Error, Result};

/// A cube `σ^* x`: the nondegenerate generator `gen` (of dimension
/// `keep.count_ones()`) pulled back along the projection of `□^dim` onto the
/// axes in `keep`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cube {
    pub dim: u8,
    pub keep: u32,
    pub gen: u32,
}

pub(crate) fn full(n: usize) -> u32 {
    ((1u64 << n) - 1) as u32
}

impl Cube {
    pub fn nondegenerate(dim: usize, gen: usize) -> Cube {
        Cube { dim: dim as u8, keep: full(dim), gen: gen as u32 }
    }

    pub fn gen_dim(&self) -> usize {
        self.keep.count_ones() as usize
    }

    pub fn is_degenerate(&self) -> bool {
        self.keep != full(self.dim as usize)
    }

    pub fn dropped(&self) -> u32 {
        full(self.dim as usize) & !self.keep
    }
}

/// Removes the bit positions in `axes` from `mask`, closing up the gaps.
pub(crate) fn compress(mask: u32, axes: u32, n: usize) -> u32 {
    let mut out = 0;
    let mut k = 0;
    for j in 0..n {
        if axes >> j & 1 == 1 {
            continue;
        }
        out |= (mask >> j & 1) << k;
        k += 1;
    }
    out
}

/// Makes generator names unique by appending primes.
pub(crate) fn dedupe(names: &mut [Vec<String>]) {
    let mut seen = std::collections::HashSet::new();
    for s in names.iter_mut().flatten() {
        while !seen.insert(s.clone()) {
            s.push('\'');
        }
    }
}

/// A finite cubical set presented by nondegenerate generators and their faces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubicalSet {
    names: Vec<Vec<String>>,
    /// `faces[n][x][2i + ε]` for `n ≥ 1`, an `(n-1)`-cube.
    faces: Vec<Vec<Vec<Cube>>>,
}

impl CubicalSet {
    pub fn empty() -> CubicalSet {
        CubicalSet { names: Vec::new(), faces: Vec::new() }
    }

    pub fn point() -> CubicalSet {
        standard_cube(0)
    }

    /// Validates dimensions, targets, name uniqueness and the cubical identities.
    pub fn new(names: Vec<Vec<String>>, faces: Vec<Vec<Vec<Cube>>>) -> Result<CubicalSet> {
        let mut names = names;
        while names.last().is_some_and(|v| v.is_empty()) {
            names.pop();
        }
        let mut faces = faces;
        faces.resize(names.len(), Vec::new());
        let set = CubicalSet { names, faces };
        let mut seen = std::collections::HashSet::new();
        for n in 0..set.names.len() {
            for name in &set.names[n] {
                if !seen.insert(name.as_str()) {
                    return Err(Error::input(format!("duplicate cube id '{name}'")));
                }
            }
            if n == 0 {
                if set.faces[0].iter().any(|f| !f.is_empty()) {
                    return Err(Error::input("vertices have no faces"));
                }
                continue;
            }
            if set.faces[n].len() != set.names[n].len() {
                return Err(Error::input(format!("face data missing in dimension {n}")));
            }
            for (x, fs) in set.faces[n].iter().enumerate() {
                if fs.len() != 2 * n {
                    return Err(Error::input(format!("cube '{}' needs {} faces", set.names[n][x], 2 * n)));
                }
                for f in fs {
                    if f.dim as usize != n - 1 || !set.has(*f) {
                        return Err(Error::input(format!("bad face target of '{}'", set.names[n][x])));
                    }
                }
            }
        }
        for n in 2..set.names.len() {
            for x in 0..set.names[n].len() {
                set.check_identities(n, x)?;
            }
        }
        Ok(set)
    }

    fn has(&self, c: Cube) -> bool {
        let k = c.gen_dim();
        (c.keep & !full(c.dim as usize)) == 0 && k < self.names.len() && (c.gen as usize) < self.names[k].len()
    }

    fn check_identities(&self, n: usize, x: usize) -> Result<()> {
        for p in 0..n {
            for q in p + 1..n {
                for (e, f) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
                    let a = self.restrict(self.faces[n][x][2 * p + e as usize], &BoxWord::face(n - 1, q - 1, f));
                    let b = self.restrict(self.faces[n][x][2 * q + f as usize], &BoxWord::face(n - 1, p, e));
                    if a != b {
                        return Err(Error::input(format!(
                            "cubical identity fails on '{}' at axes {} and {}",
                            self.names[n][x],
                            p + 1,
                            q + 1
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Highest populated dimension, `-1` when empty.
    pub fn dim_cap(&self) -> i32 {
        self.names.len() as i32 - 1
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn count(&self, n: usize) -> usize {
        self.names.get(n).map_or(0, Vec::len)
    }

    pub fn counts(&self) -> Vec<usize> {
        self.names.iter().map(Vec::len).collect()
    }

    pub fn names(&self, n: usize) -> &[String] {
        self.names.get(n).map_or(&[], Vec::as_slice)
    }

    pub fn name(&self, c: Cube) -> &str {
        &self.names[c.gen_dim()][c.gen as usize]
    }

    pub fn find(&self, name: &str) -> Option<Cube> {
        self.names
            .iter()
            .enumerate()
            .find_map(|(n, v)| v.iter().position(|s| s == name).map(|x| Cube::nondegenerate(n, x)))
    }

    /// `δ_{i,ε}^*` of the generator `x` of dimension `n` (0-based axis).
    pub fn face(&self, n: usize, x: usize, i: usize, eps: u8) -> Cube {
        self.faces[n][x][2 * i + eps as usize]
    }

    /// `α^* c` for a box map `α` into `□^{c.dim}`.
    pub fn restrict(&self, c: Cube, alpha: &BoxWord) -> Cube {
        assert_eq!(alpha.dst(), c.dim as usize, "box map does not land on the cube");
        let beta: Vec<Coord> =
            (0..c.dim as usize).filter(|&j| c.keep >> j & 1 == 1).map(|j| alpha.coords()[j]).collect();
        let k = beta.len();
        match beta.iter().position(|c| !matches!(c, Coord::Var(_))) {
            Some(p) => {
                let eps = if beta[p] == Coord::Zero { 0 } else { 1 };
                let y = self.faces[k][c.gen as usize][2 * p + eps];
                let mut rest = beta;
                rest.remove(p);
                let rest = BoxWord::new(alpha.src(), rest).expect("sub-word of a box map");
                self.restrict(y, &rest)
            }
            None => {
                let keep = beta.iter().fold(0u32, |m, c| match c {
                    Coord::Var(j) => m | 1 << j,
                    _ => m,
                });
                Cube { dim: alpha.src() as u8, keep, gen: c.gen }
            }
        }
    }

    /// All `n`-cubes, degenerate ones included, in a fixed order.
    pub fn all_cubes(&self, n: usize) -> Vec<Cube> {
        let mut out = Vec::new();
        for keep in 0..=full(n) {
            let k = keep.count_ones() as usize;
            for g in 0..self.count(k) {
                out.push(Cube { dim: n as u8, keep, gen: g as u32 });
            }
        }
        out
    }

    pub fn gens(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.names.iter().enumerate().flat_map(|(n, v)| (0..v.len()).map(move |x| (n, x)))
    }

    pub fn total(&self) -> usize {
        self.names.iter().map(Vec::len).sum()
    }

    /// The subobject on the generators selected by `keep`, with its inclusion.
    pub fn sub(&self, keep: impl Fn(usize, usize) -> bool) -> Result<(CubicalSet, CubicalMap)> {
        let mut index: Vec<Vec<Option<usize>>> = Vec::new();
        let mut names = Vec::new();
        let mut images = Vec::new();
        for (n, v) in self.names.iter().enumerate() {
            let mut idx = Vec::new();
            let mut nm = Vec::new();
            let mut im = Vec::new();
            for (x, s) in v.iter().enumerate() {
                if keep(n, x) {
                    idx.push(Some(nm.len()));
                    nm.push(s.clone());
                    im.push(Cube::nondegenerate(n, x));
                } else {
                    idx.push(None);
                }
            }
            index.push(idx);
            names.push(nm);
            images.push(im);
        }
        let mut faces = vec![Vec::new(); names.len()];
        for n in 1..self.names.len() {
            for x in 0..self.names[n].len() {
                if index[n][x].is_none() {
                    continue;
                }
                let fs = self.faces[n][x]
                    .iter()
                    .map(|f| {
                        let g = index[f.gen_dim()][f.gen as usize]
                            .ok_or_else(|| Error::input("selection is not closed under faces"))?;
                        Ok(Cube { gen: g as u32, ..*f })
                    })
                    .collect::<Result<Vec<_>>>()?;
                faces[n].push(fs);
            }
        }
        let sub = CubicalSet::new(names, faces)?;
        images.truncate(sub.names.len());
        let inc = CubicalMap { images };
        Ok((sub, inc))
    }

    /// Disjoint union, with generators of `other` renamed when names clash.
    pub fn disjoint_union(&self, other: &CubicalSet) -> CubicalSet {
        let n = self.names.len().max(other.names.len());
        let mut names = vec![Vec::new(); n];
        let mut faces = vec![Vec::new(); n];
        let clash = other.gens().any(|(d, x)| self.find(&other.names[d][x]).is_some());
        for d in 0..n {
            names[d].extend(self.names(d).iter().cloned());
            names[d].extend(other.names(d).iter().map(|s| if clash { format!("{s}'") } else { s.clone() }));
            if d > 0 {
                faces[d].extend(self.faces.get(d).cloned().unwrap_or_default());
                for fs in other.faces.get(d).cloned().unwrap_or_default() {
                    faces[d].push(
                        fs.into_iter().map(|f| Cube { gen: f.gen + self.count(f.gen_dim()) as u32, ..f }).collect(),
                    );
                }
            }
        }
        CubicalSet::new(names, faces).expect("disjoint union of valid sets")
    }

    pub(crate) fn raw_faces(&self, n: usize, x: usize) -> &[Cube] {
        &self.faces[n][x]
    }

    pub(crate) fn from_parts_unchecked(names: Vec<Vec<String>>, faces: Vec<Vec<Vec<Cube>>>) -> CubicalSet {
        CubicalSet { names, faces }
    }
}

/// A map of cubical sets, given by the image of each generator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CubicalMap {
    /// `images[n][x]` is an `n`-cube of the target.
    images: Vec<Vec<Cube>>,
}

impl CubicalMap {
    pub fn new(src: &CubicalSet, dst: &CubicalSet, images: Vec<Vec<Cube>>) -> Result<CubicalMap> {
        let mut images = images;
        images.resize(src.names.len(), Vec::new());
        if images.len() > src.names.len() && images[src.names.len()..].iter().any(|v| !v.is_empty()) {
            return Err(Error::input("map has images for missing cubes"));
        }
        images.truncate(src.names.len());
        for (n, im) in images.iter().enumerate() {
            if im.len() != src.count(n) {
                return Err(Error::input(format!("map needs {} images in dimension {n}", src.count(n))));
            }
            if im.iter().any(|c| c.dim as usize != n || !dst.has(*c)) {
                return Err(Error::input(format!("bad image in dimension {n}")));
            }
        }
        let f = CubicalMap { images };
        f.check(src, dst)?;
        Ok(f)
    }

    fn check(&self, src: &CubicalSet, dst: &CubicalSet) -> Result<()> {
        for n in 1..src.names.len() {
            for x in 0..src.count(n) {
                for i in 0..n {
                    for e in 0..2 {
                        let lhs = dst.restrict(self.images[n][x], &BoxWord::face(n, i, e));
                        let rhs = self.apply(dst, src.face(n, x, i, e));
                        if lhs != rhs {
                            return Err(Error::input(format!(
                                "map does not commute with face ({},{e}) of '{}'",
                                i + 1,
                                src.names[n][x]
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn identity(k: &CubicalSet) -> CubicalMap {
        CubicalMap {
            images: k
                .names
                .iter()
                .enumerate()
                .map(|(n, v)| (0..v.len()).map(|x| Cube::nondegenerate(n, x)).collect())
                .collect(),
        }
    }

    /// The unique map out of the empty set.
    pub fn from_empty() -> CubicalMap {
        CubicalMap { images: Vec::new() }
    }

    /// The unique map to the point.
    pub fn to_point(k: &CubicalSet) -> CubicalMap {
        CubicalMap {
            images: k
                .names
                .iter()
                .enumerate()
                .map(|(n, v)| vec![Cube { dim: n as u8, keep: 0, gen: 0 }; v.len()])
                .collect(),
        }
    }

    pub fn image(&self, n: usize, x: usize) -> Cube {
        self.images[n][x]
    }

    pub fn images(&self) -> &[Vec<Cube>] {
        &self.images
    }

    /// Image of an arbitrary (possibly degenerate) cube.
    pub fn apply(&self, dst: &CubicalSet, c: Cube) -> Cube {
        let im = self.images[c.gen_dim()][c.gen as usize];
        if c.is_degenerate() {
            dst.restrict(im, &BoxWord::projection(c.dim as usize, c.keep))
        } else {
            im
        }
    }

    /// `self ∘ inner`.
    pub fn compose(&self, dst: &CubicalSet, inner: &CubicalMap) -> CubicalMap {
        CubicalMap { images: inner.images.iter().map(|v| v.iter().map(|&c| self.apply(dst, c)).collect()).collect() }
    }

    /// Injective on generators with nondegenerate images.
    pub fn is_injective(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.images.iter().flatten().all(|c| !c.is_degenerate() && seen.insert(*c))
    }

    pub fn is_iso(&self, dst: &CubicalSet) -> bool {
        self.is_injective() && (0..=dst.names.len()).all(|n| self.images.get(n).map_or(0, Vec::len) == dst.count(n))
    }

    pub(crate) fn from_images_unchecked(images: Vec<Vec<Cube>>) -> CubicalMap {
        CubicalMap { images }
    }
}

/// `□^n`: generators are the injective box maps into `□^n`, named by their
/// coordinate strings over `0`, `1`, `x`.
pub fn standard_cube(n: usize) -> CubicalSet {
    let faces_of = standard_faces(n);
    let mut names = vec![Vec::new(); n + 1];
    for w in &faces_of {
        names[w.src()].push(face_name(w));
    }
    let index: HashMap<String, usize> =
        names.iter().flat_map(|v| v.iter().enumerate().map(|(i, s)| (s.clone(), i))).collect();
    let mut faces = vec![Vec::new(); n + 1];
    for w in &faces_of {
        let k = w.src();
        if k == 0 {
            continue;
        }
        let mut fs = Vec::new();
        for i in 0..k {
            for e in 0..2 {
                let f = w.compose(&BoxWord::face(k, i, e));
                fs.push(Cube::nondegenerate(k - 1, index[&face_name(&f)]));
            }
        }
        faces[k].push(fs);
    }
    CubicalSet { names, faces }
}

/// Injective box maps into `□^n`, ordered by dimension and then by name.
pub fn standard_faces(n: usize) -> Vec<BoxWord> {
    let mut out = Vec::new();
    for code in 0..3usize.pow(n as u32) {
        let mut c = code;
        let mut digits = Vec::with_capacity(n);
        for _ in 0..n {
            digits.push(c % 3);
            c /= 3;
        }
        digits.reverse();
        let mut k = 0u8;
        let coords = digits
            .iter()
            .map(|&d| match d {
                0 => Coord::Zero,
                1 => Coord::One,
                _ => {
                    k += 1;
                    Coord::Var(k - 1)
                }
            })
            .collect();
        out.push(BoxWord::new(k as usize, coords).expect("increasing variables"));
    }
    out.sort_by_key(|w| (w.src(), face_name(w)));
    out
}

pub fn face_name(w: &BoxWord) -> String {
    if w.dst() == 0 {
        return "*".into();
    }
    w.coords()
        .iter()
        .map(|c| match c {
            Coord::Zero => '0',
            Coord::One => '1',
            Coord::Var(_) => 'x',
        })
        .collect()
}

/// `∂□^n` with its inclusion.
pub fn boundary(n: usize) -> Result<(CubicalSet, CubicalMap)> {
    if n == 0 {
        return Err(Error::input("boundary of □^0 is not defined"));
    }
    standard_cube(n).sub(|d, _| d < n)
}

/// The open box `⊓^n_{k,ε}` (axis `k` counted from 1) with its inclusion into `□^n`.
pub fn open_box(n: usize, k: usize, eps: u8) -> Result<(CubicalSet, CubicalMap)> {
    if n == 0 || k == 0 || k > n || eps > 1 {
        return Err(Error::input(format!("no open box with n={n}, k={k}, ε={eps}")));
    }
    let cube = standard_cube(n);
    let faces = standard_faces(n);
    let by_dim: Vec<Vec<&BoxWord>> = (0..=n).map(|d| faces.iter().filter(|w| w.src() == d).collect()).collect();
    let removed = if eps == 0 { Coord::Zero } else { Coord::One };
    cube.sub(|d, x| {
        let w = by_dim[d][x];
        w.coords().iter().enumerate().any(|(j, c)| !matches!(c, Coord::Var(_)) && !(j == k - 1 && *c == removed))
    })
}

/// `sk^n K` with its inclusion.
pub fn skeleton(k: &CubicalSet, n: i32) -> (CubicalSet, CubicalMap) {
    k.sub(|d, _| (d as i32) <= n).expect("skeleta are closed under faces")
}

/// `K ⊠ L`, remembering which pair each generator came from.
#[derive(Clone, Debug)]
pub struct BoxProduct {
    pub set: CubicalSet,
    index: HashMap<(Cube, Cube), u32>,
    pairs: Vec<Vec<(Cube, Cube)>>,
}

impl BoxProduct {
    /// `a ⊠ b` for arbitrary cubes of the factors.
    pub fn cube(&self, a: Cube, b: Cube) -> Cube {
        let (p, q) = (a.gen_dim(), b.gen_dim());
        let ga = Cube::nondegenerate(p, a.gen as usize);
        let gb = Cube::nondegenerate(q, b.gen as usize);
        Cube { dim: a.dim + b.dim, keep: a.keep | b.keep << a.dim, gen: self.index[&(ga, gb)] }
    }

    /// The factors of a generator.
    pub fn factors(&self, n: usize, x: usize) -> (Cube, Cube) {
        self.pairs[n][x]
    }
}

pub fn box_product(k: &CubicalSet, l: &CubicalSet) -> BoxProduct {
    let dim = if k.is_empty() || l.is_empty() { 0 } else { k.names.len() + l.names.len() - 1 };
    let mut names = vec![Vec::new(); dim];
    let mut pairs = vec![Vec::new(); dim];
    let mut index = HashMap::new();
    for p in 0..k.names.len() {
        for q in 0..l.names.len() {
            for a in 0..k.count(p) {
                for b in 0..l.count(q) {
                    let key = (Cube::nondegenerate(p, a), Cube::nondegenerate(q, b));
                    index.insert(key, names[p + q].len() as u32);
                    names[p + q].push(format!("[{}|{}]", k.names[p][a], l.names[q][b]));
                    pairs[p + q].push(key);
                }
            }
        }
    }
    dedupe(&mut names);
    let mut prod = BoxProduct { set: CubicalSet::empty(), index, pairs };
    let mut faces = vec![Vec::new(); dim];
    for n in 1..dim {
        for &(a, b) in &prod.pairs[n] {
            let (p, q) = (a.dim as usize, b.dim as usize);
            let mut fs = Vec::with_capacity(2 * n);
            for i in 0..p {
                for e in 0..2 {
                    fs.push(prod.cube(k.face(p, a.gen as usize, i, e), b));
                }
            }
            for i in 0..q {
                for e in 0..2 {
                    fs.push(prod.cube(a, l.face(q, b.gen as usize, i, e)));
                }
            }
            faces[n].push(fs);
        }
    }
    prod.set = CubicalSet::new(names, faces).expect("box product satisfies the cubical identities");
    prod
}

/// `f ⊠ g: K ⊠ L → K' ⊠ L'`.
pub fn box_map(
    src: &BoxProduct,
    dst: &BoxProduct,
    (k2, f): (&CubicalSet, &CubicalMap),
    (l2, g): (&CubicalSet, &CubicalMap),
) -> CubicalMap {
    let images =
        src.pairs.iter().map(|v| v.iter().map(|&(a, b)| dst.cube(f.apply(k2, a), g.apply(l2, b))).collect()).collect();
    CubicalMap::new(&src.set, &dst.set, images).expect("box product of maps")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binom(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn standard_cube_counts() {
        for n in 0..5 {
            let c = standard_cube(n);
            for k in 0..=n {
                assert_eq!(c.count(k), binom(n, k) << (n - k));
            }
            CubicalSet::new(c.names.clone(), c.faces.clone()).unwrap();
        }
        assert_eq!(standard_cube(2).counts(), vec![4, 4, 1]);
    }

    #[test]
    fn boundary_and_boxes() {
        assert!(boundary(0).is_err());
        assert_eq!(boundary(1).unwrap().0.counts(), vec![2]);
        assert_eq!(boundary(2).unwrap().0.counts(), vec![4, 4]);
        let (b, _) = open_box(1, 1, 0).unwrap();
        assert_eq!(b.names(0), &["1".to_string()]);
        assert_eq!(open_box(2, 1, 0).unwrap().0.counts(), vec![4, 3]);
        assert!(open_box(2, 3, 0).is_err());
    }

    #[test]
    fn open_box_sits_in_the_boundary() {
        let (ob, inc) = open_box(3, 2, 1).unwrap();
        let (bd, _) = boundary(3).unwrap();
        for (n, x) in ob.gens() {
            let c = inc.image(n, x);
            assert!(bd.find(standard_cube(3).name(c)).is_some());
        }
    }

    #[test]
    fn skeleta() {
        let sq = standard_cube(2);
        assert!(skeleton(&sq, -1).0.is_empty());
        assert_eq!(skeleton(&sq, 0).0.counts(), vec![4]);
        assert_eq!(skeleton(&sq, 5).0, sq);
    }

    #[test]
    fn restrict_through_degeneracies() {
        let sq = standard_cube(2);
        // the edge x0 degenerated along a new first axis, then restricted to its face (1,0)
        let e = sq.find("x0").unwrap();
        let d = Cube { dim: 2, keep: 0b10, gen: e.gen };
        assert_eq!(sq.restrict(d, &BoxWord::face(2, 0, 0)), e);
        assert_eq!(sq.restrict(d, &BoxWord::face(2, 1, 1)), Cube { dim: 1, keep: 0, gen: sq.find("10").unwrap().gen });
    }

    #[test]
    fn rejects_broken_identities() {
        let mut sq = standard_cube(2);
        sq.faces[2][0].swap(0, 1);
        assert!(CubicalSet::new(sq.names.clone(), sq.faces.clone()).is_err());
    }

    #[test]
    fn box_product_counts() {
        let p = box_product(&standard_cube(1), &standard_cube(1));
        assert_eq!(p.set.counts(), vec![4, 4, 1]);
        let (b1, _) = boundary(1).unwrap();
        assert_eq!(box_product(&b1, &standard_cube(1)).set.counts(), vec![4, 2]);
        assert!(box_product(&standard_cube(2), &CubicalSet::empty()).set.is_empty());
    }

    #[test]
    fn maps_compose() {
        let (bd, inc) = boundary(2).unwrap();
        let sq = standard_cube(2);
        let bang = CubicalMap::to_point(&sq);
        let c = bang.compose(&CubicalSet::point(), &inc);
        CubicalMap::new(&bd, &CubicalSet::point(), c.images.clone()).unwrap();
        assert!(CubicalMap::identity(&sq).is_iso(&sq));
    }
}
