use std::collections::BTreeMap;

use crate::linalg::{kernel_basis, Group, Hom, Mat};
use crate::{Error, Result};

/// Bounded chain complex of finitely generated free abelian groups.
/// `d(k)` maps degree `k` to degree `k - 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    ranks: BTreeMap<i32, usize>,
    d: BTreeMap<i32, Mat>,
}

pub static ZERO_COMPLEX: ChainComplex = ChainComplex { ranks: BTreeMap::new(), d: BTreeMap::new() };

impl ChainComplex {
    pub fn zero() -> ChainComplex {
        ZERO_COMPLEX.clone()
    }

    pub fn new(ranks: BTreeMap<i32, usize>, d: BTreeMap<i32, Mat>) -> Result<ChainComplex> {
        let ranks: BTreeMap<i32, usize> = ranks.into_iter().filter(|&(_, r)| r > 0).collect();
        let mut c = ChainComplex { ranks, d: BTreeMap::new() };
        for (k, m) in d {
            let want = (c.rank(k - 1), c.rank(k));
            if (m.rows(), m.cols()) != want {
                return Err(Error::input(format!(
                    "differential in degree {k} is {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    want.0,
                    want.1
                )));
            }
            if !m.is_zero() {
                c.d.insert(k, m);
            }
        }
        for &k in c.d.keys() {
            if !c.d(k - 1).mul(&c.d(k)).is_zero() {
                return Err(Error::input(format!("d∘d ≠ 0 at degree {k}")));
            }
        }
        Ok(c)
    }

    /// `Z` in a single degree.
    pub fn point(t: i32) -> ChainComplex {
        ChainComplex { ranks: BTreeMap::from([(t, 1)]), d: BTreeMap::new() }
    }

    /// Two-term complex `Z --n--> Z` in degrees `t+1 → t`.
    pub fn multiplication(t: i32, n: i64) -> ChainComplex {
        ChainComplex::new(
            BTreeMap::from([(t, 1), (t + 1, 1)]),
            BTreeMap::from([(t + 1, Mat::from_rows(1, 1, vec![n]))]),
        )
        .expect("two-term complex")
    }

    pub fn rank(&self, k: i32) -> usize {
        self.ranks.get(&k).copied().unwrap_or(0)
    }

    pub fn ranks(&self) -> &BTreeMap<i32, usize> {
        &self.ranks
    }

    pub fn d(&self, k: i32) -> Mat {
        self.d.get(&k).cloned().unwrap_or_else(|| Mat::zeros(self.rank(k - 1), self.rank(k)))
    }

    pub fn differentials(&self) -> &BTreeMap<i32, Mat> {
        &self.d
    }

    pub fn is_zero(&self) -> bool {
        self.ranks.is_empty()
    }

    /// Smallest and largest degree carrying a generator.
    pub fn degree_range(&self) -> Option<(i32, i32)> {
        Some((*self.ranks.keys().next()?, *self.ranks.keys().next_back()?))
    }

    pub fn total_rank(&self) -> usize {
        self.ranks.values().sum()
    }

    pub fn cycles(&self, k: i32) -> Mat {
        kernel_basis(&self.d(k))
    }

    pub fn homology(&self, k: i32) -> Group {
        let n = self.rank(k);
        Group::subquotient(n, &self.cycles(k), &self.d(k + 1))
    }

    pub fn is_acyclic(&self) -> bool {
        self.ranks.keys().all(|&k| self.homology(k).is_trivial())
    }

    /// `Σ^t`: degree shift by `t` with differential sign `(-1)^t`.
    pub fn suspend(&self, t: i32) -> ChainComplex {
        let sign = if t.rem_euclid(2) == 0 { 1 } else { -1 };
        ChainComplex {
            ranks: self.ranks.iter().map(|(&k, &r)| (k + t, r)).collect(),
            d: self.d.iter().map(|(&k, m)| (k + t, m.scale(sign))).collect(),
        }
    }

    pub fn direct_sum(&self, other: &ChainComplex) -> ChainComplex {
        let mut ranks = self.ranks.clone();
        for (&k, &r) in &other.ranks {
            *ranks.entry(k).or_insert(0) += r;
        }
        let degrees: Vec<i32> = ranks.keys().copied().collect();
        let d = degrees.iter().map(|&k| (k, self.d(k).block_diag(&other.d(k)))).collect();
        ChainComplex::new(ranks, d).expect("direct sum of complexes")
    }

    /// Tensor product with the Koszul sign `d(a⊗b) = da⊗b + (-1)^|a| a⊗db`.
    /// Degree-`n` basis: for `i` ascending, `A_i ⊗ B_{n-i}` in Kronecker order.
    pub fn tensor(&self, other: &ChainComplex) -> ChainComplex {
        let mut ranks = BTreeMap::new();
        for (&i, &a) in &self.ranks {
            for (&j, &b) in &other.ranks {
                *ranks.entry(i + j).or_insert(0) += a * b;
            }
        }
        let mut d = BTreeMap::new();
        let degrees: Vec<i32> = ranks.keys().copied().collect();
        for &n in &degrees {
            let src = self.tensor_blocks(other, n);
            let dst = self.tensor_blocks(other, n - 1);
            let rows: usize = dst.iter().map(|b| b.2).sum();
            let cols: usize = src.iter().map(|b| b.2).sum();
            let mut m = Mat::zeros(rows, cols);
            for &(i, off, _) in &src {
                let j = n - i;
                let (ra, rb) = (self.rank(i), other.rank(j));
                // da ⊗ b lands in block (i-1, j)
                if let Some(&(_, toff, _)) = dst.iter().find(|b| b.0 == i - 1) {
                    let blk = self.d(i).kron(&Mat::identity(rb));
                    m.set_block(toff, off, &blk);
                }
                // (-1)^i a ⊗ db lands in block (i, j-1)
                if let Some(&(_, toff, _)) = dst.iter().find(|b| b.0 == i) {
                    let sign = if i.rem_euclid(2) == 0 { 1 } else { -1 };
                    let blk = Mat::identity(ra).kron(&other.d(j)).scale(sign);
                    m.set_block(toff, off, &blk);
                }
            }
            d.insert(n, m);
        }
        ChainComplex::new(ranks, d).expect("tensor product of complexes")
    }

    /// `(i, offset, size)` for each block `A_i ⊗ B_{n-i}` of degree `n`.
    pub fn tensor_blocks(&self, other: &ChainComplex, n: i32) -> Vec<(i32, usize, usize)> {
        let mut out = Vec::new();
        let mut off = 0;
        for (&i, &a) in &self.ranks {
            let b = other.rank(n - i);
            if b > 0 {
                out.push((i, off, a * b));
                off += a * b;
            }
        }
        out
    }
}

/// Degree-preserving chain map, stored per degree as `rank_dst x rank_src` matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap {
    maps: BTreeMap<i32, Mat>,
}

impl ChainMap {
    pub fn new(src: &ChainComplex, dst: &ChainComplex, maps: BTreeMap<i32, Mat>) -> Result<ChainMap> {
        let f = ChainMap { maps: maps.into_iter().filter(|(_, m)| !m.is_zero()).collect() };
        for (&k, m) in &f.maps {
            if (m.rows(), m.cols()) != (dst.rank(k), src.rank(k)) {
                return Err(Error::input(format!("chain map has wrong shape in degree {k}")));
            }
        }
        let degrees: Vec<i32> = src.ranks().keys().copied().collect();
        for k in degrees {
            let lhs = dst.d(k).mul(&f.at(src, dst, k));
            let rhs = f.at(src, dst, k - 1).mul(&src.d(k));
            if lhs != rhs {
                return Err(Error::input(format!("map does not commute with d in degree {k}")));
            }
        }
        Ok(f)
    }

    pub fn zero() -> ChainMap {
        ChainMap { maps: BTreeMap::new() }
    }

    pub fn identity(c: &ChainComplex) -> ChainMap {
        ChainMap { maps: c.ranks().iter().map(|(&k, &r)| (k, Mat::identity(r))).collect() }
    }

    /// The matrix in degree `k`; shapes come from the given endpoints.
    pub fn at(&self, src: &ChainComplex, dst: &ChainComplex, k: i32) -> Mat {
        match self.maps.get(&k) {
            Some(m) => m.clone(),
            None => Mat::zeros(dst.rank(k), src.rank(k)),
        }
    }

    pub fn matrices(&self) -> &BTreeMap<i32, Mat> {
        &self.maps
    }

    /// `self ∘ inner` for `inner: a → b`, `self: b → c`.
    pub fn compose(&self, inner: &ChainMap, a: &ChainComplex, b: &ChainComplex, c: &ChainComplex) -> ChainMap {
        let maps = a.ranks().keys().map(|&k| (k, self.at(b, c, k).mul(&inner.at(a, b, k)))).collect::<BTreeMap<_, _>>();
        ChainMap { maps: maps.into_iter().filter(|(_, m)| !m.is_zero()).collect() }
    }

    pub fn scale(&self, s: i64) -> ChainMap {
        ChainMap { maps: self.maps.iter().map(|(&k, m)| (k, m.scale(s))).filter(|(_, m)| !m.is_zero()).collect() }
    }

    pub fn add(&self, other: &ChainMap, src: &ChainComplex, dst: &ChainComplex) -> ChainMap {
        let maps = src
            .ranks()
            .keys()
            .map(|&k| (k, self.at(src, dst, k).add(&other.at(src, dst, k))))
            .filter(|(_, m)| !m.is_zero())
            .collect();
        ChainMap { maps }
    }

    pub fn suspend(&self, t: i32) -> ChainMap {
        ChainMap { maps: self.maps.iter().map(|(&k, m)| (k + t, m.clone())).collect() }
    }

    pub fn direct_sum(
        &self,
        other: &ChainMap,
        s1: &ChainComplex,
        d1: &ChainComplex,
        s2: &ChainComplex,
        d2: &ChainComplex,
    ) -> ChainMap {
        let mut degrees: Vec<i32> = s1.ranks().keys().chain(s2.ranks().keys()).copied().collect();
        degrees.sort();
        degrees.dedup();
        let maps = degrees
            .into_iter()
            .map(|k| (k, self.at(s1, d1, k).block_diag(&other.at(s2, d2, k))))
            .filter(|(_, m)| !m.is_zero())
            .collect();
        ChainMap { maps }
    }

    /// `f ⊗ g` on tensor products, in the block order of `ChainComplex::tensor`.
    pub fn tensor(
        f: &ChainMap,
        g: &ChainMap,
        (a, a2): (&ChainComplex, &ChainComplex),
        (b, b2): (&ChainComplex, &ChainComplex),
    ) -> ChainMap {
        let src = a.tensor(b);
        let dst = a2.tensor(b2);
        let mut maps = BTreeMap::new();
        for &n in src.ranks().keys() {
            let sb = a.tensor_blocks(b, n);
            let db = a2.tensor_blocks(b2, n);
            let mut m = Mat::zeros(dst.rank(n), src.rank(n));
            for &(i, off, _) in &sb {
                if let Some(&(_, toff, _)) = db.iter().find(|x| x.0 == i) {
                    let blk = f.at(a, a2, i).kron(&g.at(b, b2, n - i));
                    m.set_block(toff, off, &blk);
                }
            }
            if !m.is_zero() {
                maps.insert(n, m);
            }
        }
        ChainMap { maps }
    }

    pub fn homology_map(&self, src: &ChainComplex, dst: &ChainComplex, k: i32) -> Hom {
        let hs = src.homology(k);
        let hd = dst.homology(k);
        Hom::induced(&hs, &hd, &self.at(src, dst, k)).expect("chain maps preserve cycles and boundaries")
    }

    pub fn is_quasi_iso(&self, src: &ChainComplex, dst: &ChainComplex) -> bool {
        let mut degrees: Vec<i32> = src.ranks().keys().chain(dst.ranks().keys()).copied().collect();
        degrees.sort();
        degrees.dedup();
        degrees.into_iter().all(|k| self.homology_map(src, dst, k).is_iso())
    }
}

/// Mapping cone of `f: a → b`: `cone_k = b_k ⊕ a_{k-1}`, `d(b, x) = (db + f x, -dx)`.
pub fn cone(f: &ChainMap, a: &ChainComplex, b: &ChainComplex) -> ChainComplex {
    let mut ranks = BTreeMap::new();
    for k in degrees_of(&[a.suspend(1), b.clone()]) {
        ranks.insert(k, b.rank(k) + a.rank(k - 1));
    }
    let mut d = BTreeMap::new();
    for &k in ranks.keys() {
        let mut m = Mat::zeros(b.rank(k - 1) + a.rank(k - 2), b.rank(k) + a.rank(k - 1));
        m.set_block(0, 0, &b.d(k));
        m.set_block(0, b.rank(k), &f.at(a, b, k - 1));
        m.set_block(b.rank(k - 1), b.rank(k), &a.d(k - 1).scale(-1));
        d.insert(k, m);
    }
    ChainComplex::new(ranks, d).expect("mapping cone")
}

/// Map of cones induced by a commuting square `(alpha: a → a2, beta: b → b2)`.
pub fn cone_map(
    alpha: &ChainMap,
    beta: &ChainMap,
    (a, b): (&ChainComplex, &ChainComplex),
    (a2, b2): (&ChainComplex, &ChainComplex),
) -> ChainMap {
    let mut maps = BTreeMap::new();
    for k in degrees_of(&[a.suspend(1), b.clone(), a2.suspend(1), b2.clone()]) {
        let m = beta.at(b, b2, k).block_diag(&alpha.at(a, a2, k - 1));
        if !m.is_zero() {
            maps.insert(k, m);
        }
    }
    ChainMap { maps }
}

/// `b → cone(f)`, `y ↦ (y, 0)`.
pub fn cone_inclusion(a: &ChainComplex, b: &ChainComplex) -> ChainMap {
    let mut maps = BTreeMap::new();
    for (&k, &r) in b.ranks() {
        let mut m = Mat::zeros(r + a.rank(k - 1), r);
        m.set_block(0, 0, &Mat::identity(r));
        maps.insert(k, m);
    }
    ChainMap { maps }
}

/// `cone(f) → Σa`, `(y, x) ↦ x`.
pub fn cone_projection(a: &ChainComplex, b: &ChainComplex) -> ChainMap {
    let mut maps = BTreeMap::new();
    for (&k, &r) in a.ranks() {
        let mut m = Mat::zeros(r, b.rank(k + 1) + r);
        m.set_block(0, b.rank(k + 1), &Mat::identity(r));
        maps.insert(k + 1, m);
    }
    ChainMap { maps }
}

pub fn degrees_of(cs: &[ChainComplex]) -> Vec<i32> {
    let mut v: Vec<i32> = cs.iter().flat_map(|c| c.ranks().keys().copied()).collect();
    v.sort();
    v.dedup();
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiplication_by_two_homology() {
        let c = ChainComplex::multiplication(0, 2);
        assert_eq!(c.homology(0).orders(), &[2]);
        assert!(c.homology(1).is_trivial());
    }

    #[test]
    fn identity_differential_is_acyclic() {
        let c = ChainComplex::multiplication(0, 1);
        assert!(c.is_acyclic());
    }

    #[test]
    fn rejects_nonzero_square() {
        let ranks = BTreeMap::from([(0, 1), (1, 1), (2, 1)]);
        let d = BTreeMap::from([(1, Mat::from_rows(1, 1, vec![1])), (2, Mat::from_rows(1, 1, vec![1]))]);
        assert!(ChainComplex::new(ranks, d).is_err());
    }

    #[test]
    fn cone_of_multiplication_by_p() {
        let z = ChainComplex::point(0);
        let f = ChainMap::new(&z, &z, BTreeMap::from([(0, Mat::from_rows(1, 1, vec![5]))])).unwrap();
        let c = cone(&f, &z, &z);
        assert_eq!(c.homology(0).orders(), &[5]);
        assert!(c.homology(1).is_trivial());
    }

    #[test]
    fn cone_projection_is_chain_map() {
        let z = ChainComplex::point(0);
        let f = ChainMap::new(&z, &z, BTreeMap::from([(0, Mat::from_rows(1, 1, vec![3]))])).unwrap();
        let c = cone(&f, &z, &z);
        let p = cone_projection(&z, &z);
        assert!(ChainMap::new(&c, &z.suspend(1), p.matrices().clone()).is_ok());
        let i = cone_inclusion(&z, &z);
        assert!(ChainMap::new(&z, &c, i.matrices().clone()).is_ok());
    }

    #[test]
    fn tensor_of_two_term_complexes() {
        let a = ChainComplex::multiplication(0, 2);
        let b = ChainComplex::multiplication(0, 3);
        let t = a.tensor(&b);
        // Z/2 ⊗ Z/3 = 0 and Tor vanishes
        for k in -1..=3 {
            assert!(t.homology(k).is_trivial(), "degree {k}");
        }
        let t2 = a.tensor(&a);
        assert_eq!(t2.homology(0).orders(), &[2]);
        assert_eq!(t2.homology(1).orders(), &[2]);
    }
}
