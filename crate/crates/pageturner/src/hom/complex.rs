use std::collections::BTreeMap;

use crate::complex::{ChainComplex, ChainMap, FilteredComplex, FilteredMap};
use crate::linalg::{kernel_basis, Hom, Mat, Solver};
use crate::{Error, Result};

/// Where the block `f^m_j: A^m_j → B^m_{j+k}` sits in a flattened degree-`k` element.
#[derive(Clone, Debug)]
struct Block {
    level: usize,
    j: i32,
    rows: usize,
    cols: usize,
    offset: usize,
}

#[derive(Clone, Debug)]
struct Layout {
    blocks: Vec<Block>,
    total: usize,
}

/// Complex of maps between two sequences of chain complexes, optionally
/// constrained to commute with structure maps. Degree-`k` elements are
/// families `f^m` raising degree by `k`, with `D f = d f - (-1)^k f d`.
#[derive(Clone, Debug)]
pub struct HomComplex {
    pub complex: ChainComplex,
    levels: Vec<i32>,
    src: Vec<ChainComplex>,
    dst: Vec<ChainComplex>,
    layout: BTreeMap<i32, Layout>,
    basis: BTreeMap<i32, Mat>,
    solver: BTreeMap<i32, Solver>,
}

fn sign(k: i32) -> i64 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

fn degree_span(cs: &[ChainComplex]) -> Option<(i32, i32)> {
    let lo = cs.iter().filter_map(|c| c.degree_range()).map(|r| r.0).min()?;
    let hi = cs.iter().filter_map(|c| c.degree_range()).map(|r| r.1).max()?;
    Some((lo, hi))
}

impl HomComplex {
    /// Maps `src[i] → dst[i]` per level, with the commutation constraint
    /// `ty[i] f^i = f^{i+1} sx[i]` between consecutive levels.
    fn build(
        levels: Vec<i32>,
        src: Vec<ChainComplex>,
        dst: Vec<ChainComplex>,
        sx: Vec<ChainMap>,
        ty: Vec<ChainMap>,
    ) -> HomComplex {
        let mut h = HomComplex {
            complex: ChainComplex::zero(),
            levels,
            src,
            dst,
            layout: BTreeMap::new(),
            basis: BTreeMap::new(),
            solver: BTreeMap::new(),
        };
        let (Some((a0, a1)), Some((b0, b1))) = (degree_span(&h.src), degree_span(&h.dst)) else {
            return h;
        };
        let (k0, k1) = (b0 - a1, b1 - a0);
        for k in k0 - 1..=k1 + 1 {
            let mut blocks = Vec::new();
            let mut off = 0;
            for (i, (a, b)) in h.src.iter().zip(&h.dst).enumerate() {
                for (&j, &cols) in a.ranks() {
                    let rows = b.rank(j + k);
                    if rows > 0 {
                        blocks.push(Block { level: i, j, rows, cols, offset: off });
                        off += rows * cols;
                    }
                }
            }
            h.layout.insert(k, Layout { blocks, total: off });
        }
        for k in k0 - 1..=k1 + 1 {
            let total = h.layout[&k].total;
            let cols: Vec<Vec<i64>> = (0..total)
                .map(|u| {
                    let mut e = vec![0; total];
                    e[u] = 1;
                    h.residual(k, &e, &sx, &ty)
                })
                .collect();
            let nres = cols.first().map_or(0, |c| c.len());
            let cons = Mat::from_cols(nres, &cols);
            let basis = if nres == 0 { Mat::identity(total) } else { kernel_basis(&cons) };
            h.solver.insert(k, Solver::new(&basis));
            h.basis.insert(k, basis);
        }
        let mut ranks = BTreeMap::new();
        let mut d = BTreeMap::new();
        for k in k0..=k1 {
            ranks.insert(k, h.basis[&k].cols());
        }
        for k in k0..=k1 {
            let b = &h.basis[&k];
            let cols: Vec<Vec<i64>> = (0..b.cols())
                .map(|c| {
                    let img = h.differential(k, &b.col(c));
                    h.coords(k - 1, &img).expect("D preserves the commutation constraints")
                })
                .collect();
            d.insert(k, Mat::from_cols(h.basis[&(k - 1)].cols(), &cols));
        }
        // degrees outside k0..=k1 have no elements, so drop the padding
        d.retain(|k, _| ranks.contains_key(&(k - 1)));
        h.complex = ChainComplex::new(ranks, d).expect("D∘D = 0 on hom complexes");
        h
    }

    /// Maps between two chain complexes, no filtration.
    pub fn plain(a: &ChainComplex, b: &ChainComplex) -> HomComplex {
        HomComplex::build(vec![0], vec![a.clone()], vec![b.clone()], vec![], vec![])
    }

    /// Filtered maps `X → sh^n Y`. The source must be cofibrant.
    pub fn filtered(x: &FilteredComplex, y: &FilteredComplex, n: i32) -> Result<HomComplex> {
        HomComplex::filtered_upto(x, y, n, i32::MIN)
    }

    /// As `filtered`, with levels computed at least up to `top`; complexes
    /// built with the same source and `top` can be composed with each other.
    pub fn filtered_upto(x: &FilteredComplex, y: &FilteredComplex, n: i32, top: i32) -> Result<HomComplex> {
        if !x.is_cofibrant() {
            return Err(Error::input("hom source must be cell-presented (zero below, split injective structure maps)"));
        }
        if x.is_empty_window() {
            return Ok(HomComplex::build(vec![], vec![], vec![], vec![], vec![]));
        }
        let yy = y.shift(n);
        let top = if yy.is_empty_window() { x.hi() } else { x.hi().max(yy.hi()) }.max(top);
        let levels: Vec<i32> = (x.lo()..=top).collect();
        let src = levels.iter().map(|&m| x.level(m).clone()).collect();
        let dst = levels.iter().map(|&m| yy.level(m).clone()).collect();
        let sx = levels.iter().map(|&m| x.map(m)).collect();
        let ty = levels.iter().map(|&m| yy.map(m)).collect();
        Ok(HomComplex::build(levels, src, dst, sx, ty))
    }

    fn blocks(&self, k: i32, v: &[i64]) -> BTreeMap<(usize, i32), Mat> {
        self.layout[&k]
            .blocks
            .iter()
            .map(|b| ((b.level, b.j), Mat::from_rows(b.rows, b.cols, v[b.offset..b.offset + b.rows * b.cols].to_vec())))
            .collect()
    }

    fn block(&self, k: i32, parts: &BTreeMap<(usize, i32), Mat>, level: usize, j: i32) -> Mat {
        parts
            .get(&(level, j))
            .cloned()
            .unwrap_or_else(|| Mat::zeros(self.dst[level].rank(j + k), self.src[level].rank(j)))
    }

    fn flatten(&self, k: i32, parts: &BTreeMap<(usize, i32), Mat>) -> Vec<i64> {
        let lay = &self.layout[&k];
        let mut v = vec![0; lay.total];
        for b in &lay.blocks {
            if let Some(m) = parts.get(&(b.level, b.j)) {
                for r in 0..b.rows {
                    for c in 0..b.cols {
                        v[b.offset + r * b.cols + c] = m[(r, c)];
                    }
                }
            }
        }
        v
    }

    fn residual(&self, k: i32, v: &[i64], sx: &[ChainMap], ty: &[ChainMap]) -> Vec<i64> {
        let parts = self.blocks(k, v);
        let mut out = Vec::new();
        for i in 0..self.levels.len().saturating_sub(1) {
            let (a, a2) = (&self.src[i], &self.src[i + 1]);
            let (b, b2) = (&self.dst[i], &self.dst[i + 1]);
            for &j in a.ranks().keys() {
                let lhs = ty[i].at(b, b2, j + k).mul(&self.block(k, &parts, i, j));
                let rhs = self.block(k, &parts, i + 1, j).mul(&sx[i].at(a, a2, j));
                out.extend(lhs.sub(&rhs).to_nested().into_iter().flatten());
            }
        }
        out
    }

    /// `D f = d f - (-1)^k f d`, on flattened vectors.
    fn differential(&self, k: i32, v: &[i64]) -> Vec<i64> {
        let parts = self.blocks(k, v);
        let mut out = BTreeMap::new();
        for (i, (a, b)) in self.src.iter().zip(&self.dst).enumerate() {
            for &j in a.ranks().keys() {
                let t1 = b.d(j + k).mul(&self.block(k, &parts, i, j));
                let t2 = self.block(k, &parts, i, j - 1).mul(&a.d(j)).scale(sign(k));
                let m = t1.sub(&t2);
                if m.rows() > 0 && m.cols() > 0 {
                    out.insert((i, j), m);
                }
            }
        }
        self.flatten(k - 1, &out)
    }

    /// Basis coordinates of a flattened element.
    pub fn coords(&self, k: i32, v: &[i64]) -> Option<Vec<i64>> {
        match self.solver.get(&k) {
            Some(s) => s.solve(v),
            None => v.iter().all(|&x| x == 0).then(Vec::new),
        }
    }

    /// Flattened element from basis coordinates.
    pub fn element(&self, k: i32, c: &[i64]) -> Vec<i64> {
        match self.basis.get(&k) {
            Some(b) => b.mul_vec(c),
            None => vec![],
        }
    }

    /// Blocks `j ↦ f_j` of a degree-`k` element of a single-level hom complex.
    pub fn plain_blocks(&self, k: i32, c: &[i64]) -> BTreeMap<i32, Mat> {
        if !self.layout.contains_key(&k) {
            return BTreeMap::new();
        }
        let v = self.element(k, c);
        self.blocks(k, &v).into_iter().filter(|((l, _), _)| *l == 0).map(|((_, j), m)| (j, m)).collect()
    }

    /// Basis coordinates of a degree-`k` element of a single-level hom complex.
    pub fn plain_coords(&self, k: i32, maps: &BTreeMap<i32, Mat>) -> Option<Vec<i64>> {
        if !self.layout.contains_key(&k) {
            return maps.values().all(Mat::is_zero).then(Vec::new);
        }
        let parts = maps.iter().map(|(&j, m)| ((0, j), m.clone())).collect();
        self.coords(k, &self.flatten(k, &parts))
    }

    pub fn levels(&self) -> &[i32] {
        &self.levels
    }

    /// The per-level chain maps of a degree-0 element.
    pub fn level_maps(&self, c: &[i64]) -> Vec<ChainMap> {
        let v = self.element(0, c);
        if v.is_empty() {
            return self.levels.iter().map(|_| ChainMap::zero()).collect();
        }
        let parts = self.blocks(0, &v);
        (0..self.levels.len())
            .map(|i| {
                let maps = parts.iter().filter(|((l, _), _)| *l == i).map(|((_, j), m)| (*j, m.clone())).collect();
                ChainMap::new(&self.src[i], &self.dst[i], maps).expect("degree-0 cycles are chain maps")
            })
            .collect()
    }

    /// Basis coordinates of the degree-0 element with level maps `f(m)`.
    pub fn element_of<F>(&self, f: F) -> Option<Vec<i64>>
    where
        F: Fn(i32) -> ChainMap,
    {
        let Some(lay) = self.layout.get(&0) else { return Some(vec![]) };
        let mut parts = BTreeMap::new();
        for b in &lay.blocks {
            let g = f(self.levels[b.level]);
            parts.insert((b.level, b.j), g.at(&self.src[b.level], &self.dst[b.level], b.j));
        }
        self.coords(0, &self.flatten(0, &parts))
    }

    /// A degree-0 cycle as a filtered map `X → sh^n Y`.
    pub fn to_filtered_map(&self, x: &FilteredComplex, target: &FilteredComplex, c: &[i64]) -> Result<FilteredMap> {
        let maps = self.level_maps(c);
        if self.levels.is_empty() {
            return Ok(FilteredMap::zero());
        }
        let mut all = vec![ChainMap::zero()];
        all.extend(maps);
        FilteredMap::new(x, target, self.levels[0] - 1, all)
    }

    /// Chain map `Hom(A, B) → Hom(A, C)` given by post-composing with `g^m: B^m → C^m`.
    pub fn post_compose(&self, other: &HomComplex, g: &[ChainMap]) -> ChainMap {
        assert_eq!(self.levels, other.levels, "post-composition needs matching levels");
        self.induced(other, |k, parts| {
            parts.iter().map(|(&(i, j), m)| ((i, j), g[i].at(&self.dst[i], &other.dst[i], j + k).mul(m))).collect()
        })
    }

    /// Chain map `Hom(B, C) → Hom(A, C)` given by pre-composing with `h^m: A^m → B^m`.
    pub fn pre_compose(&self, other: &HomComplex, h: &[ChainMap]) -> ChainMap {
        assert_eq!(self.levels, other.levels, "pre-composition needs matching levels");
        self.induced(other, |_, parts| {
            let mut out = BTreeMap::new();
            for (i, a) in other.src.iter().enumerate() {
                for &j in a.ranks().keys() {
                    if let Some(m) = parts.get(&(i, j)) {
                        out.insert((i, j), m.mul(&h[i].at(a, &self.src[i], j)));
                    }
                }
            }
            out
        })
    }

    fn induced<F>(&self, other: &HomComplex, rule: F) -> ChainMap
    where
        F: Fn(i32, &BTreeMap<(usize, i32), Mat>) -> BTreeMap<(usize, i32), Mat>,
    {
        let mut maps = BTreeMap::new();
        for (&k, &n) in self.complex.ranks() {
            if n == 0 || other.complex.rank(k) == 0 {
                continue;
            }
            let b = &self.basis[&k];
            let cols: Vec<Vec<i64>> = (0..b.cols())
                .map(|c| {
                    let parts = self.blocks(k, &b.col(c));
                    let img = other.flatten(k, &rule(k, &parts));
                    other.coords(k, &img).expect("composite satisfies the constraints")
                })
                .collect();
            maps.insert(k, Mat::from_cols(other.complex.rank(k), &cols));
        }
        ChainMap::new(&self.complex, &other.complex, maps).expect("composition commutes with D")
    }
}

/// `H_0` of a hom complex: homotopy classes of maps.
pub fn h0(h: &HomComplex) -> crate::linalg::Group {
    h.complex.homology(0)
}

/// Map on `H_0` induced by a degree-0 chain map of hom complexes.
pub fn h0_map(f: &ChainMap, a: &HomComplex, b: &HomComplex) -> Hom {
    f.homology_map(&a.complex, &b.complex, 0)
}
