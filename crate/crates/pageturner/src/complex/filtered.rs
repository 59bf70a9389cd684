use serde::{Deserialize, Serialize};

use super::chain::{cone, cone_inclusion, cone_map, cone_projection, ChainComplex, ChainMap, ZERO_COMPLEX};
use crate::linalg::{Group, Hom, Mat};
use crate::{Error, Result};

/// Value of a filtered complex below its window.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Below {
    #[serde(rename = "zero")]
    Zero,
    #[serde(rename = "constant-from-lo")]
    ConstantFromLo,
}

/// `ℤ`-indexed sequence of chain complexes with structure maps `X^m → X^{m+1}`.
/// Stored on `[lo, hi]`; constant above `hi`, and zero or constant below `lo`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilteredComplex {
    lo: i32,
    below: Below,
    levels: Vec<ChainComplex>,
    maps: Vec<ChainMap>,
}

impl FilteredComplex {
    /// `levels[i]` sits at `lo + i`; `maps[i]: levels[i] → levels[i+1]`.
    pub fn new(lo: i32, below: Below, levels: Vec<ChainComplex>, maps: Vec<ChainMap>) -> Result<FilteredComplex> {
        if levels.len() != maps.len() + 1 && !(levels.is_empty() && maps.is_empty()) {
            return Err(Error::input("need exactly one structure map between consecutive levels"));
        }
        for (i, f) in maps.iter().enumerate() {
            ChainMap::new(&levels[i], &levels[i + 1], f.matrices().clone())
                .map_err(|e| Error::input(format!("structure map at level {}: {e}", lo + i as i32)))?;
        }
        Ok(FilteredComplex { lo, below, levels, maps })
    }

    pub fn zero() -> FilteredComplex {
        FilteredComplex { lo: 0, below: Below::Zero, levels: vec![], maps: vec![] }
    }

    /// Builds a complex from level and map rules on `[lo, hi]`.
    pub fn from_fn<L, M>(lo: i32, hi: i32, below: Below, level: L, map: M) -> Result<FilteredComplex>
    where
        L: Fn(i32) -> ChainComplex,
        M: Fn(i32) -> ChainMap,
    {
        if hi < lo {
            return Ok(FilteredComplex::zero());
        }
        let levels = (lo..=hi).map(&level).collect();
        let maps = (lo..hi).map(&map).collect();
        FilteredComplex::new(lo, below, levels, maps)
    }

    /// The same complex seen only through one level: constant with value `c`.
    pub fn constant(c: ChainComplex) -> FilteredComplex {
        FilteredComplex { lo: 0, below: Below::ConstantFromLo, levels: vec![c], maps: vec![] }
    }

    pub fn is_empty_window(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn lo(&self) -> i32 {
        self.lo
    }

    pub fn hi(&self) -> i32 {
        self.lo + self.levels.len() as i32 - 1
    }

    pub fn below(&self) -> Below {
        self.below
    }

    pub fn stored_levels(&self) -> &[ChainComplex] {
        &self.levels
    }

    pub fn stored_maps(&self) -> &[ChainMap] {
        &self.maps
    }

    pub fn level(&self, m: i32) -> &ChainComplex {
        if self.levels.is_empty() {
            return &ZERO_COMPLEX;
        }
        if m < self.lo {
            return match self.below {
                Below::Zero => &ZERO_COMPLEX,
                Below::ConstantFromLo => &self.levels[0],
            };
        }
        let i = ((m - self.lo) as usize).min(self.levels.len() - 1);
        &self.levels[i]
    }

    /// Structure map `X^m → X^{m+1}`.
    pub fn map(&self, m: i32) -> ChainMap {
        if self.levels.is_empty() {
            return ChainMap::zero();
        }
        if m < self.lo {
            return match self.below {
                Below::Zero => ChainMap::zero(),
                Below::ConstantFromLo => ChainMap::identity(&self.levels[0]),
            };
        }
        if m >= self.hi() {
            return ChainMap::identity(self.level(m));
        }
        self.maps[(m - self.lo) as usize].clone()
    }

    /// Composite structure map `X^a → X^b` for `a ≤ b`.
    pub fn map_between(&self, a: i32, b: i32) -> ChainMap {
        assert!(a <= b, "structure maps only go up");
        let mut f = ChainMap::identity(self.level(a));
        for m in a..b {
            f = self.map(m).compose(&f, self.level(a), self.level(m), self.level(m + 1));
        }
        f
    }

    /// Degrees carrying generators at some level.
    pub fn degree_range(&self) -> Option<(i32, i32)> {
        let ranges: Vec<(i32, i32)> = self.levels.iter().filter_map(|c| c.degree_range()).collect();
        Some((ranges.iter().map(|r| r.0).min()?, ranges.iter().map(|r| r.1).max()?))
    }

    /// `sh^k`: level `m` becomes `X^{m+k}`.
    pub fn shift(&self, k: i32) -> FilteredComplex {
        FilteredComplex { lo: self.lo - k, below: self.below, levels: self.levels.clone(), maps: self.maps.clone() }
    }

    /// Levelwise `Σ^t`.
    pub fn suspend(&self, t: i32) -> FilteredComplex {
        FilteredComplex {
            lo: self.lo,
            below: self.below,
            levels: self.levels.iter().map(|c| c.suspend(t)).collect(),
            maps: self.maps.iter().map(|f| f.suspend(t)).collect(),
        }
    }

    /// `Σ^{t,w} = Σ^t sh^{w-t}`.
    pub fn bigraded_suspension(&self, t: i32, w: i32) -> FilteredComplex {
        self.shift(w - t).suspend(t)
    }

    pub fn direct_sum(&self, other: &FilteredComplex) -> FilteredComplex {
        let (lo, hi, below) = joint_window(&[self, other]);
        FilteredComplex::from_fn(
            lo,
            hi,
            below,
            |m| self.level(m).direct_sum(other.level(m)),
            |m| {
                self.map(m).direct_sum(
                    &other.map(m),
                    self.level(m),
                    self.level(m + 1),
                    other.level(m),
                    other.level(m + 1),
                )
            },
        )
        .expect("direct sum of filtered complexes")
        .trimmed()
    }

    /// Structure map `τ: X → sh X`, levelwise `X^m → X^{m+1}`.
    pub fn tau(&self) -> FilteredMap {
        FilteredMap::from_fn(self, &self.shift(1), |m| self.map(m))
    }

    /// Identity map.
    pub fn identity(&self) -> FilteredMap {
        FilteredMap::from_fn(self, self, |m| ChainMap::identity(self.level(m)))
    }

    /// Whether every structure map is injective with free cokernel, levels are
    /// zero below the window, so the object is built from spheres.
    pub fn is_cofibrant(&self) -> bool {
        if self.levels.is_empty() {
            return true;
        }
        if self.below != Below::Zero {
            return false;
        }
        for m in self.lo..self.hi() {
            let f = self.map(m);
            for (&k, &r) in self.level(m).ranks() {
                let a = f.at(self.level(m), self.level(m + 1), k);
                let s = crate::linalg::smith_normal_form(&a);
                if s.rank != r || s.invariant_factors.iter().any(|&d| d != 1) {
                    return false;
                }
            }
        }
        true
    }

    pub fn homology(&self, m: i32, t: i32) -> Group {
        self.level(m).homology(t)
    }

    /// `H_t(X^a) → H_t(X^b)` induced by structure maps.
    pub fn homology_map(&self, a: i32, b: i32, t: i32) -> Hom {
        self.map_between(a, b).homology_map(self.level(a), self.level(b), t)
    }

    /// Drops redundant edge levels so equal objects get equal presentations.
    pub fn trimmed(&self) -> FilteredComplex {
        let mut levels = self.levels.clone();
        let mut maps = self.maps.clone();
        let mut lo = self.lo;
        // top: identical level with identity map adds nothing
        while levels.len() >= 2 {
            let n = levels.len();
            if levels[n - 1] == levels[n - 2] && maps[n - 2] == ChainMap::identity(&levels[n - 2]) {
                levels.pop();
                maps.pop();
            } else {
                break;
            }
        }
        loop {
            if levels.is_empty() {
                return FilteredComplex::zero();
            }
            let redundant = match self.below {
                Below::Zero => levels[0].is_zero(),
                Below::ConstantFromLo => {
                    levels.len() >= 2 && levels[0] == levels[1] && maps[0] == ChainMap::identity(&levels[0])
                }
            };
            if !redundant {
                break;
            }
            if levels.len() == 1 {
                levels.clear();
                continue;
            }
            levels.remove(0);
            maps.remove(0);
            lo += 1;
        }
        FilteredComplex { lo, below: self.below, levels, maps }
    }

    /// Levelwise equality of presentations over the union of windows.
    pub fn same_as(&self, other: &FilteredComplex) -> bool {
        self.trimmed() == other.trimmed()
    }
}

/// Common window and below-convention for a levelwise construction over several
/// inputs. Mixed conventions are resolved by stepping one level below all inputs.
pub fn joint_window(xs: &[&FilteredComplex]) -> (i32, i32, Below) {
    let live: Vec<&&FilteredComplex> = xs.iter().filter(|x| !x.is_empty_window()).collect();
    if live.is_empty() {
        return (0, -1, Below::Zero);
    }
    let lo = live.iter().map(|x| x.lo()).min().unwrap();
    let hi = live.iter().map(|x| x.hi()).max().unwrap();
    if live.iter().all(|x| x.below() == Below::Zero) {
        (lo, hi, Below::Zero)
    } else {
        (lo - 1, hi, Below::ConstantFromLo)
    }
}

/// Levelwise chain maps commuting with structure maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilteredMap {
    lo: i32,
    maps: Vec<ChainMap>,
}

impl FilteredMap {
    /// Levelwise rule on the joint window; the rule must also be meaningful
    /// one level below it (checked by `validate`).
    pub fn from_fn<F>(src: &FilteredComplex, dst: &FilteredComplex, f: F) -> FilteredMap
    where
        F: Fn(i32) -> ChainMap,
    {
        let (lo, hi, _) = joint_window(&[src, dst]);
        if hi < lo {
            return FilteredMap { lo: 0, maps: vec![] };
        }
        FilteredMap { lo: lo - 1, maps: (lo - 1..=hi).map(f).collect() }
    }

    pub fn new(src: &FilteredComplex, dst: &FilteredComplex, lo: i32, maps: Vec<ChainMap>) -> Result<FilteredMap> {
        let f = FilteredMap { lo, maps };
        f.validate(src, dst)?;
        Ok(f)
    }

    pub fn zero() -> FilteredMap {
        FilteredMap { lo: 0, maps: vec![] }
    }

    pub fn lo(&self) -> i32 {
        self.lo
    }

    pub fn stored(&self) -> &[ChainMap] {
        &self.maps
    }

    /// Level `m` component. Outside the stored range: constant continuation.
    pub fn at(&self, m: i32) -> ChainMap {
        if self.maps.is_empty() {
            return ChainMap::zero();
        }
        let i = (m - self.lo).clamp(0, self.maps.len() as i32 - 1) as usize;
        self.maps[i].clone()
    }

    pub fn validate(&self, src: &FilteredComplex, dst: &FilteredComplex) -> Result<()> {
        let (lo, hi, _) = joint_window(&[src, dst]);
        if hi < lo {
            return Ok(());
        }
        for m in lo - 2..=hi + 1 {
            let f = self.at(m);
            ChainMap::new(src.level(m), dst.level(m), f.matrices().clone())
                .map_err(|e| Error::input(format!("filtered map at level {m}: {e}")))?;
            let a = dst.map(m).compose(&f, src.level(m), dst.level(m), dst.level(m + 1));
            let b = self.at(m + 1).compose(&src.map(m), src.level(m), src.level(m + 1), dst.level(m + 1));
            if a != b {
                return Err(Error::input(format!("filtered map does not commute with structure maps at level {m}")));
            }
        }
        Ok(())
    }

    pub fn compose(
        &self,
        inner: &FilteredMap,
        a: &FilteredComplex,
        b: &FilteredComplex,
        c: &FilteredComplex,
    ) -> FilteredMap {
        FilteredMap::from_fn(a, c, |m| self.at(m).compose(&inner.at(m), a.level(m), b.level(m), c.level(m)))
    }

    pub fn shift(&self, k: i32) -> FilteredMap {
        FilteredMap { lo: self.lo - k, maps: self.maps.clone() }
    }

    pub fn suspend(&self, t: i32) -> FilteredMap {
        FilteredMap { lo: self.lo, maps: self.maps.iter().map(|f| f.suspend(t)).collect() }
    }
}

/// Levelwise mapping cone of a filtered map.
pub fn levelwise_cofiber(f: &FilteredMap, x: &FilteredComplex, y: &FilteredComplex) -> Result<FilteredComplex> {
    f.validate(x, y)?;
    let (lo, hi, below) = joint_window(&[x, y]);
    Ok(FilteredComplex::from_fn(
        lo,
        hi,
        below,
        |m| cone(&f.at(m), x.level(m), y.level(m)),
        |m| cone_map(&x.map(m), &y.map(m), (x.level(m), y.level(m)), (x.level(m + 1), y.level(m + 1))),
    )?
    .trimmed())
}

/// Levelwise `Y → cone(f)`.
pub fn cofiber_inclusion(x: &FilteredComplex, y: &FilteredComplex) -> FilteredMap {
    FilteredMap::from_fn(x, y, |m| cone_inclusion(x.level(m), y.level(m)))
}

/// Levelwise `cone(f) → ΣX`.
pub fn cofiber_projection(x: &FilteredComplex, y: &FilteredComplex) -> FilteredMap {
    FilteredMap::from_fn(x, y, |m| cone_projection(x.level(m), y.level(m)))
}

/// `S^{t,w}`: a single `ℤ` in degree `t` at levels `≥ t - w`.
pub fn sphere(t: i32, w: i32) -> FilteredComplex {
    FilteredComplex::new(t - w, Below::Zero, vec![ChainComplex::point(t)], vec![]).expect("sphere")
}

/// Filtered quotient `X / sh^{-2} X`, a model for `X // τ`.
pub fn mod_tau(x: &FilteredComplex) -> FilteredComplex {
    let s = x.shift(-2);
    let f = FilteredMap::from_fn(&s, x, |m| x.map_between(m - 2, m));
    levelwise_cofiber(&f, &s, x).expect("τ² is a filtered map")
}

/// `gr^m X = cone(X^{m-1} → X^m)`.
pub fn gr_level(x: &FilteredComplex, m: i32) -> ChainComplex {
    cone(&x.map(m - 1), x.level(m - 1), x.level(m))
}

/// Chain-level connecting map `gr^m → Σ gr^{m-1}` as a degree −1 map
/// `(y, z) ↦ (z, 0)`; returned in degree `t` as a matrix `gr^{m-1}_{t-1} x gr^m_t`.
pub fn gr_connecting(x: &FilteredComplex, m: i32, t: i32) -> Mat {
    let src_b = x.level(m).rank(t);
    let src_a = x.level(m - 1).rank(t - 1);
    let dst_b = x.level(m - 1).rank(t - 1);
    let dst_a = x.level(m - 2).rank(t - 2);
    let mut out = Mat::zeros(dst_b + dst_a, src_b + src_a);
    out.set_block(0, src_b, &Mat::identity(src_a));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn cone_p(p: i64) -> FilteredComplex {
        // F^0 = Z in degree 0, F^1 = cone(p): Z in degrees 0 and 1 with d = p
        let l0 = ChainComplex::point(0);
        let l1 = ChainComplex::multiplication(0, p);
        let inc = ChainMap::new(&l0, &l1, BTreeMap::from([(0, Mat::from_rows(1, 1, vec![1]))])).unwrap();
        FilteredComplex::new(0, Below::Zero, vec![l0, l1], vec![inc]).unwrap()
    }

    #[test]
    fn shift_moves_window() {
        let x = cone_p(3);
        assert_eq!(x.shift(1).lo(), -1);
        assert_eq!(x.shift(1).level(0), x.level(1));
        assert_eq!(x.shift(1).shift(-1), x);
        assert_eq!(x.shift(0), x);
    }

    #[test]
    fn ctau_model_levels() {
        let c = mod_tau(&sphere(0, 0));
        assert_eq!(c.homology(0, 0).orders(), &[0]);
        assert_eq!(c.homology(1, 0).orders(), &[0]);
        assert!(c.level(2).is_acyclic());
        assert!(c.level(7).is_acyclic());
        assert!(c.level(-1).is_zero());
    }

    #[test]
    fn bigraded_suspension_special_cases() {
        let x = cone_p(2);
        assert_eq!(x.bigraded_suspension(0, 1), x.shift(1));
        assert_eq!(x.bigraded_suspension(1, 1), x.suspend(1));
    }

    #[test]
    fn cofiber_of_identity_is_acyclic() {
        let x = cone_p(3);
        let c = levelwise_cofiber(&x.identity(), &x, &x).unwrap();
        for m in -1..=3 {
            assert!(c.level(m).is_acyclic());
        }
    }

    #[test]
    fn cofiber_of_zero_splits() {
        let x = cone_p(3);
        let zero = FilteredMap::from_fn(&x, &x, |_| ChainMap::zero());
        let c = levelwise_cofiber(&zero, &x, &x).unwrap();
        let expect = x.direct_sum(&x.suspend(1));
        for m in -1..=3 {
            for t in -1..=3 {
                assert!(c.homology(m, t).is_isomorphic(&expect.homology(m, t)));
            }
        }
    }

    #[test]
    fn cofibrancy_detects_non_split_maps() {
        assert!(sphere(0, 0).is_cofibrant());
        let l0 = ChainComplex::point(0);
        let p = ChainMap::new(&l0, &l0, BTreeMap::from([(0, Mat::from_rows(1, 1, vec![2]))])).unwrap();
        let x = FilteredComplex::new(0, Below::Zero, vec![l0.clone(), l0], vec![p]).unwrap();
        assert!(!x.is_cofibrant());
    }
}
