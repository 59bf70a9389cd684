use crate::cubical::{enumerate_maps, product, skeleton, Budget, Cube, CubicalMap, CubicalSet, Levels};
use crate::{Error, Result};

/// `… → X^m → X^{m+1} → …`, empty below `lo` and constant from `hi` on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilteredCubicalSet {
    lo: i32,
    levels: Vec<CubicalSet>,
    /// `maps[i]: levels[i] → levels[i + 1]`.
    maps: Vec<CubicalMap>,
    empty: CubicalSet,
}

impl FilteredCubicalSet {
    pub fn new(lo: i32, levels: Vec<CubicalSet>, maps: Vec<CubicalMap>) -> Result<FilteredCubicalSet> {
        if levels.is_empty() {
            return Err(Error::input("a filtered cubical set needs at least one level"));
        }
        if maps.len() + 1 != levels.len() {
            return Err(Error::input(format!("{} levels need {} structure maps", levels.len(), levels.len() - 1)));
        }
        for (i, f) in maps.iter().enumerate() {
            CubicalMap::new(&levels[i], &levels[i + 1], f.images().to_vec())
                .map_err(|e| Error::input(format!("structure map at level {}: {e}", lo + i as i32)))?;
        }
        Ok(FilteredCubicalSet { lo, levels, maps, empty: CubicalSet::empty() })
    }

    /// Empty at every level.
    pub fn empty() -> FilteredCubicalSet {
        FilteredCubicalSet { lo: 0, levels: vec![CubicalSet::empty()], maps: Vec::new(), empty: CubicalSet::empty() }
    }

    pub fn lo(&self) -> i32 {
        self.lo
    }

    pub fn hi(&self) -> i32 {
        self.lo + self.levels.len() as i32 - 1
    }

    pub fn is_empty(&self) -> bool {
        self.levels.last().is_some_and(CubicalSet::is_empty)
    }

    pub fn level(&self, m: i32) -> &CubicalSet {
        if m < self.lo {
            &self.empty
        } else {
            &self.levels[((m - self.lo) as usize).min(self.levels.len() - 1)]
        }
    }

    /// Structure map `X^m → X^{m+1}`.
    pub fn map(&self, m: i32) -> CubicalMap {
        if m < self.lo {
            CubicalMap::from_empty()
        } else if m >= self.hi() {
            CubicalMap::identity(self.level(m))
        } else {
            self.maps[(m - self.lo) as usize].clone()
        }
    }

    /// `X^a → X^b` for `a ≤ b`.
    pub fn map_between(&self, a: i32, b: i32) -> CubicalMap {
        let mut f = CubicalMap::identity(self.level(a));
        for m in a..b {
            f = self.map(m).compose(self.level(m + 1), &f);
        }
        f
    }

    /// `sh^k X`, with `(sh^k X)^m = X^{m+k}`.
    pub fn shift(&self, k: i32) -> FilteredCubicalSet {
        FilteredCubicalSet { lo: self.lo - k, ..self.clone() }
    }

    /// Levelwise product.
    pub fn product(&self, other: &FilteredCubicalSet) -> FilteredCubicalSet {
        let lo = self.lo.max(other.lo);
        let hi = self.hi().max(other.hi()).max(lo);
        let prods: Vec<_> = (lo..=hi).map(|m| product(self.level(m), other.level(m))).collect();
        let maps = (lo..hi)
            .map(|m| {
                let i = (m - lo) as usize;
                let (f, g) = (self.map(m), other.map(m));
                let images = (0..prods[i].set.counts().len())
                    .map(|n| {
                        (0..prods[i].set.count(n))
                            .map(|x| {
                                let (a, b) = prods[i].components(n, x);
                                let (a, b) = (f.apply(self.level(m + 1), a), g.apply(other.level(m + 1), b));
                                prods[i + 1].pair(a, b).expect("products contain all pairs")
                            })
                            .collect()
                    })
                    .collect();
                CubicalMap::new(&prods[i].set, &prods[i + 1].set, images).expect("product of maps")
            })
            .collect();
        FilteredCubicalSet::new(lo, prods.into_iter().map(|p| p.set).collect(), maps).expect("levelwise product")
    }

    pub(crate) fn push_cube(&self, from: i32, to: i32, mut c: Cube) -> Cube {
        for m in from.max(self.lo)..to.min(self.hi()) {
            c = self.maps[(m - self.lo) as usize].apply(self.level(m + 1), c);
        }
        c
    }
}

impl Levels for FilteredCubicalSet {
    fn level(&self, m: i32) -> &CubicalSet {
        FilteredCubicalSet::level(self, m)
    }

    fn push(&self, from: i32, to: i32, c: Cube) -> Cube {
        self.push_cube(from, to, c)
    }
}

/// Level `n` is `sk^n K` on the window `[0, dim_cap]`.
pub fn skeletal_filtration(k: &CubicalSet) -> FilteredCubicalSet {
    if k.is_empty() {
        return FilteredCubicalSet::empty();
    }
    let top = k.dim_cap();
    let levels: Vec<CubicalSet> = (0..=top).map(|n| skeleton(k, n).0).collect();
    let maps = (0..top as usize)
        .map(|n| {
            let images =
                (0..=n).map(|d| (0..levels[n].count(d)).map(|x| Cube::nondegenerate(d, x)).collect()).collect();
            CubicalMap::new(&levels[n], &levels[n + 1], images).expect("skeleta include")
        })
        .collect();
    FilteredCubicalSet::new(0, levels, maps).expect("skeletal filtration")
}

/// `F_n K`: empty below `n`, `K` from `n` on.
pub fn free_filtered(n: i32, k: &CubicalSet) -> FilteredCubicalSet {
    FilteredCubicalSet { lo: n, levels: vec![k.clone()], maps: Vec::new(), empty: CubicalSet::empty() }
}

/// A levelwise map commuting with structure maps; constant from `hi` on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilteredCubicalMap {
    lo: i32,
    maps: Vec<CubicalMap>,
}

impl FilteredCubicalMap {
    /// `maps[i]` is the map at level `lo + i`; the window must cover both windows' tops.
    pub fn new(
        src: &FilteredCubicalSet,
        dst: &FilteredCubicalSet,
        lo: i32,
        maps: Vec<CubicalMap>,
    ) -> Result<FilteredCubicalMap> {
        let hi = lo + maps.len() as i32 - 1;
        if maps.is_empty() || lo > src.lo() || hi < src.hi().max(dst.hi()) {
            return Err(Error::input("filtered map window must cover the source window and both tops"));
        }
        for (i, f) in maps.iter().enumerate() {
            let m = lo + i as i32;
            CubicalMap::new(src.level(m), dst.level(m), f.images().to_vec())
                .map_err(|e| Error::input(format!("filtered map at level {m}: {e}")))?;
        }
        let f = FilteredCubicalMap { lo, maps };
        for m in lo..=hi {
            let a = f.at(m + 1).compose(dst.level(m + 1), &src.map(m));
            let b = dst.map(m).compose(dst.level(m + 1), &f.at(m));
            if a != b {
                return Err(Error::input(format!("filtered map does not commute with structure maps at level {m}")));
            }
        }
        Ok(f)
    }

    pub fn at(&self, m: i32) -> CubicalMap {
        if m < self.lo {
            CubicalMap::from_empty()
        } else {
            self.maps[((m - self.lo) as usize).min(self.maps.len() - 1)].clone()
        }
    }

    pub fn identity(x: &FilteredCubicalSet) -> FilteredCubicalMap {
        FilteredCubicalMap { lo: x.lo(), maps: (x.lo()..=x.hi()).map(|m| CubicalMap::identity(x.level(m))).collect() }
    }

    /// Levelwise composite `self ∘ inner`.
    pub fn compose(&self, dst: &FilteredCubicalSet, inner: &FilteredCubicalMap) -> FilteredCubicalMap {
        let lo = self.lo.min(inner.lo);
        let hi = (self.lo + self.maps.len() as i32).max(inner.lo + inner.maps.len() as i32) - 1;
        FilteredCubicalMap { lo, maps: (lo..=hi).map(|m| self.at(m).compose(dst.level(m), &inner.at(m))).collect() }
    }
}

/// `τ: X → sh X`.
pub fn tau(x: &FilteredCubicalSet) -> FilteredCubicalMap {
    FilteredCubicalMap { lo: x.lo(), maps: (x.lo()..=x.hi()).map(|m| x.map(m)).collect() }
}

/// All filtered maps `a → x`, built level by level.
pub fn enumerate_filtered_maps(
    a: &FilteredCubicalSet,
    x: &FilteredCubicalSet,
    budget: &mut Budget,
) -> Result<Vec<FilteredCubicalMap>> {
    let (lo, hi) = (a.lo(), a.hi().max(x.hi()));
    let mut partial: Vec<Vec<CubicalMap>> = vec![Vec::new()];
    for m in lo..=hi {
        let src = a.level(m);
        let cands = enumerate_maps(src, x.level(m), src.dim_cap().max(0) as usize, budget)?;
        let mut next = Vec::new();
        for p in &partial {
            for g in &cands {
                if let Some(prev) = p.last() {
                    budget.spend(1)?;
                    let lhs = g.compose(x.level(m), &a.map(m - 1));
                    let rhs = x.map(m - 1).compose(x.level(m), prev);
                    if lhs != rhs {
                        continue;
                    }
                }
                let mut q = p.clone();
                q.push(g.clone());
                next.push(q);
            }
        }
        partial = next;
    }
    Ok(partial.into_iter().map(|maps| FilteredCubicalMap { lo, maps }).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubical::standard_cube;

    #[test]
    fn skeletal_filtration_of_the_square() {
        let x = skeletal_filtration(&standard_cube(2));
        assert_eq!((x.lo(), x.hi()), (0, 2));
        assert_eq!(x.level(0).counts(), vec![4]);
        assert_eq!(x.level(1).counts(), vec![4, 4]);
        assert_eq!(x.level(7).counts(), vec![4, 4, 1]);
        assert!(x.level(-1).is_empty());
        let p = skeletal_filtration(&CubicalSet::point());
        assert_eq!(p.level(5).counts(), vec![1]);
    }

    #[test]
    fn free_objects() {
        let f = free_filtered(2, &standard_cube(1));
        assert!(f.level(1).is_empty());
        assert_eq!(f.level(2), &standard_cube(1));
        assert_eq!(f.level(9), &standard_cube(1));
    }

    #[test]
    fn shifts() {
        let x = skeletal_filtration(&standard_cube(2));
        assert_eq!(x.shift(0), x);
        assert_eq!(x.shift(1).shift(-1), x);
        for m in -2..4 {
            assert_eq!(x.shift(1).level(m), x.level(m + 1));
        }
        let t = tau(&x);
        FilteredCubicalMap::new(&x, &x.shift(1), x.lo(), (x.lo()..=x.hi()).map(|m| t.at(m)).collect()).unwrap();
    }

    #[test]
    fn rejects_noncommuting_maps() {
        let x = skeletal_filtration(&standard_cube(1));
        // collapse level 0 onto one vertex but keep level 1 as the identity
        let v0 = Cube::nondegenerate(0, 0);
        let bad0 = CubicalMap::new(x.level(0), x.level(0), vec![vec![v0, v0]]).unwrap();
        let maps = vec![bad0, CubicalMap::identity(x.level(1))];
        assert!(FilteredCubicalMap::new(&x, &x, 0, maps).is_err());
    }
}
