use std::collections::BTreeMap;

use serde::Serialize;

use super::chain::{cone, ChainComplex, ChainMap};
use super::couple::pi_tw;
use super::filtered::{Below, FilteredComplex, FilteredMap};
use crate::linalg::{Hom, Mat};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightReport {
    pub w: i32,
    pub holds: bool,
    /// First `(m, degree)` where `cone(X^m → X^{m+1})` has homology in degree `≤ m + w`.
    pub certificate: Option<(i32, i32)>,
}

/// Levels whose outgoing structure map can be non-trivial.
fn checked_levels(x: &FilteredComplex) -> std::ops::RangeInclusive<i32> {
    let (a, b) = if x.is_empty_window() { (1, 0) } else { (x.lo() - 1, x.hi()) };
    a..=b
}

/// Whether each `X^m → X^{m+1}` is `(m+w)`-connected: its cone has no homology in degrees `≤ m + w`.
pub fn weight_at_least(x: &FilteredComplex, w: i32) -> WeightReport {
    for m in checked_levels(x) {
        let c = cone(&x.map(m), x.level(m), x.level(m + 1));
        let Some((lo, _)) = c.degree_range() else { continue };
        for k in lo..=m + w {
            if !c.homology(k).is_trivial() {
                return WeightReport { w, holds: false, certificate: Some((m, k)) };
            }
        }
    }
    WeightReport { w, holds: true, certificate: None }
}

/// Largest `w` in `lo..=hi` with weight `≥ w`, if any.
pub fn max_weight(x: &FilteredComplex, lo: i32, hi: i32) -> Option<i32> {
    (lo..=hi).rev().find(|&w| weight_at_least(x, w).holds)
}

/// `τ_{≥w} X` with its map to `X`.
#[derive(Clone, Debug)]
pub struct Truncation {
    pub w: i32,
    pub y: FilteredComplex,
    pub map: FilteredMap,
    pub cells_attached: usize,
}

/// Relative cell complex `a ⊂ a'` with a map `a' → b` extending `psi`.
struct Attaching {
    ranks: BTreeMap<i32, usize>,
    d: BTreeMap<i32, Mat>,
    phi: BTreeMap<i32, Mat>,
    added: usize,
}

impl Attaching {
    fn start(a: &ChainComplex, b: &ChainComplex, psi: &ChainMap) -> Attaching {
        let mut degrees: Vec<i32> = a.ranks().keys().chain(b.ranks().keys()).copied().collect();
        degrees.sort();
        degrees.dedup();
        Attaching {
            ranks: a.ranks().clone(),
            d: a.differentials().clone(),
            phi: degrees.iter().map(|&k| (k, psi.at(a, b, k))).collect(),
            added: 0,
        }
    }

    fn complex(&self) -> ChainComplex {
        ChainComplex::new(self.ranks.clone(), self.d.clone()).expect("cell attachment keeps d∘d = 0")
    }

    fn map(&self, src: &ChainComplex, b: &ChainComplex) -> ChainMap {
        let maps = self
            .phi
            .iter()
            .filter(|(&k, m)| m.cols() == src.rank(k) && m.rows() == b.rank(k))
            .map(|(&k, m)| (k, m.clone()))
            .collect();
        ChainMap::new(src, b, maps).expect("attached cells map compatibly")
    }

    /// New generator `e` in degree `k` with `de = boundary`, `phi(e) = image`.
    fn attach(&mut self, k: i32, boundary: &[i64], image: &[i64], b: &ChainComplex) {
        let n = self.ranks.get(&k).copied().unwrap_or(0);
        let below = self.ranks.get(&(k - 1)).copied().unwrap_or(0);
        let above = self.ranks.get(&(k + 1)).copied().unwrap_or(0);
        // d_k gains a column, d_{k+1} gains a zero row
        let dk = self.d.get(&k).cloned().unwrap_or_else(|| Mat::zeros(below, n));
        let col = Mat::from_cols(below, &[boundary.to_vec()]);
        self.d.insert(k, dk.hcat(&col));
        let dk1 = self.d.get(&(k + 1)).cloned().unwrap_or_else(|| Mat::zeros(n, above));
        self.d.insert(k + 1, dk1.vcat(&Mat::zeros(1, above)));
        let pk = self.phi.get(&k).cloned().unwrap_or_else(|| Mat::zeros(b.rank(k), n));
        self.phi.insert(k, pk.hcat(&Mat::from_cols(b.rank(k), &[image.to_vec()])));
        self.ranks.insert(k, n + 1);
        self.added += 1;
    }
}

/// Factors `a → b` as `a ⊂ a' → b`, attaching cells of degree `> n` until the
/// cone of `a' → b` has no homology in degrees `> n`.
fn relative_postnikov(a: &ChainComplex, b: &ChainComplex, psi: &ChainMap, n: i32) -> (ChainComplex, ChainMap, usize) {
    let mut state = Attaching::start(a, b, psi);
    let mut k = n + 1;
    loop {
        let cur = state.complex();
        let f = state.map(&cur, b);
        let c = cone(&f, &cur, b);
        let top = c.degree_range().map_or(i32::MIN, |r| r.1);
        if k > top {
            break;
        }
        let lo = c.degree_range().map_or(k, |r| r.0);
        if k < lo {
            k = lo;
            continue;
        }
        let h = c.homology(k);
        let bk = b.rank(k);
        for g in h.gens() {
            // a cycle (y, x) of the cone is killed by e with de = -x and phi(e) = y
            let y = &g[..bk];
            let x: Vec<i64> = g[bk..].iter().map(|v| -v).collect();
            state.attach(k, &x, y, b);
        }
        k += 1;
    }
    let cur = state.complex();
    let f = state.map(&cur, b);
    (cur, f, state.added)
}

/// Beilinson-style truncation by relative Postnikov factorisation, level by level.
pub fn beilinson_truncate(x: &FilteredComplex, w: i32) -> Result<Truncation> {
    if x.is_empty_window() {
        return Ok(Truncation { w, y: FilteredComplex::zero(), map: FilteredMap::zero(), cells_attached: 0 });
    }
    // start where the truncation agrees with the input
    let (start, first) = match x.below() {
        Below::Zero => (x.lo() - 1, ChainComplex::zero()),
        Below::ConstantFromLo => {
            let a = x.degree_range().map_or(x.lo(), |r| r.0);
            let l = x.lo().min(a - w);
            (l, x.level(l).clone())
        }
    };
    let mut levels = vec![first.clone()];
    let mut phis = vec![ChainMap::identity(&first)];
    let mut maps = Vec::new();
    let mut cells = 0;
    for m in start..x.hi() {
        let a = levels.last().unwrap().clone();
        let psi = x.map(m).compose(phis.last().unwrap(), &a, x.level(m), x.level(m + 1));
        let (next, phi, added) = relative_postnikov(&a, x.level(m + 1), &psi, m + w);
        cells += added;
        let inc: BTreeMap<i32, Mat> =
            a.ranks().iter().map(|(&k, &r)| (k, Mat::identity(r).vcat(&Mat::zeros(next.rank(k) - r, r)))).collect();
        maps.push(ChainMap::new(&a, &next, inc).expect("cell inclusion"));
        levels.push(next);
        phis.push(phi);
    }
    let (lo, levels, maps) = match x.below() {
        // drop the zero level sitting at lo - 1
        Below::Zero => (start + 1, levels[1..].to_vec(), maps[1..].to_vec()),
        Below::ConstantFromLo => (start, levels, maps),
    };
    let y = FilteredComplex::new(lo, x.below(), levels, maps)?;
    let map = FilteredMap::new(&y, x, start, phis)?;
    let t = Truncation { w, y, map, cells_attached: cells };
    check_truncation(x, &t)?;
    Ok(t)
}

/// Postconditions: weight `≥ w`, and `Y^m → X^m` is an isomorphism on `H_k`
/// for `k ≥ m + w` and injective on `H_{m+w-1}`.
pub fn check_truncation(x: &FilteredComplex, t: &Truncation) -> Result<()> {
    let wr = weight_at_least(&t.y, t.w);
    if !wr.holds {
        return Err(Error::violation(format!("truncation has weight below {}: {:?}", t.w, wr.certificate)));
    }
    let top_degree = [x.degree_range(), t.y.degree_range()].iter().flatten().map(|r| r.1).max().unwrap_or(0);
    let (lo, hi) = (t.y.lo().min(x.lo()) - 1, t.y.hi().max(x.hi()) + 1);
    for m in lo..=hi {
        let f = t.map.at(m);
        for k in m + t.w - 1..=top_degree + 1 {
            let h = f.homology_map(t.y.level(m), x.level(m), k);
            let ok = if k >= m + t.w { h.is_iso() } else { h.is_injective() };
            if !ok {
                return Err(Error::violation(format!("truncation map fails at level {m}, degree {k}")));
            }
        }
    }
    Ok(())
}

/// Levelwise homology agreement of two filtered complexes on a level range.
pub fn same_levelwise_homology(a: &FilteredComplex, b: &FilteredComplex, (m0, m1): (i32, i32)) -> bool {
    let degrees: Vec<i32> = [a.degree_range(), b.degree_range()].iter().flatten().flat_map(|r| [r.0, r.1]).collect();
    let (Some(&d0), Some(&d1)) = (degrees.iter().min(), degrees.iter().max()) else { return true };
    (m0..=m1).all(|m| (d0 - 1..=d1 + 1).all(|k| a.homology(m, k).is_isomorphic(&b.homology(m, k))))
}

/// Whether a filtered map is a quasi-isomorphism at every level in range.
pub fn is_levelwise_quasi_iso(f: &FilteredMap, a: &FilteredComplex, b: &FilteredComplex, (m0, m1): (i32, i32)) -> bool {
    (m0..=m1).all(|m| f.at(m).is_quasi_iso(a.level(m), b.level(m)))
}

/// `X^hi`, the colimit under the constant-above convention.
pub fn colim(x: &FilteredComplex) -> ChainComplex {
    if x.is_empty_window() {
        return ChainComplex::zero();
    }
    x.level(x.hi()).clone()
}

#[derive(Clone, Debug, Serialize)]
pub struct StabilizationReport {
    pub t: i32,
    /// `π_{t,w} → H_t(colim)` is an isomorphism for every `w ≤ threshold`.
    pub threshold: Option<i32>,
    pub colim: String,
    pub per_w: Vec<(i32, String, bool)>,
}

/// Compares `π_{t,w} X` with `H_t(colim X)` for `w` in `w0..=w1`.
pub fn stabilization_check(x: &FilteredComplex, t: i32, (w0, w1): (i32, i32)) -> StabilizationReport {
    let top = if x.is_empty_window() { 0 } else { x.hi() };
    let h = colim(x).homology(t);
    let mut per_w = Vec::new();
    for w in w0..=w1 {
        let s = t - w;
        // π_{t,w} sits inside H_t X^{s+1}; push it on to the top level
        let pi = pi_tw(x, t, w);
        let to_top = x.homology_map(s + 1, (s + 1).max(top), t);
        let iso = Hom::from_coords(&pi, &h, |_, g| Ok(to_top.apply(g))).map(|f| f.is_iso()).unwrap_or(false);
        per_w.push((w, pi.to_string(), iso));
    }
    let mut threshold = None;
    for &(w, _, ok) in &per_w {
        if ok {
            threshold = Some(w);
        } else {
            break;
        }
    }
    StabilizationReport { t, threshold, colim: h.to_string(), per_w }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::sphere;

    #[test]
    fn sphere_weight() {
        let x = sphere(2, 1);
        assert!(weight_at_least(&x, 1).holds);
        assert!(weight_at_least(&x, 0).holds);
        let r = weight_at_least(&x, 2);
        assert!(!r.holds);
        assert_eq!(r.certificate, Some((0, 2)));
    }

    #[test]
    fn constant_filtration_has_every_weight() {
        let x = FilteredComplex::constant(ChainComplex::point(3));
        for w in -5..=5 {
            assert!(weight_at_least(&x, w).holds);
        }
    }

    #[test]
    fn truncating_a_sphere_to_lower_weight_is_identity() {
        let x = sphere(1, 0);
        let t = beilinson_truncate(&x, -1).unwrap();
        assert!(is_levelwise_quasi_iso(&t.map, &t.y, &x, (-3, 3)));
    }

    #[test]
    fn truncating_a_sphere_above_its_weight_kills_it() {
        // nothing in S^{0,0} is seen in degrees ≥ m + 1 at level m
        let x = sphere(0, 0);
        let t = beilinson_truncate(&x, 1).unwrap();
        for m in -2..=3 {
            for k in -1..=2 {
                assert!(t.y.homology(m, k).is_trivial());
            }
        }
    }

    #[test]
    fn truncation_commutes_with_shift() {
        let x = sphere(1, 0).direct_sum(&sphere(2, 2));
        let a = beilinson_truncate(&x.shift(1), 1).unwrap();
        let b = beilinson_truncate(&x, 0).unwrap();
        assert!(same_levelwise_homology(&a.y, &b.y.shift(1), (-4, 4)));
    }

    #[test]
    fn constant_truncation_keeps_homology() {
        let x = FilteredComplex::constant(ChainComplex::point(2));
        let t = beilinson_truncate(&x, 0).unwrap();
        for m in -3..=4 {
            assert_eq!(t.y.homology(m, 2).orders(), &[0]);
        }
    }

    #[test]
    fn colim_of_sphere() {
        let r = stabilization_check(&sphere(1, 0), 1, (-3, 3));
        assert_eq!(r.threshold, Some(0));
    }
}
