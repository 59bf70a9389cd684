use std::collections::BTreeMap;

use serde::Serialize;

use super::chain::{cone_inclusion, cone_projection};
use super::filtered::{gr_level, Below, FilteredComplex};
use crate::linalg::{homology_at, is_exact, kernel_basis, rank, Group, Hom, Mat};
use crate::{Error, Result};

/// `(s, t)`: filtration and degree.
pub type Bideg = (i32, i32);

/// Unrolled exact couple with `i: D^s_t → D^{s+1}_t`, `j: D^s_t → E^{s-r+1}_t`
/// and `k: E^s_t → D^{s-1}_{t-1}`, where `r` is the page.
#[derive(Clone, Debug)]
pub struct ExactCouple {
    pub r: usize,
    pub d: BTreeMap<Bideg, Group>,
    pub e: BTreeMap<Bideg, Group>,
    pub i: BTreeMap<Bideg, Hom>,
    pub j: BTreeMap<Bideg, Hom>,
    pub k: BTreeMap<Bideg, Hom>,
}

/// Filtration and degree ranges wide enough for pages up to `pages`: deriving
/// page `r` loses the outermost degree and `r` filtrations at the edges.
pub fn default_ranges(x: &FilteredComplex, pages: usize) -> ((i32, i32), (i32, i32)) {
    let r = pages as i32;
    let pad = r * (r + 1) / 2 + 2;
    let (t0, t1) = x.degree_range().unwrap_or((0, 0));
    let tr = (t0 - r - 2, t1 + r + 2);
    if x.is_empty_window() {
        return ((-pad, pad), tr);
    }
    ((x.lo() - pad, x.hi() + pad), tr)
}

impl ExactCouple {
    pub fn from_filtered(x: &FilteredComplex, (s0, s1): (i32, i32), (t0, t1): (i32, i32)) -> ExactCouple {
        let mut c = ExactCouple {
            r: 1,
            d: BTreeMap::new(),
            e: BTreeMap::new(),
            i: BTreeMap::new(),
            j: BTreeMap::new(),
            k: BTreeMap::new(),
        };
        for s in s0..=s1 {
            let g = gr_level(x, s);
            for t in t0..=t1 {
                c.d.insert((s, t), x.homology(s, t));
                c.e.insert((s, t), g.homology(t));
            }
        }
        for s in s0..=s1 {
            let (a, b) = (x.level(s - 1), x.level(s));
            let inc = cone_inclusion(a, b);
            let proj = cone_projection(a, b);
            let g = gr_level(x, s);
            for t in t0..=t1 {
                if s < s1 {
                    c.i.insert((s, t), x.homology_map(s, s + 1, t));
                }
                let j = Hom::induced(&c.d[&(s, t)], &c.e[&(s, t)], &inc.at(b, &g, t)).expect("j is a chain map");
                c.j.insert((s, t), j);
                if s > s0 && t > t0 {
                    let m = proj.matrices().get(&t).cloned().unwrap_or_else(|| Mat::zeros(a.rank(t - 1), g.rank(t)));
                    let k = Hom::induced(&c.e[&(s, t)], &c.d[&(s - 1, t - 1)], &m).expect("k is a chain map");
                    c.k.insert((s, t), k);
                }
            }
        }
        c
    }

    /// Target filtration of `j` on this page.
    pub fn j_target(&self, s: i32) -> i32 {
        s - self.r as i32 + 1
    }

    /// `d_r = j k: E^s_t → E^{s-r}_{t-1}`.
    pub fn differential(&self, (s, t): Bideg) -> Option<Hom> {
        let k = self.k.get(&(s, t))?;
        let j = self.j.get(&(s - 1, t - 1))?;
        Some(j.compose(k))
    }

    /// Derived couple: `D' = im i`, `E' = H(E, d_r)`.
    pub fn derived(&self) -> ExactCouple {
        let mut out = ExactCouple {
            r: self.r + 1,
            d: BTreeMap::new(),
            e: BTreeMap::new(),
            i: BTreeMap::new(),
            j: BTreeMap::new(),
            k: BTreeMap::new(),
        };
        let r = self.r as i32;
        for (&(s, t), i) in &self.i {
            out.d.insert((s + 1, t), i.image());
        }
        for &(s, t) in self.e.keys() {
            let (Some(din), Some(dout)) = (self.differential((s + r, t + 1)), self.differential((s, t))) else {
                continue;
            };
            out.e.insert((s, t), homology_at(&din, &dout));
        }
        for (&(s, t), i) in &self.i {
            let (Some(src), Some(dst)) = (out.d.get(&(s, t)), out.d.get(&(s + 1, t))) else { continue };
            let h = Hom::from_fn(src, dst, |v| i.mat.mul_vec(v)).expect("i restricts to images");
            out.i.insert((s, t), h);
        }
        for (&(s, t), src) in &out.d {
            // j'(i y) = [j y]
            let Some(i_prev) = self.i.get(&(s - 1, t)) else { continue };
            let Some(j_prev) = self.j.get(&(s - 1, t)) else { continue };
            let Some(dst) = out.e.get(&(self.j_target(s - 1), t)) else { continue };
            let h = Hom::from_fn(src, dst, |v| {
                let y = i_prev.preimage(v).expect("generator lies in the image of i");
                j_prev.apply(&y)
            })
            .expect("j' is well defined");
            out.j.insert((s, t), h);
        }
        for (&(s, t), src) in &out.e {
            let Some(k) = self.k.get(&(s, t)) else { continue };
            let Some(dst) = out.d.get(&(s - 1, t - 1)) else { continue };
            let h = Hom::from_fn(src, dst, |v| k.mat.mul_vec(v)).expect("k lands in the image of i");
            out.k.insert((s, t), h);
        }
        out
    }

    pub fn derive_to(&self, r: usize) -> ExactCouple {
        let mut c = self.clone();
        while c.r < r {
            c = c.derived();
        }
        c
    }

    /// Positions where one of the three triangle exactness conditions fails.
    pub fn exactness_failures(&self) -> Vec<String> {
        let mut bad = Vec::new();
        let r = self.r as i32;
        for &(s, t) in self.d.keys() {
            // at D^s_t: k in, i out
            if let (Some(k), Some(i)) = (self.k.get(&(s + 1, t + 1)), self.i.get(&(s, t))) {
                if !is_exact(k, i) {
                    bad.push(format!("D({s},{t}) between k and i"));
                }
            }
            if let (Some(i), Some(j)) = (self.i.get(&(s - 1, t)), self.j.get(&(s, t))) {
                if !is_exact(i, j) {
                    bad.push(format!("D({s},{t}) between i and j"));
                }
            }
        }
        for &(s, t) in self.e.keys() {
            if let (Some(j), Some(k)) = (self.j.get(&(s + r - 1, t)), self.k.get(&(s, t))) {
                if !is_exact(j, k) {
                    bad.push(format!("E({s},{t}) between j and k"));
                }
            }
        }
        bad
    }

    pub fn page(&self) -> Page {
        let d = self.e.keys().filter_map(|&b| Some((b, self.differential(b)?))).collect();
        Page { r: self.r, e: self.e.clone(), d, provenance: Provenance::DerivedCouple }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Provenance {
    #[serde(rename = "derived-couple")]
    DerivedCouple,
    #[serde(rename = "ZrBr-oracle")]
    ZrBrOracle,
}

/// Spectral-sequence page: groups `E_r^{s}_t` and differentials to `(s - r, t - 1)`.
#[derive(Clone, Debug)]
pub struct Page {
    pub r: usize,
    pub e: BTreeMap<Bideg, Group>,
    pub d: BTreeMap<Bideg, Hom>,
    pub provenance: Provenance,
}

impl Page {
    pub fn group(&self, b: Bideg) -> Option<&Group> {
        self.e.get(&b)
    }

    /// Checks `d∘d = 0` everywhere it is defined.
    pub fn squares_to_zero(&self) -> bool {
        let r = self.r as i32;
        self.d.iter().all(|(&(s, t), d)| match self.d.get(&(s - r, t - 1)) {
            Some(d2) => d2.compose(d).is_zero(),
            None => true,
        })
    }

    /// Homology of this page at `b`, if both differentials through it exist.
    pub fn homology(&self, (s, t): Bideg) -> Option<Group> {
        let r = self.r as i32;
        let din = self.d.get(&(s + r, t + 1))?;
        let dout = self.d.get(&(s, t))?;
        Some(homology_at(din, dout))
    }
}

/// Page `r` of the spectral sequence of `x`, via `r - 1` derivations.
pub fn page(x: &FilteredComplex, r: usize) -> Result<Page> {
    if r == 0 {
        return Err(Error::input("pages start at r = 1"));
    }
    let (sr, tr) = default_ranges(x, r);
    Ok(ExactCouple::from_filtered(x, sr, tr).derive_to(r).page())
}

/// Whether every structure map is injective in every degree.
pub fn is_levelwise_injective(x: &FilteredComplex) -> bool {
    if x.is_empty_window() {
        return true;
    }
    (x.lo()..x.hi()).all(|m| {
        let f = x.map(m);
        x.level(m).ranks().iter().all(|(&k, &n)| rank(&f.at(x.level(m), x.level(m + 1), k)) == n)
    })
}

/// Independent page computation for injective filtrations, directly as
/// `Z_r^s / (Z_{r-1}^{s-1} + d Z_{r-1}^{s+r-1})` inside the top level.
pub fn zr_br_page(x: &FilteredComplex, r: usize, (s0, s1): (i32, i32), (t0, t1): (i32, i32)) -> Result<Page> {
    if !is_levelwise_injective(x) {
        return Err(Error::input("the Z_r/B_r oracle needs levelwise injective structure maps"));
    }
    if r == 0 {
        return Err(Error::input("pages start at r = 1"));
    }
    let top = if x.is_empty_window() { 0 } else { x.hi() };
    let total = x.level(top).clone();
    // F^s_t as columns in the top level
    let f = |s: i32, t: i32| -> Mat {
        let n = total.rank(t);
        if x.is_empty_window() {
            return Mat::zeros(n, 0);
        }
        let s = s.min(top);
        if s < x.lo() && x.below() == Below::Zero {
            return Mat::zeros(n, 0);
        }
        let s = s.max(x.lo());
        x.map_between(s, top).at(x.level(s), &total, t)
    };
    // Z_q^s_t = {x in F^s : dx in F^{s-q}}
    let z = |q: i32, s: i32, t: i32| -> Mat {
        let a = f(s, t);
        let b = f(s - q, t - 1);
        let da = total.d(t).mul(&a);
        let sys = da.hcat(&b.scale(-1));
        let k = kernel_basis(&sys);
        a.mul(&k.block(0, 0, a.cols(), k.cols()))
    };
    let r = r as i32;
    let mut e = BTreeMap::new();
    for s in s0..=s1 {
        for t in t0..=t1 {
            let num = z(r, s, t);
            let bnd = total.d(t + 1).mul(&z(r - 1, s + r - 1, t + 1));
            let den = z(r - 1, s - 1, t).hcat(&bnd);
            e.insert((s, t), Group::subquotient(total.rank(t), &num, &den));
        }
    }
    Ok(Page { r: r as usize, e, d: BTreeMap::new(), provenance: Provenance::ZrBrOracle })
}

/// Bidegrees where two pages disagree on invariant factors.
pub fn page_mismatches(a: &Page, b: &Page) -> Vec<(Bideg, String, String)> {
    a.e.iter()
        .filter_map(|(k, g)| {
            let h = b.e.get(k)?;
            (!g.is_isomorphic(h)).then(|| (*k, g.to_string(), h.to_string()))
        })
        .collect()
}

/// Derived pages against the oracle for `r ≤ max_r` on the bidegrees both compute.
pub fn check_pages_against_oracle(x: &FilteredComplex, max_r: usize) -> Result<()> {
    let (sr, tr) = default_ranges(x, max_r);
    let mut c = ExactCouple::from_filtered(x, sr, tr);
    for r in 1..=max_r {
        let oracle = zr_br_page(x, r, sr, tr)?;
        let derived = c.page();
        if let (Some((t0, t1)), false) = (x.degree_range(), x.is_empty_window()) {
            let missing =
                (x.lo()..=x.hi()).flat_map(|s| (t0..=t1).map(move |t| (s, t))).find(|b| !derived.e.contains_key(b));
            if let Some(b) = missing {
                return Err(Error::violation(format!("page {r} lost bidegree {b:?} to the range edge")));
            }
        }
        if let Some((b, g, h)) = page_mismatches(&derived, &oracle).into_iter().next() {
            return Err(Error::violation(format!("page {r} at {b:?}: derived couple gives {g}, Z_r/B_r gives {h}")));
        }
        c = c.derived();
    }
    Ok(())
}

/// `π_{t,w} X = im(H_t X^{t-w} → H_t X^{t-w+1})`, on the coordinates of `H_t X^{t-w+1}`.
pub fn pi_tw(x: &FilteredComplex, t: i32, w: i32) -> Group {
    let s = t - w;
    x.homology_map(s, s + 1, t).image()
}

/// Homology at the middle of `H_{t+1}(gr^{s+1}) → H_t(gr^s) → H_{t-1}(gr^{s-1})`, `s = t - w`.
pub fn e2_homotopy_direct(x: &FilteredComplex, t: i32, w: i32) -> Group {
    let s = t - w;
    let c = ExactCouple::from_filtered(x, (s - 2, s + 1), (t - 2, t + 1));
    let din = c.differential((s + 1, t + 1)).expect("inside computed range");
    let dout = c.differential((s, t)).expect("inside computed range");
    homology_at(&din, &dout)
}

/// E₂-homotopy group, cross-checked against `π_{t,w}` of `X // τ`.
pub fn e2_homotopy(x: &FilteredComplex, t: i32, w: i32) -> Result<Group> {
    let direct = e2_homotopy_direct(x, t, w);
    let via_tau = pi_tw(&super::filtered::mod_tau(x), t, w);
    if !direct.is_isomorphic(&via_tau) {
        return Err(Error::violation(format!(
            "E2-homotopy at ({t},{w}): gr complex gives {direct}, X//τ gives {via_tau}"
        )));
    }
    Ok(direct)
}

/// `∂: H_t(gr^m) → H_{t-1}(gr^{m-1})` from the chain-level connecting map.
pub fn gr_differential(x: &FilteredComplex, m: i32, t: i32) -> Hom {
    let src = gr_level(x, m).homology(t);
    let dst = gr_level(x, m - 1).homology(t - 1);
    Hom::induced(&src, &dst, &super::filtered::gr_connecting(x, m, t)).expect("∂ maps cycles to cycles")
}

/// Checks `∂∘∂ = 0` and `∂ = d_1` on the given ranges.
pub fn check_gr_differential(x: &FilteredComplex, (s0, s1): (i32, i32), (t0, t1): (i32, i32)) -> Result<()> {
    let c = ExactCouple::from_filtered(x, (s0 - 2, s1), (t0 - 2, t1));
    for m in s0..=s1 {
        for t in t0..=t1 {
            let del = gr_differential(x, m, t);
            let d1 = c.differential((m, t)).expect("inside computed range");
            if del != d1 {
                return Err(Error::violation(format!("∂ differs from d1 at ({m},{t})")));
            }
            let del2 = gr_differential(x, m - 1, t - 1);
            if !del2.compose(&del).is_zero() {
                return Err(Error::violation(format!("∂∘∂ ≠ 0 at ({m},{t})")));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{sphere, ChainComplex, ChainMap};

    fn cone_p(p: i64) -> FilteredComplex {
        let l0 = ChainComplex::point(0);
        let l1 = ChainComplex::multiplication(0, p);
        let inc = ChainMap::new(&l0, &l1, BTreeMap::from([(0, Mat::from_rows(1, 1, vec![1]))])).unwrap();
        FilteredComplex::new(0, Below::Zero, vec![l0, l1], vec![inc]).unwrap()
    }

    #[test]
    fn late_pages_keep_permanent_classes() {
        for r in 3..=6 {
            let e = page(&cone_p(3), r).unwrap();
            assert_eq!(e.group((0, 0)).unwrap().orders(), [3], "page {r}");
        }
    }

    #[test]
    fn two_step_couple() {
        let x = cone_p(5);
        let c = ExactCouple::from_filtered(&x, (-2, 3), (-1, 2));
        assert_eq!(c.d[&(0, 0)].orders(), &[0]);
        assert_eq!(c.e[&(1, 1)].orders(), &[0]);
        // multiplication by ±5, depending on the generator chosen
        assert_eq!(c.k[&(1, 1)].mat.to_nested()[0][0].abs(), 5);
        assert!(c.exactness_failures().is_empty());
    }

    #[test]
    fn cone_p_second_page() {
        let x = cone_p(5);
        let p2 = page(&x, 2).unwrap();
        assert_eq!(p2.e[&(0, 0)].orders(), &[5]);
        assert!(p2.e[&(1, 1)].is_trivial());
        check_pages_against_oracle(&x, 4).unwrap();
    }

    #[test]
    fn pages_stabilise() {
        let x = cone_p(3);
        let a = page(&x, 4).unwrap();
        let b = page(&x, 5).unwrap();
        assert!(page_mismatches(&a, &b).is_empty());
    }

    #[test]
    fn sphere_e2() {
        let x = sphere(0, 0);
        assert_eq!(e2_homotopy(&x, 0, 0).unwrap().orders(), &[0]);
        assert_eq!(pi_tw(&x, 0, 0).orders(), &[0]);
    }

    #[test]
    fn ctau_pi() {
        let c = crate::complex::mod_tau(&sphere(0, 0));
        assert_eq!(pi_tw(&c, 0, 0).orders(), &[0]);
        assert!(pi_tw(&c, 0, 1).is_trivial());
    }

    #[test]
    fn gr_differential_is_p() {
        let x = cone_p(7);
        let d = gr_differential(&x, 1, 1);
        assert_eq!(d.mat.to_nested()[0][0].abs(), 7);
        check_gr_differential(&x, (-1, 3), (-1, 2)).unwrap();
    }
}
