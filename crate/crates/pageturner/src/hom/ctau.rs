use std::collections::BTreeMap;

use serde::Serialize;

use super::complex::HomComplex;
use super::successor::successor_hom;
use crate::complex::{gr_connecting, gr_level, mod_tau, FilteredComplex};
use crate::linalg::{homology_at, Group, Hom, Mat};
use crate::{Error, Result};

/// `H_t Hom(gr^{m+w-t} X, gr^m Y)` for one `m`.
struct Block {
    m: i32,
    a: i32,
    hom: HomComplex,
    group: Group,
}

fn sign(k: i32) -> i64 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Levels where `gr^m Y` can have homology.
fn gr_span(y: &FilteredComplex) -> (i32, i32) {
    if y.is_empty_window() {
        (0, -1)
    } else {
        (y.lo(), y.hi() + 1)
    }
}

/// `G_{t,w} = ⊕_m H_t Hom(gr^{m+w-t} X, gr^m Y)`.
fn graded_blocks(x: &FilteredComplex, y: &FilteredComplex, t: i32, w: i32) -> Vec<Block> {
    let (y0, y1) = gr_span(y);
    let (x0, x1) = gr_span(x);
    (y0..=y1)
        .filter_map(|m| {
            let a = m + w - t;
            if a < x0 || a > x1 {
                return None;
            }
            let hom = HomComplex::plain(&gr_level(x, a), &gr_level(y, m));
            let group = hom.complex.homology(t);
            Some(Block { m, a, hom, group })
        })
        .collect()
}

fn orders(blocks: &[Block]) -> Vec<i64> {
    blocks.iter().flat_map(|b| b.group.orders().to_vec()).collect()
}

/// `δ(g) = ∂_Y ∘ g - (-1)^t g ∘ ∂_X`, from `G_{t,w}` to `G_{t-1,w}`.
fn delta(x: &FilteredComplex, y: &FilteredComplex, t: i32, src: &[Block], dst: &[Block]) -> Result<Hom> {
    let dst_off: Vec<usize> = dst
        .iter()
        .scan(0, |acc, b| {
            let o = *acc;
            *acc += b.group.ngens();
            Some(o)
        })
        .collect();
    let total: usize = dst.iter().map(|b| b.group.ngens()).sum();
    let mut cols = Vec::new();
    for b in src {
        let (ga, gm) = (gr_level(x, b.a), gr_level(y, b.m));
        for gen in b.group.gens() {
            let g = b.hom.plain_blocks(t, gen);
            let g_at = |j: i32| g.get(&j).cloned().unwrap_or_else(|| Mat::zeros(gm.rank(j + t), ga.rank(j)));
            let mut col = vec![0; total];
            // ∂_Y ∘ g lands in the block with m - 1
            if let Some(i) = dst.iter().position(|d| d.m == b.m - 1) {
                let mut maps = BTreeMap::new();
                for &j in ga.ranks().keys() {
                    maps.insert(j, gr_connecting(y, b.m, j + t).mul(&g_at(j)));
                }
                add_class(&dst[i], t - 1, &maps, &mut col[dst_off[i]..])?;
            }
            // g ∘ ∂_X lands in the block with the same m
            if let Some(i) = dst.iter().position(|d| d.m == b.m) {
                let src_gr = gr_level(x, b.a + 1);
                let mut maps = BTreeMap::new();
                for &j in src_gr.ranks().keys() {
                    maps.insert(j, g_at(j - 1).mul(&gr_connecting(x, b.a + 1, j)).scale(-sign(t)));
                }
                add_class(&dst[i], t - 1, &maps, &mut col[dst_off[i]..])?;
            }
            cols.push(col);
        }
    }
    let mut h = Hom { mat: Mat::from_cols(total, &cols), src: orders(src), dst: orders(dst) };
    for j in 0..h.mat.cols() {
        for (i, &o) in h.dst.iter().enumerate() {
            if o != 0 {
                h.mat[(i, j)] = h.mat[(i, j)].rem_euclid(o);
            }
        }
    }
    Ok(h)
}

fn add_class(block: &Block, k: i32, maps: &BTreeMap<i32, Mat>, out: &mut [i64]) -> Result<()> {
    let c = block.hom.plain_coords(k, maps).ok_or_else(|| Error::violation("composite with ∂ is not a hom element"))?;
    let cls = if c.is_empty() {
        vec![0; block.group.ngens()]
    } else {
        block.group.coords(&c).map_err(|_| Error::violation("composite with ∂ is not a cycle"))?
    };
    for (o, v) in out.iter_mut().zip(cls) {
        *o += v;
    }
    Ok(())
}

/// Homology of `G_{*,w}` with the `∂` differential, at `(t, w)`.
pub fn graded_hom_homology(x: &FilteredComplex, y: &FilteredComplex, t: i32, w: i32) -> Result<Group> {
    let (above, here, below) =
        (graded_blocks(x, y, t + 1, w), graded_blocks(x, y, t, w), graded_blocks(x, y, t - 1, w));
    let din = delta(x, y, t + 1, &above, &here)?;
    let dout = delta(x, y, t, &here, &below)?;
    if !dout.compose(&din).is_zero() {
        return Err(Error::violation(format!("graded differential does not square to zero at ({t},{w})")));
    }
    Ok(homology_at(&din, &dout))
}

#[derive(Clone, Debug, Serialize)]
pub struct CtauEntry {
    pub t: i32,
    pub w: i32,
    pub successor: String,
    pub graded: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CtauReport {
    pub entries: Vec<CtauEntry>,
}

/// Compares `[Σ^{t,w} X, Y // τ]†` with the homology of the graded hom complex
/// `[gr X, gr Y]` on a window of bidegrees. A mismatch is an error.
pub fn ctau_hom_comparison(
    x: &FilteredComplex,
    y: &FilteredComplex,
    (t0, t1): (i32, i32),
    (w0, w1): (i32, i32),
) -> Result<CtauReport> {
    if !x.is_cofibrant() {
        return Err(Error::input("source must be cell-presented"));
    }
    let yt = mod_tau(y);
    let mut entries = Vec::new();
    for t in t0..=t1 {
        for w in w0..=w1 {
            let lhs = successor_hom(&x.bigraded_suspension(t, w), &yt)?.group;
            let rhs = graded_hom_homology(x, y, t, w)?;
            if !lhs.is_isomorphic(&rhs) {
                return Err(Error::violation(format!("Cτ comparison fails at ({t},{w}): {lhs} vs {rhs}")));
            }
            entries.push(CtauEntry { t, w, successor: lhs.to_string(), graded: rhs.to_string() });
        }
    }
    Ok(CtauReport { entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{sphere, Below, ChainComplex, ChainMap};

    fn cone_p(p: i64) -> FilteredComplex {
        let l0 = ChainComplex::point(0);
        let l1 = ChainComplex::multiplication(0, p);
        let inc = ChainMap::new(&l0, &l1, BTreeMap::from([(0, Mat::from_rows(1, 1, vec![1]))])).unwrap();
        FilteredComplex::new(0, Below::Zero, vec![l0, l1], vec![inc]).unwrap()
    }

    fn at(r: &CtauReport, t: i32, w: i32) -> &CtauEntry {
        r.entries.iter().find(|e| e.t == t && e.w == w).unwrap()
    }

    #[test]
    fn sphere_against_sphere() {
        let s = sphere(0, 0);
        let r = ctau_hom_comparison(&s, &s, (-1, 1), (-1, 1)).unwrap();
        assert_eq!(at(&r, 0, 0).graded, "Z");
        assert_eq!(at(&r, 1, 0).graded, "0");
    }

    #[test]
    fn into_zero() {
        let r = ctau_hom_comparison(&sphere(0, 0), &FilteredComplex::zero(), (-1, 1), (-1, 1)).unwrap();
        assert!(r.entries.iter().all(|e| e.graded == "0" && e.successor == "0"));
    }

    #[test]
    fn sphere_into_cone_p() {
        // gr^0 = Z in degree 0, gr^1 ≃ Z in degree 1, d1 = p, so E2 = Z/p at (0, 0)
        let r = ctau_hom_comparison(&sphere(0, 0), &cone_p(7), (-1, 1), (-2, 2)).unwrap();
        assert_eq!(at(&r, 0, 0).graded, "Z/7");
        assert_eq!(at(&r, 0, -1).graded, "0");
    }

    #[test]
    fn ctau_source() {
        let x = mod_tau(&sphere(0, 0));
        ctau_hom_comparison(&x, &cone_p(3).direct_sum(&sphere(1, 0)), (-2, 2), (-2, 2)).unwrap();
    }
}
