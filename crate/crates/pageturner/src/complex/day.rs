use std::collections::BTreeMap;

use super::chain::{ChainComplex, ChainMap};
use super::filtered::{Below, FilteredComplex};
use crate::linalg::{smith_normal_form, Mat};
use crate::{Error, Result};

/// One level of the convolution: the colimit of `X^p ⊗ Y^q` over `p + q ≤ n`,
/// with the quotient map from the direct sum and a section of it.
struct Level {
    nodes: Vec<(i32, i32)>,
    complex: ChainComplex,
    /// per degree: offsets of each node block in the direct sum
    offsets: BTreeMap<i32, Vec<usize>>,
    quotient: BTreeMap<i32, Mat>,
    section: BTreeMap<i32, Mat>,
}

fn tensor_map(x: &FilteredComplex, y: &FilteredComplex, (p, q): (i32, i32), (p2, q2): (i32, i32)) -> ChainMap {
    ChainMap::tensor(&x.map_between(p, p2), &y.map_between(q, q2), (x.level(p), x.level(p2)), (y.level(q), y.level(q2)))
}

fn level(x: &FilteredComplex, y: &FilteredComplex, n: i32) -> Result<Level> {
    let (a0, a1) = (x.lo(), x.hi());
    let (b0, b1) = (y.lo(), y.hi());
    let mut nodes = Vec::new();
    for p in a0..=a1 {
        for q in b0..=b1 {
            if p + q <= n {
                nodes.push((p, q));
            }
        }
    }
    let tensors: Vec<ChainComplex> = nodes.iter().map(|&(p, q)| x.level(p).tensor(y.level(q))).collect();
    let mut degrees: Vec<i32> = tensors.iter().flat_map(|t| t.ranks().keys().copied()).collect();
    degrees.sort();
    degrees.dedup();

    let mut offsets = BTreeMap::new();
    for &k in &degrees {
        let mut off = Vec::with_capacity(nodes.len());
        let mut acc = 0;
        for t in &tensors {
            off.push(acc);
            acc += t.rank(k);
        }
        off.push(acc);
        offsets.insert(k, off);
    }
    let index = |pq: (i32, i32)| nodes.iter().position(|&n| n == pq);

    let mut ranks = BTreeMap::new();
    let mut quotient = BTreeMap::new();
    let mut section = BTreeMap::new();
    for &k in &degrees {
        let off = &offsets[&k];
        let total = *off.last().unwrap();
        // relations x ~ (f ⊗ g) x along each generating arrow
        let mut rels: Vec<Vec<i64>> = Vec::new();
        for (a, &(p, q)) in nodes.iter().enumerate() {
            for next in [(p + 1, q), (p, q + 1)] {
                let Some(b) = index(next) else { continue };
                let f = tensor_map(x, y, (p, q), next).at(&tensors[a], &tensors[b], k);
                for c in 0..tensors[a].rank(k) {
                    let mut v = vec![0; total];
                    v[off[a] + c] += 1;
                    for r in 0..tensors[b].rank(k) {
                        v[off[b] + r] -= f[(r, c)];
                    }
                    rels.push(v);
                }
            }
        }
        let rel = Mat::from_cols(total, &rels);
        let s = smith_normal_form(&rel);
        if s.invariant_factors.iter().any(|&d| d != 1) {
            return Err(Error::input(format!(
                "convolution level {n} has torsion in degree {k}; inputs must have split injective structure maps"
            )));
        }
        let keep: Vec<usize> = (s.rank..total).collect();
        quotient.insert(k, s.left.select_rows(&keep));
        section.insert(k, s.left_inv.select_cols(&keep));
        ranks.insert(k, keep.len());
    }
    let mut d = BTreeMap::new();
    for &k in &degrees {
        if !offsets.contains_key(&(k - 1)) {
            continue;
        }
        let (ok, okm) = (&offsets[&k], &offsets[&(k - 1)]);
        let mut big = Mat::zeros(*okm.last().unwrap(), *ok.last().unwrap());
        for (a, t) in tensors.iter().enumerate() {
            big.set_block(okm[a], ok[a], &t.d(k));
        }
        d.insert(k, quotient[&(k - 1)].mul(&big).mul(&section[&k]));
    }
    let complex = ChainComplex::new(ranks, d)?;
    Ok(Level { nodes, complex, offsets, quotient, section })
}

/// `(X ⊛ Y)^n = colim_{p+q ≤ n} X^p ⊗ Y^q`, computed as a coequalizer.
/// Both inputs must vanish below their windows.
pub fn day_convolution_complex(x: &FilteredComplex, y: &FilteredComplex) -> Result<FilteredComplex> {
    if x.is_empty_window() || y.is_empty_window() {
        return Ok(FilteredComplex::zero());
    }
    if x.below() != Below::Zero || y.below() != Below::Zero {
        return Err(Error::input("Day convolution needs inputs that are zero below their windows"));
    }
    let lo = x.lo() + y.lo();
    let hi = x.hi() + y.hi();
    let levels: Vec<Level> = (lo..=hi).map(|n| level(x, y, n)).collect::<Result<_>>()?;
    let mut maps = Vec::new();
    for w in levels.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        let mut m = BTreeMap::new();
        for (&k, sec) in &a.section {
            let (oa, ob) = (&a.offsets[&k], &b.offsets[&k]);
            let mut inc = Mat::zeros(*ob.last().unwrap(), *oa.last().unwrap());
            for (i, node) in a.nodes.iter().enumerate() {
                let j = b.nodes.iter().position(|n| n == node).expect("nodes grow with n");
                let size = oa[i + 1] - oa[i];
                inc.set_block(ob[j], oa[i], &Mat::identity(size));
            }
            m.insert(k, b.quotient[&k].mul(&inc).mul(sec));
        }
        maps.push(ChainMap::new(&a.complex, &b.complex, m)?);
    }
    let levels = levels.into_iter().map(|l| l.complex).collect();
    Ok(FilteredComplex::new(lo, Below::Zero, levels, maps)?.trimmed())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{sphere, weight_at_least};

    #[test]
    fn spheres_multiply() {
        let z = day_convolution_complex(&sphere(1, 0), &sphere(2, 1)).unwrap();
        let s = sphere(3, 1);
        for m in -2..=5 {
            for k in 0..=4 {
                assert!(z.homology(m, k).is_isomorphic(&s.homology(m, k)), "level {m} degree {k}");
            }
        }
    }

    #[test]
    fn unit() {
        let x = sphere(0, 0).direct_sum(&sphere(2, 1));
        let z = day_convolution_complex(&sphere(0, 0), &x).unwrap();
        for m in -2..=4 {
            for k in -1..=3 {
                assert!(z.homology(m, k).is_isomorphic(&x.homology(m, k)));
            }
        }
    }

    #[test]
    fn weights_add() {
        let a = sphere(2, 1).direct_sum(&sphere(1, 1));
        let b = sphere(0, 0).direct_sum(&sphere(3, 2));
        let z = day_convolution_complex(&a, &b).unwrap();
        assert!(weight_at_least(&z, 1).holds);
    }
}
