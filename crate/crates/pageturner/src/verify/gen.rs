//! Seeded random instances for the verification suites.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::complex::{Below, ChainComplex, ChainMap, FilteredComplex, FilteredMap};
use crate::cubical::{colimit, standard_cube, Budget, Cube, CubicalMap, CubicalSet, Diagram};
use crate::filtered_cubical::{
    enumerate_filtered_maps, free_filtered, skeletal_filtration, FilteredCubicalMap, FilteredCubicalSet,
};
use crate::hom::{Cell, CellPresentation, HomComplex};
use crate::linalg::Mat;
use crate::Result;

pub type Rng64 = ChaCha8Rng;

pub fn rng(seed: u64, stream: u64) -> Rng64 {
    use rand::SeedableRng;
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// Generators of `k` reachable from `start` through faces, as keep flags.
fn face_closure(k: &CubicalSet, start: &[(usize, usize)]) -> Vec<Vec<bool>> {
    let mut keep: Vec<Vec<bool>> = k.counts().iter().map(|&c| vec![false; c]).collect();
    let mut stack = start.to_vec();
    while let Some((n, x)) = stack.pop() {
        if keep[n][x] {
            continue;
        }
        keep[n][x] = true;
        for i in 0..n {
            for e in 0..2 {
                let f = k.face(n, x, i, e);
                stack.push((f.gen_dim(), f.gen as usize));
            }
        }
    }
    keep
}

/// A random nonempty subobject of `k`.
pub fn random_sub(rng: &mut Rng64, k: &CubicalSet) -> (CubicalSet, CubicalMap) {
    let gens: Vec<(usize, usize)> = k.gens().collect();
    let mut pick: Vec<(usize, usize)> = gens.iter().copied().filter(|_| rng.gen_bool(0.4)).collect();
    if pick.is_empty() {
        pick.push(*gens.choose(rng).expect("nonempty"));
    }
    let keep = face_closure(k, &pick);
    k.sub(|n, x| keep[n][x]).expect("face-closed")
}

/// Collapses a random edge of `k` to a point, or glues two vertices; the leg is returned.
pub fn random_quotient(rng: &mut Rng64, k: &CubicalSet) -> Option<(CubicalSet, CubicalMap)> {
    let pt = CubicalSet::point();
    let d = if k.count(1) > 0 && rng.gen_bool(0.5) {
        let e = rng.gen_range(0..k.count(1));
        let i = standard_cube(1);
        let verts = i.names(0).iter().map(|s| k.face(1, e, 0, (s == "1") as u8)).collect();
        let edge = CubicalMap::new(&i, k, vec![verts, vec![Cube::nondegenerate(1, e)]]).ok()?;
        Diagram {
            objects: vec![k.clone(), i.clone(), pt.clone()],
            arrows: vec![(1, 0, edge), (1, 2, CubicalMap::to_point(&i))],
        }
    } else if k.count(0) >= 2 {
        let a = rng.gen_range(0..k.count(0));
        let b = (a + rng.gen_range(1..k.count(0))) % k.count(0);
        let at = |v: usize| CubicalMap::new(&pt, k, vec![vec![Cube::nondegenerate(0, v)]]).expect("vertex");
        let arrows = vec![(1, 0, at(a)), (1, 0, at(b))];
        Diagram { objects: vec![k.clone(), pt], arrows }
    } else {
        return None;
    };
    let c = colimit(&d).ok()?;
    Some((c.set, c.legs[0].clone()))
}

/// A random finite cubical set of dimension at most `max_dim ≤ 2`, at most six generators per dimension.
pub fn random_cubical_set(rng: &mut Rng64, max_dim: usize) -> CubicalSet {
    let n = rng.gen_range(0..=max_dim);
    let (mut k, _) = random_sub(rng, &standard_cube(n));
    if rng.gen_bool(0.3) {
        if let Some((q, _)) = random_quotient(rng, &k) {
            k = q;
        }
    }
    if rng.gen_bool(0.25) && k.count(0) < 6 {
        k = k.disjoint_union(&CubicalSet::point());
    }
    k
}

fn inclusion_between(small: &CubicalMap, big: &CubicalMap, s: &CubicalSet, b: &CubicalSet) -> CubicalMap {
    // positions of big's generators inside k
    let mut pos: BTreeMap<(usize, u32), usize> = BTreeMap::new();
    for (n, x) in b.gens() {
        pos.insert((n, big.image(n, x).gen), x);
    }
    let images = (0..s.counts().len())
        .map(|n| (0..s.count(n)).map(|x| Cube::nondegenerate(n, pos[&(n, small.image(n, x).gen)])).collect())
        .collect();
    CubicalMap::new(s, b, images).expect("nested subobjects include")
}

/// A random filtered cubical set: skeletal, free, a nested chain of subobjects, or a collapse.
pub fn random_filtered_cubical(rng: &mut Rng64, max_dim: usize) -> FilteredCubicalSet {
    let k = random_cubical_set(rng, max_dim);
    match rng.gen_range(0..4) {
        0 => skeletal_filtration(&k),
        1 => free_filtered(rng.gen_range(0..=1), &k),
        2 => {
            let (l1, i1) = random_sub(rng, &k);
            let (l0, i0) = random_sub(rng, &l1);
            let i0k = i1.compose(&k, &i0);
            let m01 = inclusion_between(&i0k, &i1, &l0, &l1);
            FilteredCubicalSet::new(0, vec![l0, l1, k.clone()], vec![m01, i1]).expect("nested chain")
        }
        _ => match random_quotient(rng, &k) {
            Some((q, leg)) => FilteredCubicalSet::new(0, vec![k, q], vec![leg]).expect("collapse"),
            None => skeletal_filtration(&k),
        },
    }
}

/// A random filtered map `x → z`, if the enumeration finds any.
pub fn random_filtered_map(
    rng: &mut Rng64,
    x: &FilteredCubicalSet,
    z: &FilteredCubicalSet,
    budget: &mut Budget,
) -> Result<Option<FilteredCubicalMap>> {
    let all = enumerate_filtered_maps(x, z, budget)?;
    Ok(all.choose(rng).cloned())
}

/// Cells of a random cell-built filtered complex: spheres and disks with
/// random attaching degrees, mixed by filtration-preserving changes of basis.
pub fn random_cells(rng: &mut Rng64, degrees: (i32, i32), births: (i32, i32), pieces: usize) -> Vec<Cell> {
    let mut t: Vec<i32> = Vec::new();
    let mut birth: Vec<i32> = Vec::new();
    let mut bd: Vec<(usize, usize, i64)> = Vec::new();
    for _ in 0..pieces {
        let d = rng.gen_range(degrees.0..=degrees.1);
        let m0 = rng.gen_range(births.0..=births.1);
        t.push(d);
        birth.push(m0);
        if d < degrees.1 && rng.gen_bool(0.6) {
            let m1 = rng.gen_range(m0..=births.1);
            let c = rng.gen_range(1..=4) * if rng.gen_bool(0.5) { 1 } else { -1 };
            t.push(d + 1);
            birth.push(m1);
            bd.push((t.len() - 2, t.len() - 1, c));
        }
    }
    let n = t.len();
    let mut dm = Mat::zeros(n, n);
    for (r, c, v) in bd {
        dm[(r, c)] = v;
    }
    for _ in 0..2 * n {
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if i == j || t[i] != t[j] || birth[i] > birth[j] {
            continue;
        }
        let c = rng.gen_range(-2..=2);
        // e_j ↦ e_j + c e_i
        dm.add_col(j, i, c);
        dm.add_row(i, j, -c);
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (birth[i], t[i], i));
    let mut new_index = vec![0; n];
    for (k, &i) in order.iter().enumerate() {
        new_index[i] = k;
    }
    order
        .iter()
        .map(|&j| Cell {
            t: t[j],
            w: t[j] - birth[j],
            attach: (0..n).filter(|&i| dm[(i, j)] != 0).map(|i| (new_index[i], dm[(i, j)])).collect(),
        })
        .collect()
}

pub fn random_cell_complex(rng: &mut Rng64) -> CellPresentation {
    let pieces = rng.gen_range(1..=4);
    CellPresentation::from_cells(random_cells(rng, (0, 2), (0, 2), pieces)).expect("random cells are consistent")
}

/// Appends a zero level, so the last structure map is not injective.
pub fn with_zero_top(x: &FilteredComplex) -> FilteredComplex {
    if x.is_empty_window() {
        return x.clone();
    }
    let mut levels: Vec<ChainComplex> = x.stored_levels().to_vec();
    let mut maps: Vec<ChainMap> = x.stored_maps().to_vec();
    levels.push(ChainComplex::zero());
    maps.push(ChainMap::zero());
    FilteredComplex::new(x.lo(), x.below(), levels, maps).expect("zero map is a chain map")
}

/// A random filtered complex; non-injective with probability `p_collapse`.
pub fn random_complex(rng: &mut Rng64, p_collapse: f64) -> FilteredComplex {
    let x = random_cell_complex(rng).complex().clone();
    if rng.gen_bool(p_collapse) {
        with_zero_top(&x)
    } else {
        x
    }
}

/// A random filtered chain map `x → y` of degree 0, from the cycles of the hom complex.
pub fn random_filtered_map_complex(rng: &mut Rng64, x: &FilteredComplex, y: &FilteredComplex) -> Result<FilteredMap> {
    let h = HomComplex::filtered(x, y, 0)?;
    let z = h.complex.cycles(0);
    if z.cols() == 0 {
        return Ok(FilteredMap::zero());
    }
    let mut c = vec![0i64; z.rows()];
    for j in 0..z.cols() {
        let a = rng.gen_range(-1..=1);
        for (ci, zi) in c.iter_mut().zip(z.col(j)) {
            *ci += a * zi;
        }
    }
    h.to_filtered_map(x, y, &c)
}

/// `X^0 = ℤ` in degree 0, `X^1 = (ℤ ←p− ℤ)`: the two-step filtration whose `E₂` is `ℤ/p`.
pub fn cone_p(p: i64) -> FilteredComplex {
    let l0 = ChainComplex::point(0);
    let l1 = ChainComplex::multiplication(0, p);
    let inc = ChainMap::new(&l0, &l1, BTreeMap::from([(0, Mat::from_rows(1, 1, vec![1]))])).expect("inclusion");
    FilteredComplex::new(0, Below::Zero, vec![l0, l1], vec![inc]).expect("cone(p)")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_deterministic() {
        let a: Vec<_> = (0..5).map(|_| random_cubical_set(&mut rng(7, 1), 2)).collect();
        let b: Vec<_> = (0..5).map(|_| random_cubical_set(&mut rng(7, 1), 2)).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn random_objects_are_small() {
        let mut r = rng(3, 0);
        for _ in 0..200 {
            let k = random_cubical_set(&mut r, 2);
            assert!(!k.is_empty() && k.counts().iter().all(|&c| c <= 6), "{:?}", k.counts());
            random_filtered_cubical(&mut r, 2);
        }
    }

    #[test]
    fn random_complexes_are_cell_built() {
        let mut r = rng(5, 0);
        for _ in 0..100 {
            let x = random_cell_complex(&mut r);
            assert!(x.complex().is_cofibrant());
        }
        assert!(!crate::complex::is_levelwise_injective(&with_zero_top(&cone_p(2))));
    }
}
