use std::collections::HashMap;

use super::filtered::{tau, FilteredCubicalMap, FilteredCubicalSet};
use crate::cubical::{
    enumerate_assignments, enumerate_maps, standard_cube, standard_faces, BoxWord, Budget, Cube, CubicalMap,
    CubicalSet, Levels,
};
use crate::{Error, Result};

/// `□^n` with its generators as box maps and a reverse index.
#[derive(Clone, Debug)]
pub struct StandardCube {
    pub set: CubicalSet,
    pub words: Vec<BoxWord>,
    index: HashMap<BoxWord, usize>,
}

impl StandardCube {
    pub fn new(n: usize) -> StandardCube {
        let words = standard_faces(n);
        let index = words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
        StandardCube { set: standard_cube(n), words, index }
    }

    pub fn position(&self, w: &BoxWord) -> usize {
        self.index[w]
    }

    pub fn top(&self) -> usize {
        self.words.len() - 1
    }
}

/// Shared cache of standard cubes.
#[derive(Clone, Debug, Default)]
pub struct Cubes(Vec<StandardCube>);

impl Cubes {
    pub fn get(&mut self, n: usize) -> &StandardCube {
        while self.0.len() <= n {
            let k = self.0.len();
            self.0.push(StandardCube::new(k));
        }
        &self.0[n]
    }
}

/// A component system of an `n`-cube of `X^†`: the value at each face of `□^n`,
/// listed in `standard_faces(n)` order.
pub type System = Vec<Cube>;

/// `α^* g` for a box map `α: □^k → □^n`.
pub fn act_system<L: Levels>(x: &L, cubes: &mut Cubes, g: &[Cube], n: usize, alpha: &BoxWord) -> System {
    let k = alpha.src();
    let words = cubes.get(k).words.clone();
    let big = cubes.get(n);
    words
        .iter()
        .map(|beta| {
            let m = beta.src();
            let (face, used) = alpha.compose(beta).factor();
            let c = g[big.position(&face)];
            let pushed = x.push(face.src() as i32, m as i32, c);
            if face.src() == m {
                pushed
            } else {
                x.level(m as i32).restrict(pushed, &BoxWord::projection(m, used))
            }
        })
        .collect()
}

/// `X^†` through dimension `dim_limit`, with the system behind each generator.
#[derive(Clone, Debug)]
pub struct Successor {
    pub set: CubicalSet,
    pub dim_limit: usize,
    systems: Vec<Vec<System>>,
    lookup: Vec<HashMap<System, u32>>,
}

impl Successor {
    pub fn system(&self, n: usize, x: usize) -> &System {
        &self.systems[n][x]
    }

    /// The system of an arbitrary cube.
    pub fn system_of<L: Levels>(&self, x: &L, cubes: &mut Cubes, c: Cube) -> System {
        let g = &self.systems[c.gen_dim()][c.gen as usize];
        if c.is_degenerate() {
            act_system(x, cubes, g, c.gen_dim(), &BoxWord::projection(c.dim as usize, c.keep))
        } else {
            g.clone()
        }
    }

    /// Eilenberg–Zilber normal form of a system of dimension `n`.
    pub fn normalize<L: Levels>(&self, x: &L, cubes: &mut Cubes, g: &[Cube], n: usize) -> Option<Cube> {
        let (core, keep) = strip_degeneracies(x, cubes, g, n);
        let k = keep.count_ones() as usize;
        let gen = *self.lookup.get(k)?.get(&core)?;
        Some(Cube { dim: n as u8, keep, gen })
    }
}

/// Splits off degeneracies: `g = σ^* core` with `σ` the projection onto `keep`.
fn strip_degeneracies<L: Levels>(x: &L, cubes: &mut Cubes, g: &[Cube], n: usize) -> (System, u32) {
    let mut cur = g.to_vec();
    let mut axes: Vec<usize> = (0..n).collect();
    'outer: loop {
        let d = axes.len();
        for i in 0..d {
            let f = act_system(x, cubes, &cur, d, &BoxWord::face(d, i, 0));
            if act_system(x, cubes, &f, d - 1, &BoxWord::degeneracy(d, i)) == cur {
                cur = f;
                axes.remove(i);
                continue 'outer;
            }
        }
        break;
    }
    (cur, axes.iter().fold(0, |m, &a| m | 1 << a))
}

fn is_degenerate<L: Levels>(x: &L, cubes: &mut Cubes, g: &[Cube], n: usize) -> bool {
    (0..n).any(|i| {
        let f = act_system(x, cubes, g, n, &BoxWord::face(n, i, 0));
        act_system(x, cubes, &f, n - 1, &BoxWord::degeneracy(n, i)) == g
    })
}

/// All filtered maps `sk(□^n) → X`, as systems.
pub fn systems<L: Levels>(x: &L, cubes: &mut Cubes, n: usize, budget: &mut Budget) -> Result<Vec<System>> {
    let c = cubes.get(n).set.clone();
    let all = enumerate_assignments(&c, x, false, budget)?;
    Ok(all.into_iter().map(|a| a.into_iter().flatten().collect()).collect())
}

/// `X^†`: `n`-cubes are the filtered maps `sk(□^n) → X`.
pub fn successor<L: Levels>(x: &L, dim_limit: usize, budget: &mut Budget) -> Result<Successor> {
    let mut cubes = Cubes::default();
    let mut names: Vec<Vec<String>> = Vec::new();
    let mut gens: Vec<Vec<System>> = Vec::new();
    let mut lookup: Vec<HashMap<System, u32>> = Vec::new();
    for n in 0..=dim_limit {
        let mut nm = Vec::new();
        let mut gs = Vec::new();
        let mut lk = HashMap::new();
        for g in systems(x, &mut cubes, n, budget)? {
            budget.spend(1)?;
            if n > 0 && is_degenerate(x, &mut cubes, &g, n) {
                continue;
            }
            let top = g[g.len() - 1];
            nm.push(crate::cubical::describe_cube(x.level(n as i32), top));
            lk.insert(g.clone(), gs.len() as u32);
            gs.push(g);
        }
        names.push(nm);
        gens.push(gs);
        lookup.push(lk);
    }
    crate::cubical::dedupe_names(&mut names);
    let mut s = Successor { set: CubicalSet::empty(), dim_limit, systems: gens, lookup };
    let mut faces = vec![Vec::new(); names.len()];
    for n in 1..names.len() {
        for g in &s.systems[n] {
            let mut fs = Vec::with_capacity(2 * n);
            for i in 0..n {
                for e in 0..2 {
                    let h = act_system(x, &mut cubes, g, n, &BoxWord::face(n, i, e));
                    fs.push(s.normalize(x, &mut cubes, &h, n - 1).expect("faces of systems are systems"));
                }
            }
            faces[n].push(fs);
        }
    }
    s.set = CubicalSet::new(names, faces).map_err(|e| Error::violation(format!("successor is not cubical: {e}")))?;
    Ok(s)
}

/// `f^†: X^† → Y^†`.
pub fn successor_map(
    y: &FilteredCubicalSet,
    f: &FilteredCubicalMap,
    sx: &Successor,
    sy: &Successor,
) -> Result<CubicalMap> {
    let mut cubes = Cubes::default();
    let words: Vec<Vec<BoxWord>> = (0..=sx.dim_limit).map(|n| cubes.get(n).words.clone()).collect();
    let levels: Vec<CubicalMap> = (0..=sx.dim_limit as i32).map(|m| f.at(m)).collect();
    let mut images = Vec::new();
    for (n, gs) in sx.systems.iter().enumerate() {
        let mut im = Vec::new();
        for g in gs {
            let h: System =
                g.iter().zip(&words[n]).map(|(&c, w)| levels[w.src()].apply(y.level(w.src() as i32), c)).collect();
            im.push(sy.normalize(y, &mut cubes, &h, n).ok_or_else(|| Error::violation("image system missing"))?);
        }
        images.push(im);
    }
    CubicalMap::new(&sx.set, &sy.set, images).map_err(|e| Error::violation(format!("f^† is not cubical: {e}")))
}

/// Successors of every shift, with the maps induced by `τ`.
#[derive(Clone, Debug)]
pub struct FilteredSuccessor {
    pub filtered: FilteredCubicalSet,
    pub levels: Vec<Successor>,
}

pub fn successor_filtered(x: &FilteredCubicalSet, dim_limit: usize, budget: &mut Budget) -> Result<FilteredSuccessor> {
    let (lo, hi) = (x.lo(), x.hi());
    let shifted: Vec<FilteredCubicalSet> = (lo..=hi + 1).map(|k| x.shift(k)).collect();
    let levels: Vec<Successor> =
        shifted[..shifted.len() - 1].iter().map(|s| successor(s, dim_limit, budget)).collect::<Result<_>>()?;
    let mut maps = Vec::new();
    for i in 0..levels.len().saturating_sub(1) {
        let t = tau(&shifted[i]);
        maps.push(successor_map(&shifted[i + 1], &t, &levels[i], &levels[i + 1])?);
    }
    let filtered = FilteredCubicalSet::new(lo, levels.iter().map(|s| s.set.clone()).collect(), maps)?;
    Ok(FilteredSuccessor { filtered, levels })
}

/// Transpose `sk K → X` to `K → X^†`.
pub fn transpose_to_successor(
    k: &CubicalSet,
    x: &FilteredCubicalSet,
    sx: &Successor,
    g: &[Vec<Cube>],
) -> Result<CubicalMap> {
    let mut cubes = Cubes::default();
    let mut images = Vec::new();
    for n in 0..k.counts().len() {
        let words = cubes.get(n).words.clone();
        let mut im = Vec::new();
        for xg in 0..k.count(n) {
            let sys: System = words
                .iter()
                .map(|w| {
                    let m = w.src();
                    let c = k.restrict(Cube::nondegenerate(n, xg), w);
                    let d = c.gen_dim();
                    let pushed = x.push_cube(d as i32, m as i32, g[d][c.gen as usize]);
                    if c.is_degenerate() {
                        x.level(m as i32).restrict(pushed, &BoxWord::projection(m, c.keep))
                    } else {
                        pushed
                    }
                })
                .collect();
            im.push(
                sx.normalize(x, &mut cubes, &sys, n)
                    .ok_or_else(|| Error::violation("transpose is not a successor cube"))?,
            );
        }
        images.push(im);
    }
    CubicalMap::new(k, &sx.set, images).map_err(|e| Error::violation(format!("transpose is not cubical: {e}")))
}

/// Transpose `K → X^†` to `sk K → X`: evaluate each system at the top face.
pub fn transpose_to_filtered(
    k: &CubicalSet,
    x: &FilteredCubicalSet,
    sx: &Successor,
    phi: &CubicalMap,
) -> Vec<Vec<Cube>> {
    let mut cubes = Cubes::default();
    (0..k.counts().len())
        .map(|n| {
            (0..k.count(n))
                .map(|g| {
                    let sys = sx.system_of(x, &mut cubes, phi.image(n, g));
                    sys[sys.len() - 1]
                })
                .collect()
        })
        .collect()
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct AdjunctionReport {
    pub filtered_maps: usize,
    pub plain_maps: usize,
}

/// Checks `Hom_Fil(sk K, X) ↔ Hom(K, X^†)` elementwise on enumerated hom-sets.
pub fn check_adjunction(k: &CubicalSet, x: &FilteredCubicalSet, budget: &mut Budget) -> Result<AdjunctionReport> {
    let dim = k.dim_cap().max(0) as usize;
    let sx = successor(x, dim, budget)?;
    let filtered = enumerate_assignments(k, x, false, budget)?;
    let plain = enumerate_maps(k, &sx.set, dim, budget)?;
    if filtered.len() != plain.len() {
        return Err(Error::violation(format!(
            "|Hom_Fil(sk K, X)| = {} but |Hom(K, X^†)| = {}",
            filtered.len(),
            plain.len()
        )));
    }
    let mut hit = std::collections::HashSet::new();
    for g in &filtered {
        let phi = transpose_to_successor(k, x, &sx, g)?;
        if transpose_to_filtered(k, x, &sx, &phi) != *g {
            return Err(Error::violation("transpose round trip fails on a filtered map"));
        }
        hit.insert(phi);
    }
    for phi in &plain {
        let g = transpose_to_filtered(k, x, &sx, phi);
        if !filtered.contains(&g) || transpose_to_successor(k, x, &sx, &g)? != *phi {
            return Err(Error::violation("transpose round trip fails on a map into the successor"));
        }
    }
    if hit.len() != plain.len() {
        return Err(Error::violation("transpose is not injective"));
    }
    Ok(AdjunctionReport { filtered_maps: filtered.len(), plain_maps: plain.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubical::{boundary, is_isomorphic, DEFAULT_BUDGET};
    use crate::filtered_cubical::{free_filtered, skeletal_filtration};

    fn budget() -> Budget {
        Budget::new(DEFAULT_BUDGET)
    }

    #[test]
    fn constant_successor_is_level_zero() {
        for k in [standard_cube(2), boundary(2).unwrap().0, CubicalSet::point()] {
            let s = successor(&free_filtered(0, &k), 2, &mut budget()).unwrap();
            assert!(is_isomorphic(&s.set, &crate::cubical::skeleton(&k, 2).0, &mut budget()).unwrap());
        }
    }

    #[test]
    fn vertices_are_level_zero_vertices() {
        let x = skeletal_filtration(&standard_cube(2));
        let s = successor(&x, 0, &mut budget()).unwrap();
        assert_eq!(s.set.count(0), x.level(0).count(0));
    }

    #[test]
    fn successor_of_skeletal_interval() {
        let x = skeletal_filtration(&standard_cube(1));
        let s = successor(&x, 2, &mut budget()).unwrap();
        assert!(is_isomorphic(&s.set, &standard_cube(1), &mut budget()).unwrap());
    }

    #[test]
    fn successor_levels_stabilise() {
        let x = skeletal_filtration(&standard_cube(2));
        let f = successor_filtered(&x, 2, &mut budget()).unwrap();
        assert!(is_isomorphic(f.filtered.level(2), &standard_cube(2), &mut budget()).unwrap());
        assert_eq!(f.filtered.level(0), &successor(&x, 2, &mut budget()).unwrap().set);
    }

    #[test]
    fn adjunction_examples() {
        let x = skeletal_filtration(&standard_cube(1));
        let r = check_adjunction(&CubicalSet::point(), &x, &mut budget()).unwrap();
        assert_eq!(r.filtered_maps, x.level(0).count(0));
        let (b, _) = boundary(1).unwrap();
        let r = check_adjunction(&b, &x, &mut budget()).unwrap();
        assert_eq!((r.filtered_maps, r.plain_maps), (4, 4));
        check_adjunction(&standard_cube(2), &skeletal_filtration(&standard_cube(2)), &mut budget()).unwrap();
    }

    #[test]
    fn free_adjunction() {
        // Hom_Fil(F_n K, X) = Hom(K, X^n)
        let x = skeletal_filtration(&standard_cube(2));
        let k = standard_cube(1);
        for n in 0..4 {
            let filtered =
                crate::filtered_cubical::enumerate_filtered_maps(&free_filtered(n, &k), &x, &mut budget()).unwrap();
            let plain = enumerate_maps(&k, x.level(n), 1, &mut budget()).unwrap();
            assert_eq!(filtered.len(), plain.len());
        }
    }
}
