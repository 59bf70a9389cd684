use petgraph::unionfind::UnionFind;

use super::boxword::BoxWord;
use super::set::{open_box, standard_cube, standard_faces, Cube, CubicalMap, CubicalSet};
use crate::{Error, Result};

pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Counts candidate assignments tried by the backtracking searches.
#[derive(Clone, Debug)]
pub struct Budget {
    limit: u64,
    used: u64,
}

impl Budget {
    pub fn new(limit: u64) -> Budget {
        Budget { limit, used: 0 }
    }

    /// Reads `PAGETURNER_BUDGET`, falling back to `10^7`.
    pub fn from_env() -> Budget {
        let limit =
            std::env::var("PAGETURNER_BUDGET").ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_BUDGET);
        Budget::new(limit)
    }

    pub fn spend(&mut self, n: u64) -> Result<()> {
        self.used += n;
        if self.used > self.limit {
            return Err(Error::Budget { limit: self.limit });
        }
        Ok(())
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn used(&self) -> u64 {
        self.used
    }
}

/// Targets of a generator-by-generator search: generators of dimension `m`
/// land in `level(m)`, and `push(d, m, c)` moves a cube from level `d` to `m`.
pub trait Levels {
    fn level(&self, m: i32) -> &CubicalSet;
    fn push(&self, from: i32, to: i32, c: Cube) -> Cube;
}

/// A plain cubical set seen as the constant target.
pub struct Constant<'a>(pub &'a CubicalSet);

impl Levels for Constant<'_> {
    fn level(&self, _: i32) -> &CubicalSet {
        self.0
    }

    fn push(&self, _: i32, _: i32, c: Cube) -> Cube {
        c
    }
}

/// Assignments `x ↦ g(x) ∈ level(dim x)` for every generator of `k`, such that
/// each face of `g(x)` is the pushed-forward image of the corresponding face of `x`.
/// With a constant target these are exactly the cubical maps `k → L`; in general
/// they are the filtered maps `sk k → X`.
pub fn enumerate_assignments<L: Levels>(
    k: &CubicalSet,
    target: &L,
    injective: bool,
    budget: &mut Budget,
) -> Result<Vec<Vec<Vec<Cube>>>> {
    if k.is_empty() {
        return Ok(vec![Vec::new()]);
    }
    let gens = face_first_order(k);
    let mut cur: Vec<Vec<Cube>> =
        (0..=k.dim_cap() as usize).map(|n| vec![Cube::nondegenerate(n, 0); k.count(n)]).collect();
    let mut out = Vec::new();
    let mut used = std::collections::HashSet::new();
    search(k, target, injective, &gens, 0, &mut cur, &mut used, &mut out, budget)?;
    // lexicographic in (dimension, generator), the order of a dimension-major search
    out.sort();
    Ok(out)
}

/// Generators in post-order of their faces, so each one is tried as soon as its boundary is fixed.
fn face_first_order(k: &CubicalSet) -> Vec<(usize, usize)> {
    let mut seen: Vec<Vec<bool>> = k.counts().iter().map(|&c| vec![false; c]).collect();
    let mut order = Vec::new();
    fn visit(k: &CubicalSet, n: usize, x: usize, seen: &mut Vec<Vec<bool>>, order: &mut Vec<(usize, usize)>) {
        if seen[n][x] {
            return;
        }
        seen[n][x] = true;
        if n > 0 {
            for f in k.raw_faces(n, x) {
                visit(k, f.gen_dim(), f.gen as usize, seen, order);
            }
        }
        order.push((n, x));
    }
    let mut gens: Vec<(usize, usize)> = k.gens().collect();
    gens.sort_by_key(|&(n, x)| (std::cmp::Reverse(n), x));
    for (n, x) in gens {
        visit(k, n, x, &mut seen, &mut order);
    }
    order
}

fn ext<L: Levels>(target: &L, cur: &[Vec<Cube>], c: Cube, m: usize) -> Cube {
    let d = c.gen_dim();
    let pushed = target.push(d as i32, m as i32, cur[d][c.gen as usize]);
    if c.is_degenerate() {
        target.level(m as i32).restrict(pushed, &BoxWord::projection(c.dim as usize, c.keep))
    } else {
        pushed
    }
}

#[allow(clippy::too_many_arguments)]
fn search<L: Levels>(
    k: &CubicalSet,
    target: &L,
    injective: bool,
    gens: &[(usize, usize)],
    pos: usize,
    cur: &mut Vec<Vec<Cube>>,
    used: &mut std::collections::HashSet<Cube>,
    out: &mut Vec<Vec<Vec<Cube>>>,
    budget: &mut Budget,
) -> Result<()> {
    let Some(&(n, x)) = gens.get(pos) else {
        out.push(cur.clone());
        return Ok(());
    };
    let lvl = target.level(n as i32);
    let required: Vec<Cube> = if n == 0 {
        Vec::new()
    } else {
        k.raw_faces(n, x).iter().map(|&f| target.push(n as i32 - 1, n as i32, ext(target, cur, f, n - 1))).collect()
    };
    let candidates =
        if injective { (0..lvl.count(n)).map(|g| Cube::nondegenerate(n, g)).collect() } else { lvl.all_cubes(n) };
    for c in candidates {
        budget.spend(1)?;
        if injective && used.contains(&c) {
            continue;
        }
        let ok =
            (0..n).all(|i| (0..2).all(|e| lvl.restrict(c, &BoxWord::face(n, i, e)) == required[2 * i + e as usize]));
        if !ok {
            continue;
        }
        cur[n][x] = c;
        if injective {
            used.insert(c);
        }
        search(k, target, injective, gens, pos + 1, cur, used, out, budget)?;
        used.remove(&c);
    }
    Ok(())
}

/// All cubical maps `k → l`, in a deterministic order.
pub fn enumerate_maps(
    k: &CubicalSet,
    l: &CubicalSet,
    dim_limit: usize,
    budget: &mut Budget,
) -> Result<Vec<CubicalMap>> {
    if k.dim_cap() > dim_limit as i32 {
        return Err(Error::input(format!("source has cubes of dimension {} above the limit {dim_limit}", k.dim_cap())));
    }
    let all = enumerate_assignments(k, &Constant(l), false, budget)?;
    Ok(all.into_iter().map(CubicalMap::from_images_unchecked).collect())
}

/// An isomorphism `k → l` if one exists.
pub fn find_isomorphism(k: &CubicalSet, l: &CubicalSet, budget: &mut Budget) -> Result<Option<CubicalMap>> {
    if k.counts() != l.counts() {
        return Ok(None);
    }
    let gens: Vec<(usize, usize)> = k.gens().collect();
    let mut cur: Vec<Vec<Cube>> = vec![Vec::new(); k.counts().len()];
    let mut out = Vec::new();
    let mut used = std::collections::HashSet::new();
    first_iso(k, l, &gens, 0, &mut cur, &mut used, &mut out, budget)?;
    Ok(out.pop().map(CubicalMap::from_images_unchecked))
}

#[allow(clippy::too_many_arguments)]
fn first_iso(
    k: &CubicalSet,
    l: &CubicalSet,
    gens: &[(usize, usize)],
    pos: usize,
    cur: &mut Vec<Vec<Cube>>,
    used: &mut std::collections::HashSet<Cube>,
    out: &mut Vec<Vec<Vec<Cube>>>,
    budget: &mut Budget,
) -> Result<bool> {
    let Some(&(n, x)) = gens.get(pos) else {
        out.push(cur.clone());
        return Ok(true);
    };
    let t = Constant(l);
    for g in 0..l.count(n) {
        budget.spend(1)?;
        let c = Cube::nondegenerate(n, g);
        if used.contains(&c) {
            continue;
        }
        let ok = (0..n)
            .all(|i| (0..2).all(|e| l.restrict(c, &BoxWord::face(n, i, e)) == ext(&t, cur, k.face(n, x, i, e), n - 1)));
        if !ok {
            continue;
        }
        cur[n].push(c);
        used.insert(c);
        if first_iso(k, l, gens, pos + 1, cur, used, out, budget)? {
            return Ok(true);
        }
        cur[n].pop();
        used.remove(&c);
    }
    Ok(false)
}

pub fn is_isomorphic(k: &CubicalSet, l: &CubicalSet, budget: &mut Budget) -> Result<bool> {
    Ok(find_isomorphism(k, l, budget)?.is_some())
}

/// Connected components as sorted lists of vertex names, sorted by first vertex index.
pub fn pi0(k: &CubicalSet) -> Vec<Vec<String>> {
    let labels = component_labels(k);
    let mut comps: Vec<Vec<usize>> = Vec::new();
    let mut root_of = std::collections::BTreeMap::new();
    for (v, &r) in labels.iter().enumerate() {
        let i = *root_of.entry(r).or_insert_with(|| {
            comps.push(Vec::new());
            comps.len() - 1
        });
        comps[i].push(v);
    }
    comps.into_iter().map(|c| c.into_iter().map(|v| k.names(0)[v].clone()).collect()).collect()
}

/// A component label for each vertex.
pub fn component_labels(k: &CubicalSet) -> Vec<usize> {
    let mut uf = UnionFind::<usize>::new(k.count(0));
    for e in 0..k.count(1) {
        let (a, b) = (k.face(1, e, 0, 0), k.face(1, e, 0, 1));
        uf.union(a.gen as usize, b.gen as usize);
    }
    (0..k.count(0)).map(|v| uf.find(v)).collect()
}

/// An open box in `K` with no filler.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct UnfilledBox {
    pub n: usize,
    pub axis: usize,
    pub side: u8,
    /// Name of the image of each face of the box, as `(face, word, target)`.
    pub faces: Vec<(String, String, String)>,
}

#[derive(Clone, Debug, Default, serde::Serialize)]
pub struct KanReport {
    pub boxes_checked: usize,
    pub unfilled: Vec<UnfilledBox>,
}

impl KanReport {
    pub fn is_kan(&self) -> bool {
        self.unfilled.is_empty()
    }
}

/// Looks for a filler of every open box `⊓^n_{k,ε} → K` with `1 ≤ n ≤ dim_limit`.
pub fn check_kan(k: &CubicalSet, dim_limit: usize, budget: &mut Budget) -> Result<KanReport> {
    let mut report = KanReport::default();
    for n in 1..=dim_limit {
        let words = standard_faces(n);
        let cube = standard_cube(n);
        let cands = k.all_cubes(n);
        for axis in 1..=n {
            for side in 0..2u8 {
                let (ob, inc) = open_box(n, axis, side)?;
                let boxes = enumerate_maps(&ob, k, n, budget)?;
                for b in &boxes {
                    report.boxes_checked += 1;
                    let mut filled = false;
                    for &c in &cands {
                        budget.spend(1)?;
                        let fits = ob.gens().all(|(d, x)| {
                            let w = &words[word_index(&cube, inc.image(d, x))];
                            k.restrict(c, w) == b.image(d, x)
                        });
                        if fits {
                            filled = true;
                            break;
                        }
                    }
                    if !filled {
                        let faces = ob
                            .gens()
                            .filter(|&(d, _)| d + 1 == n)
                            .map(|(d, x)| {
                                let im = b.image(d, x);
                                (
                                    ob.names(d)[x].clone(),
                                    super::boxword::degeneracy_word(im.dim as usize, im.keep),
                                    k.name(im).to_string(),
                                )
                            })
                            .collect();
                        report.unfilled.push(UnfilledBox { n, axis, side, faces });
                    }
                }
            }
        }
    }
    Ok(report)
}

/// Position of a standard-cube generator in `standard_faces` order.
fn word_index(cube: &CubicalSet, c: Cube) -> usize {
    (0..c.gen_dim()).map(|d| cube.count(d)).sum::<usize>() + c.gen as usize
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubical::{boundary, box_product};

    fn budget() -> Budget {
        Budget::new(DEFAULT_BUDGET)
    }

    #[test]
    fn small_hom_sets() {
        let (pt, i1) = (CubicalSet::point(), standard_cube(1));
        let sq = standard_cube(2);
        assert_eq!(enumerate_maps(&pt, &sq, 0, &mut budget()).unwrap().len(), 4);
        assert_eq!(enumerate_maps(&i1, &pt, 1, &mut budget()).unwrap().len(), 1);
        let (b1, _) = boundary(1).unwrap();
        assert_eq!(enumerate_maps(&b1, &i1, 1, &mut budget()).unwrap().len(), 4);
        // edges of □² are its 4 edges plus 4 degenerate ones
        assert_eq!(enumerate_maps(&i1, &sq, 1, &mut budget()).unwrap().len(), 8);
        assert!(enumerate_maps(&sq, &sq, 1, &mut budget()).is_err());
    }

    #[test]
    fn budget_is_enforced() {
        let sq = standard_cube(2);
        let err = enumerate_maps(&sq, &sq, 2, &mut Budget::new(5)).unwrap_err();
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn representables_corepresent_cubes() {
        // Hom(□^n, K) = K_n
        let sq = standard_cube(2);
        for n in 0..3 {
            let maps = enumerate_maps(&standard_cube(n), &sq, n, &mut budget()).unwrap();
            assert_eq!(maps.len(), sq.all_cubes(n).len());
        }
    }

    #[test]
    fn product_of_intervals_is_the_square() {
        let p = box_product(&standard_cube(1), &standard_cube(1));
        assert!(is_isomorphic(&p.set, &standard_cube(2), &mut budget()).unwrap());
        let (b2, _) = boundary(2).unwrap();
        assert!(!is_isomorphic(&b2, &standard_cube(2), &mut budget()).unwrap());
    }

    #[test]
    fn components() {
        assert_eq!(pi0(&standard_cube(3)).len(), 1);
        let (b1, _) = boundary(1).unwrap();
        assert_eq!(pi0(&b1).len(), 2);
        assert_eq!(pi0(&b1.disjoint_union(&standard_cube(2))).len(), 3);
    }

    #[test]
    fn kan_diagnostics() {
        assert!(check_kan(&CubicalSet::point(), 3, &mut budget()).unwrap().is_kan());
        let (b2, _) = boundary(2).unwrap();
        let r = check_kan(&b2, 2, &mut budget()).unwrap();
        assert!(!r.is_kan());
        let again = check_kan(&b2, 2, &mut budget()).unwrap();
        assert_eq!(r.unfilled, again.unfilled);
        assert!(r.unfilled.iter().all(|b| b.n == 2));
    }
}
