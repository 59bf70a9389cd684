use std::collections::{HashMap, HashSet};

use petgraph::unionfind::UnionFind;

use super::boxword::BoxWord;
use super::set::{Cube, CubicalMap, CubicalSet};
use crate::{Error, Result};

/// A finite diagram of cubical sets.
#[derive(Clone, Debug, Default)]
pub struct Diagram {
    pub objects: Vec<CubicalSet>,
    pub arrows: Vec<(usize, usize, CubicalMap)>,
}

/// The colimit with its legs from each object.
#[derive(Clone, Debug)]
pub struct Colimit {
    pub set: CubicalSet,
    pub legs: Vec<CubicalMap>,
}

/// Dimensionwise colimit of all cubes, degenerate ones included, with classes
/// containing a degenerate cube recognised as degenerate.
pub fn colimit(diagram: &Diagram) -> Result<Colimit> {
    let objs = &diagram.objects;
    for (a, b, f) in &diagram.arrows {
        let (src, dst) = (objs.get(*a), objs.get(*b));
        let (Some(src), Some(dst)) = (src, dst) else {
            return Err(Error::input("arrow between missing objects"));
        };
        CubicalMap::new(src, dst, f.images().to_vec())?;
    }
    let top = objs.iter().map(CubicalSet::dim_cap).max().unwrap_or(-1);
    if top < 0 {
        return Ok(Colimit { set: CubicalSet::empty(), legs: vec![CubicalMap::from_empty(); objs.len()] });
    }
    let top = top as usize;
    let mut elems: Vec<(usize, Cube)> = Vec::new();
    let mut id: HashMap<(usize, Cube), usize> = HashMap::new();
    for n in 0..=top {
        for (o, k) in objs.iter().enumerate() {
            for c in k.all_cubes(n) {
                id.insert((o, c), elems.len());
                elems.push((o, c));
            }
        }
    }
    let mut uf = UnionFind::<usize>::new(elems.len());
    for (a, b, f) in &diagram.arrows {
        for n in 0..=top {
            for c in objs[*a].all_cubes(n) {
                uf.union(id[&(*a, c)], id[&(*b, f.apply(&objs[*b], c))]);
            }
        }
    }
    let mut degenerate_rep: HashMap<usize, usize> = HashMap::new();
    let mut members: HashMap<usize, Vec<usize>> = HashMap::new();
    let mut order: Vec<usize> = Vec::new();
    for (e, &(_, c)) in elems.iter().enumerate() {
        let r = uf.find(e);
        let m = members.entry(r).or_default();
        if m.is_empty() {
            order.push(r);
        }
        m.push(e);
        if c.is_degenerate() {
            degenerate_rep.entry(r).or_insert(e);
        }
    }
    let mut gen_of: HashMap<usize, (usize, usize)> = HashMap::new();
    let mut names: Vec<Vec<String>> = vec![Vec::new(); top + 1];
    let mut used_names = HashSet::new();
    let mut reps: Vec<Vec<usize>> = vec![Vec::new(); top + 1];
    for &r in &order {
        if degenerate_rep.contains_key(&r) {
            continue;
        }
        let e = members[&r][0];
        let (o, c) = elems[e];
        let n = c.dim as usize;
        let mut name = objs[o].name(c).to_string();
        while !used_names.insert(name.clone()) {
            name.push('\'');
        }
        gen_of.insert(r, (n, names[n].len()));
        names[n].push(name);
        reps[n].push(e);
    }
    // normal forms, memoised per class
    let mut normal: HashMap<usize, Cube> = HashMap::new();
    fn normal_form(
        e: usize,
        elems: &[(usize, Cube)],
        id: &HashMap<(usize, Cube), usize>,
        uf: &UnionFind<usize>,
        gen_of: &HashMap<usize, (usize, usize)>,
        degenerate_rep: &HashMap<usize, usize>,
        memo: &mut HashMap<usize, Cube>,
    ) -> Cube {
        let r = uf.find(e);
        if let Some(&c) = memo.get(&r) {
            return c;
        }
        let out = if let Some(&(n, g)) = gen_of.get(&r) {
            Cube::nondegenerate(n, g)
        } else {
            let (o, c) = elems[degenerate_rep[&r]];
            let y = Cube::nondegenerate(c.gen_dim(), c.gen as usize);
            let inner = normal_form(id[&(o, y)], elems, id, uf, gen_of, degenerate_rep, memo);
            // composing projections never needs face data
            CubicalSet::empty().restrict(inner, &BoxWord::projection(c.dim as usize, c.keep))
        };
        memo.insert(r, out);
        out
    }
    let mut faces: Vec<Vec<Vec<Cube>>> = vec![Vec::new(); top + 1];
    for n in 1..=top {
        for &e in &reps[n] {
            let (o, c) = elems[e];
            let mut fs = Vec::with_capacity(2 * n);
            for i in 0..n {
                for eps in 0..2 {
                    let f = objs[o].face(n, c.gen as usize, i, eps);
                    fs.push(normal_form(id[&(o, f)], &elems, &id, &uf, &gen_of, &degenerate_rep, &mut normal));
                }
            }
            faces[n].push(fs);
        }
    }
    let set = CubicalSet::new(names, faces)?;
    let legs = objs
        .iter()
        .enumerate()
        .map(|(o, k)| {
            let images = (0..k.counts().len())
                .map(|n| {
                    (0..k.count(n))
                        .map(|x| {
                            let e = id[&(o, Cube::nondegenerate(n, x))];
                            normal_form(e, &elems, &id, &uf, &gen_of, &degenerate_rep, &mut normal)
                        })
                        .collect()
                })
                .collect();
            CubicalMap::new(k, &set, images)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Colimit { set, legs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubical::{box_product, skeleton, standard_cube, Budget};

    fn vertex_map(k: &CubicalSet, l: &CubicalSet, name: &str) -> CubicalMap {
        CubicalMap::new(k, l, vec![vec![l.find(name).unwrap()]]).unwrap()
    }

    #[test]
    fn pushout_of_edges() {
        let (pt, e) = (CubicalSet::point(), standard_cube(1));
        let d = Diagram {
            objects: vec![pt.clone(), e.clone(), e.clone()],
            arrows: vec![(0, 1, vertex_map(&pt, &e, "1")), (0, 2, vertex_map(&pt, &e, "0"))],
        };
        let c = colimit(&d).unwrap();
        assert_eq!(c.set.counts(), vec![3, 2]);
    }

    #[test]
    fn coproduct_of_points() {
        let d = Diagram { objects: vec![CubicalSet::point(); 4], arrows: vec![] };
        assert_eq!(colimit(&d).unwrap().set.counts(), vec![4]);
    }

    #[test]
    fn collapsing_an_edge_makes_it_degenerate() {
        // glue both ends of an edge to a point, and the edge to a degenerate edge of the point
        let (pt, e) = (CubicalSet::point(), standard_cube(1));
        let collapse = CubicalMap::to_point(&e);
        let d = Diagram { objects: vec![e.clone(), pt.clone()], arrows: vec![(0, 1, collapse)] };
        let c = colimit(&d).unwrap();
        assert_eq!(c.set.counts(), vec![1]);
        assert!(c.legs[0].image(1, 0).is_degenerate());
    }

    #[test]
    fn skeleta_of_products_are_unions() {
        // ⋃_{p+q=1} sk^p □¹ ⊠ sk^q □¹ is the boundary of □²
        let i = standard_cube(1);
        let (s0, inc) = skeleton(&i, 0);
        let a = box_product(&s0, &s0);
        let b = box_product(&i, &s0);
        let c = box_product(&s0, &i);
        let id_s0 = CubicalMap::identity(&s0);
        let f = crate::cubical::box_map(&a, &b, (&i, &inc), (&s0, &id_s0));
        let g = crate::cubical::box_map(&a, &c, (&s0, &id_s0), (&i, &inc));
        let d =
            Diagram { objects: vec![a.set.clone(), b.set.clone(), c.set.clone()], arrows: vec![(0, 1, f), (0, 2, g)] };
        let u = colimit(&d).unwrap();
        let (bd, _) = crate::cubical::boundary(2).unwrap();
        assert!(crate::cubical::is_isomorphic(&u.set, &bd, &mut Budget::new(100_000)).unwrap());
    }
}
