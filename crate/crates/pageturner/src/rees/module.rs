use serde::{Deserialize, Serialize};

use super::ring::{Base, Ring};
use crate::linalg::{Group, Hom, Mat};
use crate::{Error, Result};

/// A finitely generated module over a supported base, as a direct sum of
/// cyclic summands: orders `d` (`ℤ/d`, with `0` for `ℤ`) over the integers,
/// lengths `e` (`R/(x^e)`) over a truncated polynomial ring.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleSpec {
    pub summands: Vec<i64>,
}

/// An `R`-module on `ℤ^ambient / relations` with the ring generators acting by matrices.
#[derive(Clone, Debug)]
pub struct Module {
    pub base: Base,
    pub ambient: usize,
    pub relations: Mat,
    /// Action of the additive basis elements of `R` (`x^i` for truncated rings).
    pub action: Vec<Mat>,
}

impl Module {
    pub fn new(base: &Base, spec: &ModuleSpec) -> Result<Module> {
        base.validate()?;
        match base.ring {
            Ring::Integers => {
                if spec.summands.iter().any(|&d| d < 0) {
                    return Err(Error::input("cyclic orders must be non-negative"));
                }
                let n = spec.summands.len();
                let rels: Vec<Vec<i64>> = spec
                    .summands
                    .iter()
                    .enumerate()
                    .filter(|(_, &d)| d != 0)
                    .map(|(i, &d)| {
                        let mut v = vec![0; n];
                        v[i] = d;
                        v
                    })
                    .collect();
                Ok(Module {
                    base: base.clone(),
                    ambient: n,
                    relations: Mat::from_cols(n, &rels),
                    action: vec![Mat::identity(n)],
                })
            }
            Ring::Truncated { degree } => {
                if spec.summands.iter().any(|&e| e < 1 || e as usize > degree) {
                    return Err(Error::input(format!("summand lengths must lie in 1..={degree}")));
                }
                let n: usize = spec.summands.iter().map(|&e| e as usize).sum();
                let mut x = Mat::zeros(n, n);
                let mut off = 0;
                for &e in &spec.summands {
                    for i in 0..e as usize - 1 {
                        x[(off + i + 1, off + i)] = 1;
                    }
                    off += e as usize;
                }
                let mut action = vec![Mat::identity(n)];
                for i in 1..degree {
                    action.push(x.mul(&action[i - 1]));
                }
                Ok(Module { base: base.clone(), ambient: n, relations: Mat::zeros(n, 0), action })
            }
        }
    }

    /// Action of a ring element given in the additive basis.
    pub fn act(&self, r: &[i64]) -> Mat {
        let mut m = Mat::zeros(self.ambient, self.ambient);
        for (c, a) in r.iter().zip(&self.action) {
            if *c != 0 {
                m = m.add(&a.scale(*c));
            }
        }
        m
    }

    pub fn generator(&self) -> Mat {
        self.act(&self.base.ideal)
    }

    pub fn as_group(&self) -> Group {
        Group::subquotient(self.ambient, &Mat::identity(self.ambient), &self.relations)
    }

    /// `I^n M` as a subgroup of `M`.
    pub fn ideal_image(&self, n: usize) -> Group {
        let g = self.generator();
        let mut p = Mat::identity(self.ambient);
        for _ in 0..n {
            p = g.mul(&p);
        }
        Group::subquotient(self.ambient, &p, &self.relations)
    }

    pub fn direct_sum(&self, other: &Module) -> Module {
        assert_eq!(self.base, other.base, "modules over different bases");
        let action = self.action.iter().zip(&other.action).map(|(a, b)| a.block_diag(b)).collect();
        Module {
            base: self.base.clone(),
            ambient: self.ambient + other.ambient,
            relations: self.relations.block_diag(&other.relations),
            action,
        }
    }
}

/// `ν(M)`: levels `I^{-m} M` on `[-depth, 0]`, `M` above, `I^depth M` below,
/// with the ideal generator acting from level `m` to level `m - 1`.
#[derive(Clone, Debug)]
pub struct ReesModule {
    pub module: Module,
    pub depth: usize,
    /// `I^n M` for `n = 0..=depth + 1`.
    pub images: Vec<Group>,
}

pub fn nu(module: &Module, depth: usize) -> ReesModule {
    ReesModule { module: module.clone(), depth, images: (0..=depth + 1).map(|n| module.ideal_image(n)).collect() }
}

impl ReesModule {
    fn index(&self, m: i32) -> usize {
        if m >= 0 {
            0
        } else {
            ((-m) as usize).min(self.depth)
        }
    }

    pub fn level(&self, m: i32) -> &Group {
        &self.images[self.index(m)]
    }

    /// Inclusion `level(m) → level(m + 1)`.
    pub fn structure_map(&self, m: i32) -> Hom {
        Hom::induced(self.level(m), self.level(m + 1), &Mat::identity(self.module.ambient)).expect("images decrease")
    }

    /// The lifted action of the ideal generator `level(m) → level(m - 1)`.
    pub fn action_map(&self, m: i32) -> Hom {
        Hom::induced(self.level(m), self.level(m - 1), &self.module.generator())
            .expect("the generator lowers the level")
    }

    /// Action squares commute with structure maps on `[lo, hi]`.
    pub fn check_action(&self, (lo, hi): (i32, i32)) -> Result<()> {
        for m in lo..=hi {
            let a = self.structure_map(m - 1).compose(&self.action_map(m));
            let b = self.action_map(m + 1).compose(&self.structure_map(m));
            if a != b {
                return Err(Error::violation(format!("action lift does not commute with structure maps at level {m}")));
            }
        }
        Ok(())
    }
}

/// A module map, as an ambient matrix commuting with the action.
#[derive(Clone, Debug)]
pub struct ModuleMap {
    pub mat: Mat,
}

impl ModuleMap {
    pub fn new(src: &Module, dst: &Module, mat: Mat) -> Result<ModuleMap> {
        if (mat.rows(), mat.cols()) != (dst.ambient, src.ambient) {
            return Err(Error::input("module map has the wrong shape"));
        }
        Hom::induced(&src.as_group(), &dst.as_group(), &mat)
            .map_err(|_| Error::input("module map does not respect relations"))?;
        for (a, b) in src.action.iter().zip(&dst.action) {
            if b.mul(&mat) != mat.mul(a) {
                return Err(Error::input("module map does not commute with the ring action"));
            }
        }
        Ok(ModuleMap { mat })
    }

    /// `ν(f)` at level `m`.
    pub fn level_map(&self, src: &ReesModule, dst: &ReesModule, m: i32) -> Hom {
        Hom::induced(src.level(m), dst.level(m), &self.mat).expect("module maps preserve ideal images")
    }
}

/// Graded module `gr^n M = I^n M / I^{n+1} M` with `t: gr^n → gr^{n+1}`.
#[derive(Clone, Debug)]
pub struct GradedModule {
    pub grades: Vec<Group>,
    pub t: Vec<Hom>,
}

pub fn gr_module(m: &ReesModule) -> GradedModule {
    let g = m.module.generator();
    let grades: Vec<Group> = (0..=m.depth)
        .map(|n| {
            let next = &m.images[n + 1];
            let b = next.cycle_basis().hcat(&m.module.relations);
            Group::subquotient(m.module.ambient, m.images[n].cycle_basis(), &b)
        })
        .collect();
    let t = (0..m.depth)
        .map(|n| Hom::induced(&grades[n], &grades[n + 1], &g).expect("the generator raises ideal degree"))
        .collect();
    GradedModule { grades, t }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rees::{gr_rees, rees_tower};

    fn z_mod(orders: &[i64], p: i64) -> Module {
        Module::new(&Base::integers(p), &ModuleSpec { summands: orders.to_vec() }).unwrap()
    }

    #[test]
    fn nu_of_integers_is_the_adic_tower() {
        let t = rees_tower(&Base::integers(3), 3).unwrap();
        let n = nu(&z_mod(&[0], 3), 3);
        for m in -5..=2 {
            assert!(n.level(m).is_isomorphic(&t.complex.homology(m, 0)));
        }
        let gens: Vec<i64> = (0..=3).map(|k| n.images[k].cycle_basis()[(0, 0)].abs()).collect();
        assert_eq!(gens, vec![1, 3, 9, 27]);
        n.check_action((-5, 2)).unwrap();
    }

    #[test]
    fn nu_of_zero() {
        let n = nu(&z_mod(&[], 2), 2);
        assert!((-4..=1).all(|m| n.level(m).is_trivial()));
    }

    #[test]
    fn nu_is_additive() {
        let (a, b) = (z_mod(&[0], 2), z_mod(&[4], 2));
        let s = nu(&a.direct_sum(&b), 3);
        let (na, nb) = (nu(&a, 3), nu(&b, 3));
        for m in -4..=1 {
            assert!(s.level(m).is_isomorphic(&na.level(m).direct_sum(nb.level(m))));
        }
    }

    #[test]
    fn gr_of_cyclic_torsion() {
        let g = gr_module(&nu(&z_mod(&[5], 5), 3));
        assert_eq!(g.grades[0].orders(), &[5]);
        assert!(g.grades[1..].iter().all(Group::is_trivial));
    }

    #[test]
    fn gr_module_of_ring_matches_gr_ring() {
        let base = Base::truncated(3).unwrap();
        let m = Module::new(&base, &ModuleSpec { summands: vec![3] }).unwrap();
        let gm = gr_module(&nu(&m, 3));
        let gr = gr_rees(&rees_tower(&base, 3).unwrap());
        for (a, b) in gm.grades.iter().zip(&gr.grades) {
            assert!(a.is_isomorphic(b));
        }
    }

    #[test]
    fn constant_tower_gr_is_grade_zero() {
        // I = (0): M at levels ≥ 0 and nothing below
        let g = gr_module(&nu(&z_mod(&[0, 3], 0), 3));
        assert_eq!(g.grades[0].orders(), &[3, 0]);
        assert!(g.grades[1..].iter().all(Group::is_trivial));
        // I = (1): constant in every direction, so gr vanishes
        let g = gr_module(&nu(&z_mod(&[0, 3], 1), 3));
        assert!(g.grades.iter().all(Group::is_trivial));
    }
}
