use super::module::{GradedModule, ModuleMap, ReesModule};
use crate::linalg::{kernel_basis, Group, Hom, Mat};
use crate::{Error, Result};

/// Homomorphisms between diagrams of f.g. abelian groups: families
/// `F^i: src[i] → dst[i]` with `φ_dst F^i = F^j φ_src` along each arrow `i → j`.
#[derive(Clone, Debug)]
pub struct FamilyHom {
    pub group: Group,
    shapes: Vec<(usize, usize, usize)>,
}

pub struct Arrow {
    pub from: usize,
    pub to: usize,
    pub src: Hom,
    pub dst: Hom,
}

impl FamilyHom {
    pub fn new(src: &[Group], dst: &[Group], arrows: &[Arrow]) -> FamilyHom {
        let mut shapes = Vec::new();
        let mut n = 0;
        for (a, b) in src.iter().zip(dst) {
            shapes.push((n, b.ngens(), a.ngens()));
            n += a.ngens() * b.ngens();
        }
        let var = |i: usize, r: usize, c: usize| shapes[i].0 + r * shapes[i].2 + c;
        let mut rows: Vec<(Vec<i64>, i64)> = Vec::new();
        for (i, (a, b)) in src.iter().zip(dst).enumerate() {
            for (c, &ac) in a.orders().iter().enumerate() {
                if ac == 0 {
                    continue;
                }
                for (r, &br) in b.orders().iter().enumerate() {
                    let mut v = vec![0; n];
                    v[var(i, r, c)] = ac;
                    rows.push((v, br));
                }
            }
        }
        for ar in arrows {
            let (i, j) = (ar.from, ar.to);
            for (r, &br) in dst[j].orders().iter().enumerate() {
                for c in 0..src[i].ngens() {
                    let mut v = vec![0; n];
                    for k in 0..dst[i].ngens() {
                        v[var(i, k, c)] += ar.dst.mat[(r, k)];
                    }
                    for k in 0..src[j].ngens() {
                        v[var(j, r, k)] -= ar.src.mat[(k, c)];
                    }
                    rows.push((v, br));
                }
            }
        }
        // Σ coeff · F + modulus · slack = 0
        let ncons = rows.len();
        let mut sys = Mat::zeros(ncons, n + ncons);
        for (ri, (v, m)) in rows.iter().enumerate() {
            for (c, &x) in v.iter().enumerate() {
                sys[(ri, c)] = x;
            }
            sys[(ri, n + ri)] = *m;
        }
        let z = if ncons == 0 {
            Mat::identity(n)
        } else {
            let k = kernel_basis(&sys);
            k.block(0, 0, n, k.cols())
        };
        let mut rel = Vec::new();
        for (i, b) in dst.iter().enumerate() {
            for (r, &br) in b.orders().iter().enumerate() {
                if br == 0 {
                    continue;
                }
                for c in 0..src[i].ngens() {
                    let mut v = vec![0; n];
                    v[var(i, r, c)] = br;
                    rel.push(v);
                }
            }
        }
        let group = Group::subquotient(n, &z, &Mat::from_cols(n, &rel));
        FamilyHom { group, shapes }
    }

    /// The `i`-th member of a family given as a flattened vector.
    pub fn member(&self, v: &[i64], i: usize) -> Mat {
        let (off, r, c) = self.shapes[i];
        Mat::from_rows(r, c, v[off..off + r * c].to_vec())
    }

    /// `F ↦ (G^i F^i)` into another family hom group.
    pub fn post_compose(&self, other: &FamilyHom, g: &[Hom]) -> Hom {
        Hom::from_fn(&self.group, &other.group, |v| {
            let mut out = Vec::new();
            for (i, gi) in g.iter().enumerate() {
                out.extend(gi.mat.mul(&self.member(v, i)).to_nested().into_iter().flatten());
            }
            out
        })
        .expect("post-composition preserves compatible families")
    }
}

/// `[M, N]† = im(τ_*)` for Rees modules, with the hom groups on each side.
#[derive(Clone, Debug)]
pub struct SemisyntheticHom {
    pub group: Group,
    pub tau: Hom,
    pub lower: FamilyHom,
    pub upper: FamilyHom,
    levels: Vec<i32>,
}

fn levels(depth: usize) -> Vec<i32> {
    (-(depth as i32) - 1..=1).collect()
}

/// Filtered-module maps `M → sh^n N` commuting with structure and action maps.
fn filtered_module_homs(m: &ReesModule, n: &ReesModule, shift: i32, lv: &[i32]) -> FamilyHom {
    let src: Vec<Group> = lv.iter().map(|&l| m.level(l).clone()).collect();
    let dst: Vec<Group> = lv.iter().map(|&l| n.level(l + shift).clone()).collect();
    let mut arrows = Vec::new();
    for i in 0..lv.len() {
        let l = lv[i];
        if i + 1 < lv.len() {
            arrows.push(Arrow { from: i, to: i + 1, src: m.structure_map(l), dst: n.structure_map(l + shift) });
        }
        if i > 0 {
            arrows.push(Arrow { from: i, to: i - 1, src: m.action_map(l), dst: n.action_map(l + shift) });
        }
    }
    FamilyHom::new(&src, &dst, &arrows)
}

pub fn semisynthetic_hom(m: &ReesModule, n: &ReesModule) -> Result<SemisyntheticHom> {
    if m.module.base != n.module.base {
        return Err(Error::input("modules over different bases"));
    }
    let lv = levels(m.depth.max(n.depth));
    let lower = filtered_module_homs(m, n, 0, &lv);
    let upper = filtered_module_homs(m, n, 1, &lv);
    let g: Vec<Hom> = lv.iter().map(|&l| n.structure_map(l)).collect();
    let tau = lower.post_compose(&upper, &g);
    Ok(SemisyntheticHom { group: tau.image(), tau, lower, upper, levels: lv })
}

/// `ν(f)_*: [P, N]† → [P, N']†`.
pub fn semisynthetic_hom_map(p: &ReesModule, f: &ModuleMap, n: &ReesModule, n2: &ReesModule) -> Result<Hom> {
    let depth = p.depth.max(n.depth).max(n2.depth);
    let (mut p, mut n, mut n2) = (p.clone(), n.clone(), n2.clone());
    for r in [&mut p, &mut n, &mut n2] {
        if r.depth < depth {
            *r = super::module::nu(&r.module, depth);
        }
    }
    let a = semisynthetic_hom(&p, &n)?;
    let b = semisynthetic_hom(&p, &n2)?;
    let g: Vec<Hom> = a.levels.iter().map(|&l| f.level_map(&n, &n2, l + 1)).collect();
    let on_upper = a.upper.post_compose(&b.upper, &g);
    Hom::from_fn(&a.group, &b.group, |v| on_upper.apply(v))
        .map_err(|_| Error::violation("induced map leaves the τ-image"))
}

/// Degree-0 graded homs `gr M → gr N` commuting with `t`.
pub fn graded_module_hom(a: &GradedModule, b: &GradedModule) -> Result<Group> {
    if a.grades.len() != b.grades.len() {
        return Err(Error::input("graded modules of different lengths"));
    }
    let arrows: Vec<Arrow> =
        (0..a.t.len()).map(|i| Arrow { from: i, to: i + 1, src: a.t[i].clone(), dst: b.t[i].clone() }).collect();
    Ok(FamilyHom::new(&a.grades, &b.grades, &arrows).group)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rees::{gr_module, nu, Base, Module, ModuleSpec};

    fn z_mod(orders: &[i64], p: i64) -> Module {
        Module::new(&Base::integers(p), &ModuleSpec { summands: orders.to_vec() }).unwrap()
    }

    #[test]
    fn endomorphisms_of_adic_tower() {
        let n = nu(&z_mod(&[0], 3), 3);
        assert_eq!(semisynthetic_hom(&n, &n).unwrap().group.orders(), &[0]);
    }

    #[test]
    fn into_zero() {
        let (a, z) = (nu(&z_mod(&[0, 4], 2), 2), nu(&z_mod(&[], 2), 2));
        assert!(semisynthetic_hom(&a, &z).unwrap().group.is_trivial());
    }

    #[test]
    fn torsion_matches_graded_side() {
        for p in [2, 3, 5] {
            let n = nu(&z_mod(&[p], p), 3);
            let s = semisynthetic_hom(&n, &n).unwrap().group;
            let g = graded_module_hom(&gr_module(&n), &gr_module(&n)).unwrap();
            assert_eq!(s.orders(), &[p]);
            assert!(s.is_isomorphic(&g));
        }
    }

    #[test]
    fn reduction_sequence_is_exact_in_the_middle() {
        // ν(ℤ) -p-> ν(ℤ) -> ν(ℤ/p), probed by ν(ℤ)
        let p = 3;
        let (z, zp) = (z_mod(&[0], p), z_mod(&[p], p));
        let (nz, nzp) = (nu(&z, 2), nu(&zp, 2));
        let times_p = ModuleMap::new(&z, &z, Mat::from_rows(1, 1, vec![p])).unwrap();
        let reduce = ModuleMap::new(&z, &zp, Mat::identity(1)).unwrap();
        let a = semisynthetic_hom_map(&nz, &times_p, &nz, &nz).unwrap();
        let b = semisynthetic_hom_map(&nz, &reduce, &nz, &nzp).unwrap();
        assert!(crate::linalg::is_exact(&a, &b));
    }
}
