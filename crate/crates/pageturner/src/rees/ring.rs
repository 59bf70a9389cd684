use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::complex::{Below, ChainComplex, ChainMap, FilteredComplex};
use crate::linalg::{lattice_basis, Group, Hom, Mat, Solver};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Ring {
    /// `ℤ`
    Integers,
    /// `ℤ[x]/(x^degree)`
    Truncated { degree: usize },
}

/// A ring with a principal ideal, given by its generator in the additive basis
/// `1` (for `ℤ`) or `1, x, …, x^{D-1}` (for truncated polynomials).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Base {
    pub ring: Ring,
    pub ideal: Vec<i64>,
}

impl Base {
    pub fn integers(n: i64) -> Base {
        Base { ring: Ring::Integers, ideal: vec![n] }
    }

    /// `ℤ[x]/(x^D)` with the ideal `(x)`.
    pub fn truncated(d: usize) -> Result<Base> {
        if d < 2 {
            return Err(Error::input("truncated polynomial ring needs degree at least 2"));
        }
        let mut g = vec![0; d];
        g[1] = 1;
        Ok(Base { ring: Ring::Truncated { degree: d }, ideal: g })
    }

    pub fn validate(&self) -> Result<()> {
        if self.ideal.len() != self.rank() {
            return Err(Error::input(format!("ideal generator needs {} coordinates", self.rank())));
        }
        if let Ring::Truncated { degree } = self.ring {
            if degree == 0 {
                return Err(Error::input("unsupported ring: ℤ[x]/(x^0) is zero"));
            }
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        match self.ring {
            Ring::Integers => 1,
            Ring::Truncated { degree } => degree,
        }
    }

    pub fn mul(&self, u: &[i64], v: &[i64]) -> Vec<i64> {
        let n = self.rank();
        let mut out = vec![0; n];
        for (i, &a) in u.iter().enumerate() {
            for (j, &b) in v.iter().enumerate() {
                if i + j < n {
                    out[i + j] += a * b;
                }
            }
        }
        out
    }

    /// Matrix of multiplication by `u` on the additive basis.
    pub fn mul_matrix(&self, u: &[i64]) -> Mat {
        let n = self.rank();
        let cols: Vec<Vec<i64>> = (0..n)
            .map(|j| {
                let mut e = vec![0; n];
                e[j] = 1;
                self.mul(u, &e)
            })
            .collect();
        Mat::from_cols(n, &cols)
    }

    pub fn describe(&self) -> String {
        match self.ring {
            Ring::Integers => format!("Z with ideal ({})", self.ideal[0]),
            Ring::Truncated { degree } => format!("Z[x]/(x^{degree}) with ideal generated by {:?}", self.ideal),
        }
    }
}

/// `… → I^2 → I → R → R → …` with levels `I^{-m}` on the window `[-depth, 0]`.
#[derive(Clone, Debug)]
pub struct ReesTower {
    pub base: Base,
    pub depth: usize,
    /// Bases of `I^n` inside `R` for `n = 0..=depth + 1`.
    pub lattices: Vec<Mat>,
    pub complex: FilteredComplex,
    /// `I^a ⊗ I^b → I^{a+b}` on lattice bases, rows indexed by `I^{a+b}`, columns by pairs.
    pub pairings: BTreeMap<(usize, usize), Mat>,
}

pub fn ideal_power(base: &Base, n: usize) -> Mat {
    let a = base.mul_matrix(&base.ideal);
    let mut p = Mat::identity(base.rank());
    for _ in 0..n {
        p = a.mul(&p);
    }
    lattice_basis(&p)
}

pub fn rees_tower(base: &Base, depth: usize) -> Result<ReesTower> {
    base.validate()?;
    let lattices: Vec<Mat> = (0..=depth + 1).map(|n| ideal_power(base, n)).collect();
    let lo = -(depth as i32);
    let level = |n: usize| ChainComplex::new(BTreeMap::from([(0, lattices[n].cols())]), BTreeMap::new());
    let levels: Vec<ChainComplex> = (0..=depth).rev().map(level).collect::<Result<_>>()?;
    let mut maps = Vec::new();
    for n in (1..=depth).rev() {
        // I^n ⊂ I^{n-1}
        let s = Solver::new(&lattices[n - 1]);
        let cols: Vec<Vec<i64>> =
            (0..lattices[n].cols()).map(|c| s.solve(&lattices[n].col(c)).expect("ideal powers decrease")).collect();
        let m = Mat::from_cols(lattices[n - 1].cols(), &cols);
        let (a, b) = (&levels[depth - n], &levels[depth - n + 1]);
        maps.push(ChainMap::new(a, b, BTreeMap::from([(0, m)]))?);
    }
    let complex = FilteredComplex::new(lo, Below::ConstantFromLo, levels, maps)?;
    let mut pairings = BTreeMap::new();
    for a in 0..=depth {
        for b in 0..=depth - a {
            pairings.insert((a, b), pairing(base, &lattices, a, b)?);
        }
    }
    Ok(ReesTower { base: base.clone(), depth, lattices, complex, pairings })
}

fn pairing(base: &Base, lattices: &[Mat], a: usize, b: usize) -> Result<Mat> {
    let target = &lattices[a + b];
    let s = Solver::new(target);
    let mut cols = Vec::new();
    for i in 0..lattices[a].cols() {
        for j in 0..lattices[b].cols() {
            let prod = base.mul(&lattices[a].col(i), &lattices[b].col(j));
            let c = s.solve(&prod).ok_or_else(|| Error::violation(format!("I^{a} · I^{b} leaves I^{}", a + b)))?;
            cols.push(c);
        }
    }
    Ok(Mat::from_cols(target.cols(), &cols))
}

impl ReesTower {
    /// Products land in the right level and agree with multiplication in `R`.
    pub fn check_multiplicative(&self) -> Result<usize> {
        let mut checked = 0;
        for (&(a, b), m) in &self.pairings {
            let nb = self.lattices[b].cols();
            for i in 0..self.lattices[a].cols() {
                for j in 0..nb {
                    let in_r = self.lattices[a + b].mul_vec(&m.col(i * nb + j));
                    let direct = self.base.mul(&self.lattices[a].col(i), &self.lattices[b].col(j));
                    if in_r != direct {
                        return Err(Error::violation(format!("product I^{a} · I^{b} disagrees with R")));
                    }
                    checked += 1;
                }
            }
        }
        let one = {
            let mut e = vec![0; self.base.rank()];
            e[0] = 1;
            e
        };
        if Solver::new(&self.lattices[0]).solve(&one).is_none() {
            return Err(Error::violation("unit missing at level 0"));
        }
        Ok(checked)
    }
}

/// Associated graded ring `gr^n = I^n / I^{n+1}` with multiplication by the
/// ideal generator `t: gr^n → gr^{n+1}` and the products `gr^a × gr^b → gr^{a+b}`.
#[derive(Clone, Debug)]
pub struct GradedRing {
    pub grades: Vec<Group>,
    pub t: Vec<Hom>,
    /// `(a, b) ↦` coordinates in `gr^{a+b}` of each product of generators, row-major in `(i, j)`.
    pub products: BTreeMap<(usize, usize), Vec<Vec<i64>>>,
}

pub fn gr_rees(tower: &ReesTower) -> GradedRing {
    let n = tower.base.rank();
    let grades: Vec<Group> =
        (0..=tower.depth).map(|k| Group::subquotient(n, &tower.lattices[k], &tower.lattices[k + 1])).collect();
    let g = tower.base.mul_matrix(&tower.base.ideal);
    let t = (0..tower.depth)
        .map(|k| Hom::induced(&grades[k], &grades[k + 1], &g).expect("the generator raises ideal degree"))
        .collect();
    let mut products = BTreeMap::new();
    for a in 0..=tower.depth {
        for b in 0..=tower.depth - a {
            let mut table = Vec::new();
            for x in grades[a].gens() {
                for y in grades[b].gens() {
                    let p = tower.base.mul(x, y);
                    table.push(grades[a + b].coords(&p).expect("I^a I^b ⊂ I^{a+b}"));
                }
            }
            products.insert((a, b), table);
        }
    }
    GradedRing { grades, t, products }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::smith_normal_form;

    #[test]
    fn two_adic_tower() {
        let t = rees_tower(&Base::integers(2), 3).unwrap();
        let gens: Vec<i64> = t.lattices.iter().map(|l| l[(0, 0)].abs()).collect();
        assert_eq!(gens, vec![1, 2, 4, 8, 16]);
        assert_eq!(t.complex.lo(), -3);
        assert!(t.check_multiplicative().unwrap() > 0);
    }

    #[test]
    fn unit_ideal_is_constant() {
        let t = rees_tower(&Base::integers(1), 4).unwrap();
        for m in -6..=2 {
            assert!(t.complex.homology(m, 0).is_isomorphic(&Group::free(1)));
            assert!(t.complex.homology_map(m, m + 1, 0).is_iso());
        }
    }

    #[test]
    fn zero_ideal_vanishes_below_zero() {
        let t = rees_tower(&Base::integers(0), 2).unwrap();
        assert!(t.complex.homology(-1, 0).is_trivial());
        assert!(t.complex.homology(-5, 0).is_trivial());
        assert_eq!(t.complex.homology(0, 0).orders(), &[0]);
    }

    #[test]
    fn graded_ring_of_p_adic_tower() {
        let t = rees_tower(&Base::integers(5), 4).unwrap();
        let g = gr_rees(&t);
        for (k, gr) in g.grades.iter().enumerate() {
            // oracle: invariant factors of I^{k+1} inside I^k
            let s = Solver::new(&t.lattices[k]);
            let inc = Mat::from_cols(1, &[s.solve(&t.lattices[k + 1].col(0)).unwrap()]);
            let snf = smith_normal_form(&inc);
            assert_eq!(gr.orders(), &[snf.invariant_factors[0].abs()]);
        }
        assert!(g.t.iter().all(|h| h.is_iso()));
    }

    #[test]
    fn truncated_tower() {
        let b = Base::truncated(4).unwrap();
        let t = rees_tower(&b, 5).unwrap();
        let ranks: Vec<usize> = t.lattices.iter().map(|l| l.cols()).collect();
        assert_eq!(ranks, vec![4, 3, 2, 1, 0, 0, 0]);
        t.check_multiplicative().unwrap();
        let g = gr_rees(&t);
        assert_eq!(g.grades[1].orders(), &[0]);
        assert!(g.grades[4].is_trivial());
    }
}
