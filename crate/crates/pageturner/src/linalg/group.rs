//! Finitely generated abelian groups presented as subquotients `Z / B` of a
//! free ambient lattice, with canonical (invariant factor) coordinates.

use std::fmt;

use super::snf::{kernel_basis, lattice_basis, smith_normal_form, Solver};
use super::Mat;

#[derive(Clone, Debug)]
pub struct Group {
    ambient: usize,
    zbasis: Mat,
    zsolver: Solver,
    to_canon: Mat,
    gens: Vec<Vec<i64>>,
    orders: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NotContained;

impl Group {
    /// The subquotient `(span(z) + span(b)) / span(b)` of `Z^ambient`.
    /// Columns of `z` and `b` are spanning vectors.
    pub fn subquotient(ambient: usize, z: &Mat, b: &Mat) -> Group {
        assert_eq!(z.rows(), ambient, "z span has wrong ambient");
        assert_eq!(b.rows(), ambient, "b span has wrong ambient");
        let zbasis = lattice_basis(&z.hcat(b));
        let zsolver = Solver::new(&zbasis);
        let g = zbasis.cols();
        let bcols: Vec<Vec<i64>> = (0..b.cols())
            .map(|j| zsolver.solve(&b.col(j)).expect("relation lattice lies in its cycle lattice"))
            .collect();
        let rel = Mat::from_cols(g, &bcols);
        let s = smith_normal_form(&rel);
        let mut keep: Vec<(usize, i64)> = Vec::new();
        for i in 0..g {
            let d = if i < s.rank { s.invariant_factors[i] } else { 0 };
            if d != 1 {
                keep.push((i, d));
            }
        }
        let gens = keep.iter().map(|&(i, _)| zbasis.mul_vec(&s.left_inv.col(i))).collect();
        let rows: Vec<usize> = keep.iter().map(|&(i, _)| i).collect();
        let to_canon = s.left.select_rows(&rows);
        let orders = keep.iter().map(|&(_, d)| d).collect();
        Group { ambient, zbasis, zsolver, to_canon, gens, orders }
    }

    pub fn free(n: usize) -> Group {
        Group::subquotient(n, &Mat::identity(n), &Mat::zeros(n, 0))
    }

    pub fn zero() -> Group {
        Group::free(0)
    }

    /// `⊕ Z/o_i` with `o_i = 0` meaning a free summand.
    pub fn from_orders(orders: &[i64]) -> Group {
        let n = orders.len();
        Group::subquotient(n, &Mat::identity(n), &relation_matrix(orders))
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn ngens(&self) -> usize {
        self.gens.len()
    }

    /// Invariant factors: torsion orders in divisibility order, then `0` per free summand.
    pub fn orders(&self) -> &[i64] {
        &self.orders
    }

    pub fn gens(&self) -> &[Vec<i64>] {
        &self.gens
    }

    pub fn is_trivial(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.orders.iter().filter(|&&o| o == 0).count()
    }

    pub fn torsion(&self) -> Vec<i64> {
        self.orders.iter().copied().filter(|&o| o != 0).collect()
    }

    pub fn is_isomorphic(&self, other: &Group) -> bool {
        self.orders == other.orders
    }

    /// Canonical coordinates of an ambient vector lying in the cycle lattice.
    pub fn coords(&self, v: &[i64]) -> Result<Vec<i64>, NotContained> {
        let c = self.zsolver.solve(v).ok_or(NotContained)?;
        Ok(self.reduce(self.to_canon.mul_vec(&c)))
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        self.zsolver.solve(v).is_some()
    }

    /// Whether an ambient vector of the cycle lattice is zero in the group.
    pub fn is_zero_elem(&self, v: &[i64]) -> bool {
        matches!(self.coords(v), Ok(c) if c.iter().all(|&x| x == 0))
    }

    pub fn reduce(&self, mut c: Vec<i64>) -> Vec<i64> {
        for (x, &o) in c.iter_mut().zip(&self.orders) {
            if o != 0 {
                *x = x.rem_euclid(o);
            }
        }
        c
    }

    /// Ambient representative of a coordinate vector.
    pub fn lift(&self, c: &[i64]) -> Vec<i64> {
        let mut v = vec![0; self.ambient];
        for (ci, g) in c.iter().zip(&self.gens) {
            if *ci != 0 {
                for (vi, gi) in v.iter_mut().zip(g) {
                    *vi += ci * gi;
                }
            }
        }
        v
    }

    pub fn cycle_basis(&self) -> &Mat {
        &self.zbasis
    }

    /// The same group re-presented on its own coordinate lattice `Z^ngens`.
    pub fn coordinate_model(&self) -> Group {
        Group::from_orders(&self.orders)
    }

    pub fn direct_sum(&self, other: &Group) -> Group {
        let mut o = self.orders.clone();
        o.extend_from_slice(&other.orders);
        Group::from_orders(&o)
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&describe_orders(&self.orders))
    }
}

/// Human-readable group name such as `Z^2+Z/2`.
pub fn describe_orders(orders: &[i64]) -> String {
    if orders.is_empty() {
        return "0".into();
    }
    let mut parts = Vec::new();
    let free = orders.iter().filter(|&&o| o == 0).count();
    if free == 1 {
        parts.push("Z".to_string());
    } else if free > 1 {
        parts.push(format!("Z^{free}"));
    }
    for &o in orders.iter().filter(|&&o| o != 0) {
        parts.push(format!("Z/{o}"));
    }
    parts.join("+")
}

fn relation_matrix(orders: &[i64]) -> Mat {
    let cols: Vec<Vec<i64>> = orders
        .iter()
        .enumerate()
        .filter(|(_, &o)| o != 0)
        .map(|(i, &o)| {
            let mut v = vec![0; orders.len()];
            v[i] = o;
            v
        })
        .collect();
    Mat::from_cols(orders.len(), &cols)
}

/// Homomorphism between groups in canonical coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hom {
    pub mat: Mat,
    pub src: Vec<i64>,
    pub dst: Vec<i64>,
}

impl Hom {
    pub fn zero(src: &Group, dst: &Group) -> Hom {
        Hom { mat: Mat::zeros(dst.ngens(), src.ngens()), src: src.orders.clone(), dst: dst.orders.clone() }
    }

    pub fn identity(g: &Group) -> Hom {
        Hom { mat: Mat::identity(g.ngens()), src: g.orders.clone(), dst: g.orders.clone() }
    }

    /// Homomorphism induced by an ambient linear map (`dst.ambient x src.ambient`).
    pub fn induced(src: &Group, dst: &Group, f: &Mat) -> Result<Hom, NotContained> {
        assert_eq!((f.rows(), f.cols()), (dst.ambient, src.ambient), "ambient map shape");
        Hom::from_fn(src, dst, |v| f.mul_vec(v))
    }

    /// Homomorphism defined on generator lifts by an arbitrary ambient-level rule.
    pub fn from_fn<F>(src: &Group, dst: &Group, f: F) -> Result<Hom, NotContained>
    where
        F: Fn(&[i64]) -> Vec<i64>,
    {
        let cols: Result<Vec<Vec<i64>>, NotContained> = src.gens.iter().map(|g| dst.coords(&f(g))).collect();
        let cols = cols?;
        let hom = Hom { mat: Mat::from_cols(dst.ngens(), &cols), src: src.orders.clone(), dst: dst.orders.clone() };
        if !hom.respects_orders() {
            return Err(NotContained);
        }
        Ok(hom)
    }

    /// Same as `from_fn` but the rule returns coordinates in `dst` directly.
    pub fn from_coords<F>(src: &Group, dst: &Group, f: F) -> Result<Hom, NotContained>
    where
        F: Fn(usize, &[i64]) -> Result<Vec<i64>, NotContained>,
    {
        let mut cols = Vec::with_capacity(src.ngens());
        for (i, g) in src.gens.iter().enumerate() {
            let c = f(i, g)?;
            cols.push(dst.reduce(c));
        }
        let hom = Hom { mat: Mat::from_cols(dst.ngens(), &cols), src: src.orders.clone(), dst: dst.orders.clone() };
        if !hom.respects_orders() {
            return Err(NotContained);
        }
        Ok(hom)
    }

    fn respects_orders(&self) -> bool {
        // a torsion generator must map to an element killed by its order
        for (j, &o) in self.src.iter().enumerate() {
            if o == 0 {
                continue;
            }
            for (i, &od) in self.dst.iter().enumerate() {
                let x = o * self.mat[(i, j)];
                let ok = if od == 0 { x == 0 } else { x % od == 0 };
                if !ok {
                    return false;
                }
            }
        }
        true
    }

    pub fn apply(&self, c: &[i64]) -> Vec<i64> {
        reduce_by(&self.dst, self.mat.mul_vec(c))
    }

    /// `self ∘ inner`
    pub fn compose(&self, inner: &Hom) -> Hom {
        assert_eq!(inner.dst, self.src, "composition of incompatible homomorphisms");
        let m = self.mat.mul(&inner.mat);
        let cols: Vec<Vec<i64>> = (0..m.cols()).map(|j| reduce_by(&self.dst, m.col(j))).collect();
        Hom { mat: Mat::from_cols(self.dst.len(), &cols), src: inner.src.clone(), dst: self.dst.clone() }
    }

    pub fn add(&self, other: &Hom) -> Hom {
        assert_eq!((&self.src, &self.dst), (&other.src, &other.dst));
        let m = self.mat.add(&other.mat);
        let cols: Vec<Vec<i64>> = (0..m.cols()).map(|j| reduce_by(&self.dst, m.col(j))).collect();
        Hom { mat: Mat::from_cols(self.dst.len(), &cols), src: self.src.clone(), dst: self.dst.clone() }
    }

    pub fn neg(&self) -> Hom {
        let m = self.mat.scale(-1);
        let cols: Vec<Vec<i64>> = (0..m.cols()).map(|j| reduce_by(&self.dst, m.col(j))).collect();
        Hom { mat: Mat::from_cols(self.dst.len(), &cols), src: self.src.clone(), dst: self.dst.clone() }
    }

    pub fn is_zero(&self) -> bool {
        (0..self.mat.cols()).all(|j| reduce_by(&self.dst, self.mat.col(j)).iter().all(|&x| x == 0))
    }

    fn dst_relations(&self) -> Mat {
        relation_matrix(&self.dst)
    }

    fn src_relations(&self) -> Mat {
        relation_matrix(&self.src)
    }

    /// Kernel, as a subquotient of the source coordinate lattice.
    pub fn kernel(&self) -> Group {
        let n = self.src.len();
        let sys = self.mat.hcat(&self.dst_relations());
        let k = kernel_basis(&sys);
        let z = k.block(0, 0, n, k.cols());
        Group::subquotient(n, &z, &self.src_relations())
    }

    /// Image, as a subquotient of the target coordinate lattice.
    pub fn image(&self) -> Group {
        Group::subquotient(self.dst.len(), &self.mat, &self.dst_relations())
    }

    pub fn cokernel(&self) -> Group {
        let n = self.dst.len();
        Group::subquotient(n, &Mat::identity(n), &self.mat.hcat(&self.dst_relations()))
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().is_trivial()
    }

    pub fn is_surjective(&self) -> bool {
        self.cokernel().is_trivial()
    }

    pub fn is_iso(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }

    /// Some `x` with `self(x) = y`, if one exists.
    pub fn preimage(&self, y: &[i64]) -> Option<Vec<i64>> {
        let n = self.src.len();
        let sys = self.mat.hcat(&self.dst_relations());
        let sol = Solver::new(&sys).solve(y)?;
        Some(reduce_by(&self.src, sol[..n].to_vec()))
    }
}

pub fn reduce_by(orders: &[i64], mut c: Vec<i64>) -> Vec<i64> {
    for (x, &o) in c.iter_mut().zip(orders) {
        if o != 0 {
            *x = x.rem_euclid(o);
        }
    }
    c
}

/// Homology `ker(psi) / im(phi)` at the middle of `G -phi-> H -psi-> K`,
/// presented on the coordinate lattice of `H`. Requires `psi ∘ phi = 0`.
pub fn homology_at(phi: &Hom, psi: &Hom) -> Group {
    assert_eq!(phi.dst, psi.src, "homology of incompatible homomorphisms");
    let n = phi.dst.len();
    let sys = psi.mat.hcat(&relation_matrix(&psi.dst));
    let k = kernel_basis(&sys);
    let z = k.block(0, 0, n, k.cols());
    let b = phi.mat.hcat(&relation_matrix(&phi.dst));
    Group::subquotient(n, &z, &b)
}

/// Exactness of `G -phi-> H -psi-> K` at `H`.
pub fn is_exact(phi: &Hom, psi: &Hom) -> bool {
    psi.compose(phi).is_zero() && homology_at(phi, psi).is_trivial()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_quotient() {
        let g = Group::subquotient(1, &Mat::identity(1), &Mat::from_rows(1, 1, vec![2]));
        assert_eq!(g.orders(), &[2]);
        assert_eq!(g.coords(&[3]).unwrap(), vec![1]);
    }

    #[test]
    fn canonical_form_of_z2_plus_z3() {
        let g = Group::from_orders(&[2, 3]);
        assert_eq!(g.orders(), &[6]);
        let h = Group::from_orders(&[0, 4, 2]);
        assert_eq!(h.orders(), &[2, 4, 0]);
        assert_eq!(h.to_string(), "Z+Z/2+Z/4");
    }

    #[test]
    fn multiplication_by_p_kernel_and_cokernel() {
        let z = Group::free(1);
        let p = Hom::induced(&z, &z, &Mat::from_rows(1, 1, vec![3])).unwrap();
        assert!(p.kernel().is_trivial());
        assert_eq!(p.cokernel().orders(), &[3]);
        assert_eq!(p.image().orders(), &[0]);
    }

    #[test]
    fn exactness_of_short_sequence() {
        let z = Group::free(1);
        let zp = Group::from_orders(&[5]);
        let p = Hom::induced(&z, &z, &Mat::from_rows(1, 1, vec![5])).unwrap();
        let q = Hom::induced(&z, &zp, &Mat::from_rows(1, 1, vec![1])).unwrap();
        assert!(is_exact(&p, &q));
        assert!(!is_exact(&Hom::zero(&z, &z), &q));
    }

    #[test]
    fn torsion_cannot_map_to_free() {
        let zp = Group::from_orders(&[2]);
        let z = Group::free(1);
        assert!(Hom::from_coords(&zp, &z, |_, _| Ok(vec![1])).is_err());
    }
}
