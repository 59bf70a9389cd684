use super::Mat;

/// `left * a * right = diag(invariant_factors, 0, ...)`, with unimodular
/// `left`, `right` and their inverses kept alongside.
#[derive(Clone, Debug)]
pub struct SmithNormalForm {
    pub invariant_factors: Vec<i64>,
    pub left: Mat,
    pub left_inv: Mat,
    pub right: Mat,
    pub right_inv: Mat,
    pub rank: usize,
}

pub fn smith_normal_form(a: &Mat) -> SmithNormalForm {
    let (m, n) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = Mat::identity(m);
    let mut uinv = Mat::identity(m);
    let mut v = Mat::identity(n);
    let mut vinv = Mat::identity(n);

    // Each op is applied to d and mirrored on the transforms.
    let swap_rows = |d: &mut Mat, u: &mut Mat, uinv: &mut Mat, i: usize, j: usize| {
        d.swap_rows(i, j);
        u.swap_rows(i, j);
        uinv.swap_cols(i, j);
    };
    let swap_cols = |d: &mut Mat, v: &mut Mat, vinv: &mut Mat, i: usize, j: usize| {
        d.swap_cols(i, j);
        v.swap_cols(i, j);
        vinv.swap_rows(i, j);
    };
    // row[dst] += c row[src]
    let add_row = |d: &mut Mat, u: &mut Mat, uinv: &mut Mat, dst: usize, src: usize, c: i64| {
        d.add_row(dst, src, c);
        u.add_row(dst, src, c);
        uinv.add_col(src, dst, -c);
    };
    // col[dst] += c col[src]
    let add_col = |d: &mut Mat, v: &mut Mat, vinv: &mut Mat, dst: usize, src: usize, c: i64| {
        d.add_col(dst, src, c);
        v.add_col(dst, src, c);
        vinv.add_row(src, dst, -c);
    };

    let mut t = 0;
    while t < m.min(n) {
        // smallest nonzero entry of the trailing block becomes the pivot
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                let x = d[(i, j)];
                if x != 0 && best.is_none_or(|(bi, bj)| x.abs() < d[(bi, bj)].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        swap_rows(&mut d, &mut u, &mut uinv, t, pi);
        swap_cols(&mut d, &mut v, &mut vinv, t, pj);

        loop {
            let mut dirty = false;
            for i in t + 1..m {
                let x = d[(i, t)];
                if x != 0 {
                    let q = x.div_euclid(d[(t, t)]);
                    add_row(&mut d, &mut u, &mut uinv, i, t, -q);
                    if d[(i, t)] != 0 {
                        dirty = true;
                    }
                }
            }
            for j in t + 1..n {
                let x = d[(t, j)];
                if x != 0 {
                    let q = x.div_euclid(d[(t, t)]);
                    add_col(&mut d, &mut v, &mut vinv, j, t, -q);
                    if d[(t, j)] != 0 {
                        dirty = true;
                    }
                }
            }
            if dirty {
                let mut best = (t, t);
                for i in t..m {
                    let x = d[(i, t)];
                    if x != 0 && x.abs() < d[best].abs() {
                        best = (i, t);
                    }
                }
                for j in t..n {
                    let x = d[(t, j)];
                    if x != 0 && x.abs() < d[best].abs() {
                        best = (t, j);
                    }
                }
                swap_rows(&mut d, &mut u, &mut uinv, t, best.0);
                swap_cols(&mut d, &mut v, &mut vinv, t, best.1);
                continue;
            }
            // divisibility: fold an offending row into the pivot row
            let p = d[(t, t)];
            let mut offender = None;
            'scan: for i in t + 1..m {
                for j in t + 1..n {
                    if d[(i, j)] % p != 0 {
                        offender = Some(i);
                        break 'scan;
                    }
                }
            }
            match offender {
                Some(i) => add_row(&mut d, &mut u, &mut uinv, t, i, 1),
                None => break,
            }
        }
        if d[(t, t)] < 0 {
            d.neg_row(t);
            u.neg_row(t);
            uinv.neg_col(t);
        }
        t += 1;
    }
    let invariant_factors: Vec<i64> = (0..t).map(|i| d[(i, i)]).collect();
    SmithNormalForm {
        rank: invariant_factors.len(),
        invariant_factors,
        left: u,
        left_inv: uinv,
        right: v,
        right_inv: vinv,
    }
}

/// Basis of the integer kernel of `a`, as columns. The kernel lattice is saturated.
pub fn kernel_basis(a: &Mat) -> Mat {
    let s = smith_normal_form(a);
    let idx: Vec<usize> = (s.rank..a.cols()).collect();
    s.right.select_cols(&idx)
}

/// Basis (as columns) of the lattice spanned by the columns of `a`.
pub fn lattice_basis(a: &Mat) -> Mat {
    let s = smith_normal_form(a);
    let cols: Vec<Vec<i64>> =
        (0..s.rank).map(|i| s.left_inv.col(i).into_iter().map(|x| x * s.invariant_factors[i]).collect()).collect();
    Mat::from_cols(a.rows(), &cols)
}

pub fn rank(a: &Mat) -> usize {
    smith_normal_form(a).rank
}

/// Integer solver for `a x = b`, reusing one factorisation for many right-hand sides.
#[derive(Clone, Debug)]
pub struct Solver {
    snf: SmithNormalForm,
    cols: usize,
}

impl Solver {
    pub fn new(a: &Mat) -> Solver {
        Solver { snf: smith_normal_form(a), cols: a.cols() }
    }

    pub fn solve(&self, b: &[i64]) -> Option<Vec<i64>> {
        let c = self.snf.left.mul_vec(b);
        let mut y = vec![0i64; self.cols];
        for (i, &ci) in c.iter().enumerate() {
            if i < self.snf.rank {
                let d = self.snf.invariant_factors[i];
                if ci % d != 0 {
                    return None;
                }
                y[i] = ci / d;
            } else if ci != 0 {
                return None;
            }
        }
        Some(self.snf.right.mul_vec(&y))
    }
}

pub fn solve(a: &Mat, b: &[i64]) -> Option<Vec<i64>> {
    Solver::new(a).solve(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(a: &Mat) {
        let s = smith_normal_form(a);
        let d = s.left.mul(a).mul(&s.right);
        for i in 0..d.rows() {
            for j in 0..d.cols() {
                let want = if i == j && i < s.rank { s.invariant_factors[i] } else { 0 };
                assert_eq!(d[(i, j)], want, "{a:?}");
            }
        }
        assert_eq!(s.left.mul(&s.left_inv), Mat::identity(a.rows()));
        assert_eq!(s.right.mul(&s.right_inv), Mat::identity(a.cols()));
        for w in s.invariant_factors.windows(2) {
            assert_eq!(w[1] % w[0], 0);
        }
    }

    #[test]
    fn two_by_two_with_torsion() {
        let a = Mat::from_rows(2, 2, vec![2, 4, 6, 8]);
        check(&a);
        assert_eq!(smith_normal_form(&a).invariant_factors, vec![2, 4]);
    }

    #[test]
    fn needs_divisibility_fix() {
        let a = Mat::from_rows(2, 2, vec![2, 0, 0, 3]);
        check(&a);
        assert_eq!(smith_normal_form(&a).invariant_factors, vec![1, 6]);
    }

    #[test]
    fn kernel_of_row() {
        let a = Mat::from_rows(1, 3, vec![2, 3, 5]);
        let k = kernel_basis(&a);
        assert_eq!(k.cols(), 2);
        assert!(a.mul(&k).is_zero());
    }

    #[test]
    fn solve_detects_divisibility() {
        let a = Mat::from_rows(1, 1, vec![2]);
        assert_eq!(solve(&a, &[4]), Some(vec![2]));
        assert_eq!(solve(&a, &[3]), None);
    }
}
