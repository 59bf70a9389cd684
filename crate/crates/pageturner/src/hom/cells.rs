use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::complex::{Below, ChainComplex, ChainMap, FilteredComplex};
use crate::linalg::{smith_normal_form, Mat, Solver};
use crate::{Error, Result};

/// A cell of bidegree `(t, w)`, born at filtration level `t - w`, with
/// boundary `Σ c · cell_j` over earlier cells.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub t: i32,
    pub w: i32,
    #[serde(default)]
    pub attach: Vec<(usize, i64)>,
}

impl Cell {
    pub fn birth(&self) -> i32 {
        self.t - self.w
    }
}

/// A finite cell complex in filtered chain complexes.
#[derive(Clone, Debug)]
pub struct CellPresentation {
    cells: Vec<Cell>,
    complex: FilteredComplex,
}

impl CellPresentation {
    pub fn from_cells(cells: Vec<Cell>) -> Result<CellPresentation> {
        for (i, c) in cells.iter().enumerate() {
            for &(j, _) in &c.attach {
                let Some(a) = cells.get(j).filter(|_| j < i) else {
                    return Err(Error::input(format!("cell {i} attaches to cell {j}, which is not earlier")));
                };
                if a.t != c.t - 1 {
                    return Err(Error::input(format!(
                        "cell {i} of degree {} attaches to cell {j} of degree {}",
                        c.t, a.t
                    )));
                }
                if a.birth() > c.birth() {
                    return Err(Error::input(format!("cell {i} attaches to cell {j}, which is born later")));
                }
            }
        }
        let complex = build(&cells)?;
        Ok(CellPresentation { cells, complex })
    }

    /// Cells of a cofibrant filtered complex, read off from bases adapted to
    /// its structure maps.
    pub fn from_filtered(x: &FilteredComplex) -> Result<CellPresentation> {
        if !x.is_cofibrant() {
            return Err(Error::input("filtered complex is not cell-presented: it must be zero below its window with split injective structure maps"));
        }
        if x.is_empty_window() {
            return CellPresentation::from_cells(vec![]);
        }
        let degrees: Vec<i32> = match x.degree_range() {
            Some((a, b)) => (a..=b).collect(),
            None => vec![],
        };
        let mut cells: Vec<Cell> = Vec::new();
        // per degree: basis of the current level (columns) and the cell of each column
        let mut basis: BTreeMap<i32, (Mat, Vec<usize>)> = BTreeMap::new();
        for m in x.lo()..=x.hi() {
            let level = x.level(m);
            let mut fresh: BTreeMap<i32, Vec<(usize, Vec<i64>)>> = BTreeMap::new();
            for &j in &degrees {
                let n = level.rank(j);
                let (prev, ids) = match basis.remove(&j) {
                    Some((b, ids)) if m > x.lo() => (x.map(m - 1).at(x.level(m - 1), level, j).mul(&b), ids),
                    _ => (Mat::zeros(n, 0), vec![]),
                };
                let s = smith_normal_form(&prev);
                if s.invariant_factors.iter().any(|&d| d.abs() != 1) {
                    return Err(Error::input(format!("structure map {m} is not split injective in degree {j}")));
                }
                let complement = s.left_inv.select_cols(&(s.rank..n).collect::<Vec<_>>());
                let mut ids = ids;
                let new: Vec<(usize, Vec<i64>)> = (0..complement.cols())
                    .map(|c| {
                        ids.push(usize::MAX);
                        (ids.len() - 1, complement.col(c))
                    })
                    .collect();
                fresh.insert(j, new);
                basis.insert(j, (prev.hcat(&complement), ids));
            }
            // name new cells degree by degree so that boundaries refer to earlier cells
            for &j in &degrees {
                let new = fresh.remove(&j).unwrap_or_default();
                let solver = basis.get(&(j - 1)).map(|(b, _)| Solver::new(b));
                for (col, v) in new {
                    let dv = level.d(j).mul_vec(&v);
                    let mut attach = Vec::new();
                    if let (Some(solver), Some((_, ids))) = (&solver, basis.get(&(j - 1))) {
                        let c = solver.solve(&dv).expect("adapted bases are unimodular");
                        for (k, &coef) in c.iter().enumerate() {
                            if coef != 0 {
                                attach.push((ids[k], coef));
                            }
                        }
                    }
                    cells.push(Cell { t: j, w: j - m, attach });
                    basis.get_mut(&j).unwrap().1[col] = cells.len() - 1;
                }
            }
        }
        CellPresentation::from_cells(cells)
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn complex(&self) -> &FilteredComplex {
        &self.complex
    }
}

/// Level `m` has the cells born at or before `m`, ordered by index within each degree.
fn build(cells: &[Cell]) -> Result<FilteredComplex> {
    if cells.is_empty() {
        return Ok(FilteredComplex::zero());
    }
    let lo = cells.iter().map(Cell::birth).min().unwrap();
    let hi = cells.iter().map(Cell::birth).max().unwrap();
    let alive = |m: i32, t: i32| -> Vec<usize> {
        (0..cells.len()).filter(|&i| cells[i].t == t && cells[i].birth() <= m).collect()
    };
    let mut degrees: Vec<i32> = cells.iter().map(|c| c.t).collect();
    degrees.sort();
    degrees.dedup();
    let level = |m: i32| -> Result<ChainComplex> {
        let mut ranks = BTreeMap::new();
        let mut d = BTreeMap::new();
        for &t in &degrees {
            let cols = alive(m, t);
            if cols.is_empty() {
                continue;
            }
            ranks.insert(t, cols.len());
            let rows = alive(m, t - 1);
            let mut mat = Mat::zeros(rows.len(), cols.len());
            for (c, &i) in cols.iter().enumerate() {
                for &(j, coef) in &cells[i].attach {
                    let r = rows.iter().position(|&x| x == j).expect("attached cells are alive");
                    mat[(r, c)] += coef;
                }
            }
            if !rows.is_empty() {
                d.insert(t, mat);
            }
        }
        ChainComplex::new(ranks, d).map_err(|e| Error::input(format!("cells do not form a complex at level {m}: {e}")))
    };
    let levels: Vec<ChainComplex> = (lo..=hi).map(level).collect::<Result<_>>()?;
    let mut maps = Vec::new();
    for m in lo..hi {
        let mut mats = BTreeMap::new();
        for &t in &degrees {
            let (a, b) = (alive(m, t), alive(m + 1, t));
            let mut inc = Mat::zeros(b.len(), a.len());
            for (c, i) in a.iter().enumerate() {
                inc[(b.iter().position(|x| x == i).unwrap(), c)] = 1;
            }
            mats.insert(t, inc);
        }
        let (a, b) = (&levels[(m - lo) as usize], &levels[(m - lo + 1) as usize]);
        maps.push(ChainMap::new(a, b, mats)?);
    }
    FilteredComplex::new(lo, Below::Zero, levels, maps)
}

pub fn cells_from_json(s: &str) -> Result<CellPresentation> {
    let cells: Vec<Cell> = serde_json::from_str(s).map_err(|e| Error::input(format!("cell JSON: {e}")))?;
    CellPresentation::from_cells(cells)
}

pub fn cells_to_json(p: &CellPresentation) -> String {
    serde_json::to_string_pretty(p.cells()).expect("plain data serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{mod_tau, sphere};

    fn same_homology(a: &FilteredComplex, b: &FilteredComplex) -> bool {
        (-4..=6).all(|m| (-3..=5).all(|t| a.homology(m, t).is_isomorphic(&b.homology(m, t))))
    }

    #[test]
    fn sphere_cells() {
        let p = CellPresentation::from_cells(vec![Cell { t: 2, w: 1, attach: vec![] }]).unwrap();
        assert_eq!(p.complex(), &sphere(2, 1));
    }

    #[test]
    fn ctau_cells() {
        // S^{0,0} with a 1-cell of weight -1 attached by 1: the cofiber of τ
        let p = CellPresentation::from_cells(vec![
            Cell { t: 0, w: 0, attach: vec![] },
            Cell { t: 1, w: -1, attach: vec![(0, 1)] },
        ])
        .unwrap();
        assert!(same_homology(p.complex(), &mod_tau(&sphere(0, 0))));
    }

    #[test]
    fn round_trip_through_cofibrant() {
        let x = mod_tau(&sphere(1, 0)).direct_sum(&sphere(0, 2));
        let p = CellPresentation::from_filtered(&x).unwrap();
        assert_eq!(p.cells().len(), x.level(x.hi()).total_rank());
        assert!(same_homology(p.complex(), &x));
        let q = cells_from_json(&cells_to_json(&p)).unwrap();
        assert_eq!(q.cells(), p.cells());
    }

    #[test]
    fn rejects_forward_attachment() {
        let cells = vec![Cell { t: 1, w: 0, attach: vec![(1, 1)] }, Cell { t: 0, w: 0, attach: vec![] }];
        assert!(CellPresentation::from_cells(cells).is_err());
    }
}
