use serde::Serialize;

use super::chain::{cone, cone_map, ChainComplex, ChainMap};
use super::couple::{pi_tw, ExactCouple};
use super::filtered::{gr_level, FilteredComplex};
use crate::linalg::{is_exact, Group, Hom, Mat};
use crate::{Error, Result};

/// `X^m / X^{m-2}` as a cone; level `m` of `X // τ`.
pub fn tau_quotient_level(x: &FilteredComplex, m: i32) -> ChainComplex {
    cone(&x.map_between(m - 2, m), x.level(m - 2), x.level(m))
}

fn tau_quotient_map(x: &FilteredComplex, m: i32) -> ChainMap {
    cone_map(&x.map(m - 2), &x.map(m), (x.level(m - 2), x.level(m)), (x.level(m - 1), x.level(m + 1)))
}

/// One turn of the spiral at `(t, w)`, with `s = t - w`:
/// `π_{t,w+1} X → π_{t,w} X → π_{t,w}(X//τ) → π_{t-1,w+1} X`.
#[derive(Clone, Debug)]
pub struct SpiralTurn {
    pub t: i32,
    pub w: i32,
    pub pi_next: Group,
    pub pi: Group,
    pub pi_tau: Group,
    pub pi_down: Group,
    pub tau: Hom,
    pub quotient: Hom,
    pub boundary: Hom,
}

/// Coordinates of `π_{t,w}(X//τ)` inside `H_t(X^{s+1}/X^{s-1})` and the
/// map from `H_t(X^s/X^{s-2})` whose image it is.
fn tau_image(x: &FilteredComplex, t: i32, w: i32) -> (ChainComplex, ChainComplex, Hom) {
    let s = t - w;
    let lower = tau_quotient_level(x, s);
    let upper = tau_quotient_level(x, s + 1);
    let h = tau_quotient_map(x, s).homology_map(&lower, &upper, t);
    (lower, upper, h)
}

pub fn spiral_turn(x: &FilteredComplex, t: i32, w: i32) -> SpiralTurn {
    let s = t - w;
    let pi_next = pi_tw(x, t, w + 1);
    let pi = pi_tw(x, t, w);
    let pi_down = pi_tw(x, t - 1, w + 1);
    let (_, upper, h) = tau_image(x, t, w);
    let pi_tau = h.image();

    let tau_mat = x.homology_map(s, s + 1, t).mat;
    let tau = Hom::from_fn(&pi_next, &pi, |v| tau_mat.mul_vec(v)).expect("τ maps images to images");

    let hx = x.homology(s + 1, t);
    let hy = upper.homology(t);
    let bx = x.level(s + 1).rank(t);
    let ax = x.level(s - 1).rank(t - 1);
    let quotient = Hom::from_fn(&pi, &pi_tau, |v| {
        let mut chain = hx.lift(v);
        chain.extend(std::iter::repeat_n(0, ax));
        hy.coords(&chain).expect("(b, 0) is a cycle")
    })
    .expect("quotient map lands in the image");

    let hdown = x.homology(s - 1, t - 1);
    let boundary = Hom::from_fn(&pi_tau, &pi_down, |v| {
        let chain = hy.lift(v);
        hdown.coords(&chain[bx..]).expect("the cone coordinate is a cycle")
    })
    .expect("boundary lands in the image");

    SpiralTurn { t, w, pi_next, pi, pi_tau, pi_down, tau, quotient, boundary }
}

#[derive(Clone, Debug, Serialize)]
pub struct SpiralEntry {
    pub t: i32,
    pub w: i32,
    pub pi: String,
    pub pi_tau: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpiralReport {
    pub entries: Vec<SpiralEntry>,
    pub exact_slots: usize,
    pub couple_checks: usize,
    pub failures: Vec<String>,
}

fn agree(a: &Hom, b: &Hom) -> bool {
    a.src == b.src && a.dst == b.dst && a.add(&b.neg()).is_zero()
}

/// Assembles the spiral sequence on `t0..=t1`, `w0..=w1`, checks exactness at
/// each slot and compares groups and maps with the derived couple.
pub fn spiral_sequence(x: &FilteredComplex, (t0, t1): (i32, i32), (w0, w1): (i32, i32)) -> Result<SpiralReport> {
    if t1 < t0 || w1 < w0 {
        return Err(Error::input("spiral range is empty"));
    }
    let smin = t0 - w1 - 3;
    let smax = t1 - w0 + 3;
    let c2 = ExactCouple::from_filtered(x, (smin, smax), (t0 - 2, t1 + 2)).derived();

    let mut report = SpiralReport { entries: vec![], exact_slots: 0, couple_checks: 0, failures: vec![] };
    for t in t0..=t1 {
        for w in w0..=w1 {
            let s = t - w;
            let turn = spiral_turn(x, t, w);
            let next_tau = spiral_turn(x, t - 1, w).tau; // π_{t-1,w+1} → π_{t-1,w}
            let slots = [
                ("π_{t,w}", &turn.tau, &turn.quotient),
                ("π_{t,w}(X//τ)", &turn.quotient, &turn.boundary),
                ("π_{t-1,w+1}", &turn.boundary, &next_tau),
            ];
            for (name, a, b) in slots {
                report.exact_slots += 1;
                if !is_exact(a, b) {
                    report.failures.push(format!("not exact at {name} for (t,w)=({t},{w})"));
                }
            }

            // identifications with the derived couple
            let d_here = &c2.d[&(s + 1, t)];
            let d_next = &c2.d[&(s, t)];
            let d_down = &c2.d[&(s - 1, t - 1)];
            let e_here = &c2.e[&(s, t)];
            let phi_d = Hom::from_fn(&turn.pi, d_here, |v| v.to_vec()).expect("same image");
            let phi_next = Hom::from_fn(&turn.pi_next, d_next, |v| v.to_vec()).expect("same image");
            let phi_down = Hom::from_fn(&turn.pi_down, d_down, |v| v.to_vec()).expect("same image");
            let phi_e = e_comparison(x, t, w, &turn.pi_tau, e_here);
            let Some(phi_e) = phi_e else {
                report.failures.push(format!("no comparison map onto E2 at (t,w)=({t},{w})"));
                continue;
            };
            for (name, h) in [("D", &phi_d), ("D+", &phi_next), ("D-", &phi_down), ("E", &phi_e)] {
                report.couple_checks += 1;
                if !h.is_iso() {
                    report.failures.push(format!("{name} comparison not an isomorphism at ({t},{w})"));
                }
            }
            let squares = [
                ("i", phi_d.compose(&turn.tau), c2.i[&(s, t)].compose(&phi_next)),
                ("j", phi_e.compose(&turn.quotient), c2.j[&(s + 1, t)].compose(&phi_d)),
                ("k", phi_down.compose(&turn.boundary), c2.k[&(s, t)].compose(&phi_e)),
            ];
            for (name, a, b) in squares {
                report.couple_checks += 1;
                if !agree(&a, &b) {
                    report.failures.push(format!("{name} square does not commute at ({t},{w})"));
                }
            }
            report.entries.push(SpiralEntry { t, w, pi: turn.pi.to_string(), pi_tau: turn.pi_tau.to_string() });
        }
    }
    if let Some(f) = report.failures.first() {
        return Err(Error::violation(format!("spiral sequence: {f}")));
    }
    Ok(report)
}

/// `π_{t,w}(X//τ) → E_2^{s}_t`: pull a class back to `X^s/X^{s-2}`, push it to
/// `gr^s = X^s/X^{s-1}`, and read off its class on the second page.
fn e_comparison(x: &FilteredComplex, t: i32, w: i32, pi_tau: &Group, e2: &Group) -> Option<Hom> {
    let s = t - w;
    let (lower, _, h) = tau_image(x, t, w);
    let hl = lower.homology(t);
    let g = gr_level(x, s);
    let hg = g.homology(t);
    let b = x.level(s).rank(t);
    let step = x.map(s - 2).at(x.level(s - 2), x.level(s - 1), t - 1);
    let to_gr = Mat::identity(b).block_diag(&step);
    debug_assert_eq!(to_gr.cols(), lower.rank(t));
    Hom::from_fn(pi_tau, e2, |v| {
        let u = h.preimage(v).expect("generator lies in the image");
        let chain = to_gr.mul_vec(&hl.lift(&u));
        hg.coords(&chain).expect("image is a cycle of gr")
    })
    .ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{mod_tau, sphere, Below};
    use std::collections::BTreeMap;

    fn cone_p(p: i64) -> FilteredComplex {
        let l0 = ChainComplex::point(0);
        let l1 = ChainComplex::multiplication(0, p);
        let inc = ChainMap::new(&l0, &l1, BTreeMap::from([(0, Mat::from_rows(1, 1, vec![1]))])).unwrap();
        FilteredComplex::new(0, Below::Zero, vec![l0, l1], vec![inc]).unwrap()
    }

    #[test]
    fn quotient_levels_match_mod_tau() {
        let x = cone_p(3);
        let y = mod_tau(&x);
        for m in -2..=5 {
            assert_eq!(y.level(m), &tau_quotient_level(&x, m), "level {m}");
        }
    }

    #[test]
    fn sphere_spiral() {
        let r = spiral_sequence(&sphere(0, 0), (-1, 1), (-1, 1)).unwrap();
        let e = r.entries.iter().find(|e| e.t == 0 && e.w == 0).unwrap();
        assert_eq!(e.pi, "Z");
        assert_eq!(e.pi_tau, "Z");
    }

    #[test]
    fn cone_p_spiral_recovers_torsion() {
        let r = spiral_sequence(&cone_p(5), (-1, 2), (-2, 2)).unwrap();
        let e = r.entries.iter().find(|e| e.t == 0 && e.w == 0).unwrap();
        assert_eq!(e.pi_tau, "Z/5");
    }
}
