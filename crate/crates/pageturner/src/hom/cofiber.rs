use serde::Serialize;

use super::successor::{successor_hom_map_upto, tau_on_hom, top};
use crate::complex::{cofiber_inclusion, cofiber_projection, cone_inclusion, levelwise_cofiber, mod_tau, sphere};
use crate::complex::{FilteredComplex, FilteredMap};
use crate::linalg::is_exact;
use crate::{Error, Result};

#[derive(Clone, Debug, Serialize)]
pub struct CofiberReport {
    /// Class of the lift `R → sh^{-1} ΣP` in `H_0`, when one exists.
    pub lift: Option<Vec<i64>>,
    /// Image of `[δ]` in the cokernel of τ_*, when no lift exists.
    pub obstruction: Option<String>,
    pub probes: usize,
    pub slots_checked: usize,
}

impl CofiberReport {
    pub fn passed(&self) -> bool {
        self.lift.is_some()
    }
}

/// For `f: P → Q` with levelwise cofiber `R` and connecting map `δ: R → ΣP`,
/// lifts `δ` along τ to `R → sh^{-1} ΣP` and checks that
/// `P → Q → R → sh^{-1}ΣP → sh^{-1}ΣQ` is exact on successor homs out of each probe.
pub fn cofiber_preservation_check(
    f: &FilteredMap,
    p: &FilteredComplex,
    q: &FilteredComplex,
    probes: &[FilteredComplex],
) -> Result<CofiberReport> {
    let r = levelwise_cofiber(f, p, q)?;
    if !r.is_cofibrant() {
        return Err(Error::input("the cofiber must be cell-presented; use cell-presented P and Q"));
    }
    let sp = p.suspend(1);
    let sq = q.suspend(1);
    let delta = cofiber_projection(p, q);
    let t = top(&r, &[&sp, &sq, p, q]);
    let (lower, upper, tau) = tau_on_hom(&r, &sp, -1, t)?;
    let h_upper = upper.complex.homology(0);
    let h_lower = lower.complex.homology(0);
    let cycle =
        upper.element_of(|m| delta.at(m)).ok_or_else(|| Error::violation("connecting map is not a filtered map"))?;
    let class = h_upper.coords(&cycle).map_err(|_| Error::violation("connecting map is not a cycle"))?;

    let mut report = CofiberReport { lift: None, obstruction: None, probes: probes.len(), slots_checked: 0 };
    let Some(lift_class) = tau.preimage(&class) else {
        let coker = tau.cokernel();
        let c = coker.coords(&class).expect("cokernel is a quotient of the target");
        report.obstruction = Some(format!("{c:?} in coker = {coker}"));
        return Ok(report);
    };
    let target = sp.shift(-1);
    let lift = lower.to_filtered_map(&r, &target, &h_lower.lift(&lift_class))?;
    report.lift = Some(lift_class);

    let incl = cofiber_inclusion(p, q);
    let sf = f.suspend(1).shift(-1);
    let sq1 = sq.shift(-1);
    let objects = [p, q, &r, &target, &sq1];
    let maps = [f, &incl, &lift, &sf];
    let t = objects.iter().filter(|o| !o.is_empty_window()).map(|o| o.hi()).max().unwrap_or(0);
    for a in probes {
        let t = if a.is_empty_window() { t } else { t.max(a.hi()) };
        let homs = (0..4)
            .map(|i| successor_hom_map_upto(a, maps[i], objects[i], objects[i + 1], t).map(|x| x.2))
            .collect::<Result<Vec<_>>>()?;
        for (i, name) in ["Q", "R", "sh^-1 ΣP"].iter().enumerate() {
            report.slots_checked += 1;
            if !is_exact(&homs[i], &homs[i + 1]) {
                return Err(Error::violation(format!(
                    "successor homs not exact at {name} for a probe, after a valid lift"
                )));
            }
        }
    }
    Ok(report)
}

/// `S^{0,0} → Cτ`, whose connecting map lifts along τ.
pub fn ctau_fixture() -> (FilteredMap, FilteredComplex, FilteredComplex) {
    let p = sphere(0, 0);
    let q = mod_tau(&p);
    let f = FilteredMap::from_fn(&p, &q, |m| cone_inclusion(p.level(m - 2), p.level(m)));
    (f, p, q)
}

/// `τ: S^{0,-1} → S^{0,0}` with its levelwise cofiber; the connecting map does not lift.
pub fn no_lift_fixture() -> (FilteredMap, FilteredComplex, FilteredComplex) {
    let (p, q) = (sphere(0, -1), sphere(0, 0));
    let f = FilteredMap::from_fn(&p, &q, |m| p.map(m));
    (f, p, q)
}

/// Spheres with `t` in `t0..=t1` and `w` in `w0..=w1`, plus `Cτ`.
pub fn default_probes((t0, t1): (i32, i32), (w0, w1): (i32, i32)) -> Vec<FilteredComplex> {
    let mut v: Vec<FilteredComplex> = (t0..=t1).flat_map(|t| (w0..=w1).map(move |w| sphere(t, w))).collect();
    v.push(mod_tau(&sphere(0, 0)));
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ctau_sequence_lifts() {
        let (f, p, q) = ctau_fixture();
        let r = cofiber_preservation_check(&f, &p, &q, &default_probes((-1, 2), (-2, 2))).unwrap();
        assert!(r.passed());
        assert_eq!(r.slots_checked, 3 * r.probes);
    }

    #[test]
    fn tau_sequence_is_obstructed() {
        let (f, p, q) = no_lift_fixture();
        let r = cofiber_preservation_check(&f, &p, &q, &default_probes((0, 1), (0, 1))).unwrap();
        assert!(!r.passed());
        assert!(r.obstruction.is_some());
    }

    #[test]
    fn zero_connecting_map_lifts() {
        let q = sphere(1, 0).direct_sum(&sphere(0, 0));
        let p = FilteredComplex::zero();
        let f = FilteredMap::zero();
        let r = cofiber_preservation_check(&f, &p, &q, &default_probes((0, 1), (-1, 1))).unwrap();
        assert!(r.passed());
    }
}
