//! Seeded property suites shared by `pageturner verify` and the acceptance tests.

pub mod gen;

use std::time::Instant;

use rand::Rng;
use serde::Serialize;

use crate::complex::{
    beilinson_truncate, check_pages_against_oracle, day_convolution_complex, e2_homotopy, is_levelwise_injective,
    is_levelwise_quasi_iso, levelwise_cofiber, mod_tau, page, pi_tw, same_levelwise_homology, sphere, spiral_sequence,
    weight_at_least, FilteredComplex,
};
use crate::cubical::{box_product, is_isomorphic, Budget, CubicalMap, CubicalSet};
use crate::filtered_cubical::{
    check_adjunction, day_convolution, free_filtered, lax_naturality, pullback_comparison, skeletal_filtration,
    FilteredCubicalMap, FilteredCubicalSet,
};
use crate::hom::{
    cofiber_preservation_check, ctau_fixture, ctau_hom_comparison, default_probes, graded_cofiber_check,
    no_lift_fixture, successor_hom,
};
use crate::rees::{gr_rees, nu, rees_tower, semisynthetic_hom, Base, Module, ModuleSpec};
use crate::{Error, Result};
use gen::Rng64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Size {
    Small,
    Full,
}

/// One acceptance criterion: a seeded property check over a number of instances.
pub struct Suite {
    pub id: u8,
    pub name: &'static str,
    /// Instances at full size.
    pub full: usize,
    pub small: usize,
    /// Wall-clock limit in seconds, at full size.
    pub limit: Option<f64>,
    run: fn(&mut Rng64, usize) -> Result<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Outcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub instances: usize,
    pub seconds: f64,
    pub limit_seconds: Option<f64>,
    pub detail: String,
    /// 0 when passed, otherwise the exit code of the failure class.
    pub exit_code: i32,
}

impl Outcome {
    pub fn line(&self) -> String {
        format!(
            "[{}] criterion {:>2} {}: {} instances, {:.2}s | {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.instances,
            self.seconds,
            self.detail
        )
    }
}

pub const SUITES: [Suite; 12] = [
    Suite { id: 1, name: "adjunction", full: 50, small: 10, limit: Some(30.0), run: adjunction },
    Suite { id: 2, name: "pullback theorem", full: 30, small: 8, limit: Some(60.0), run: pullback },
    Suite { id: 3, name: "lax structure", full: 20, small: 5, limit: Some(30.0), run: lax },
    Suite { id: 4, name: "homotopy-group formula", full: 30, small: 6, limit: Some(60.0), run: homotopy_formula },
    Suite { id: 5, name: "spiral sequence", full: 30, small: 6, limit: Some(60.0), run: spiral },
    Suite { id: 6, name: "page oracle", full: 20, small: 5, limit: Some(60.0), run: page_oracle },
    Suite { id: 7, name: "E2-homotopy", full: 30, small: 6, limit: None, run: e2 },
    Suite { id: 8, name: "Beilinson truncation", full: 20, small: 5, limit: None, run: truncation },
    Suite { id: 9, name: "weight additivity", full: 20, small: 5, limit: None, run: weight_additivity },
    Suite { id: 10, name: "C-tau calculus", full: 20, small: 5, limit: None, run: ctau },
    Suite { id: 11, name: "cofiber preservation", full: 1, small: 1, limit: None, run: cofiber },
    Suite { id: 12, name: "Rees demo", full: 4, small: 2, limit: Some(5.0), run: rees },
];

pub fn suite(id: u8) -> Option<&'static Suite> {
    SUITES.iter().find(|s| s.id == id)
}

pub fn run_suite(s: &Suite, seed: u64, size: Size) -> Outcome {
    let instances = match size {
        Size::Small => s.small,
        Size::Full => s.full,
    };
    let mut rng = gen::rng(seed, s.id as u64);
    let start = Instant::now();
    let result = (s.run)(&mut rng, instances);
    let seconds = start.elapsed().as_secs_f64();
    let (mut passed, mut detail, mut exit_code) = match result {
        Ok(d) => (true, d, 0),
        Err(e) => (false, e.to_string(), e.exit_code()),
    };
    if let Some(limit) = s.limit.filter(|_| passed && size == Size::Full) {
        if seconds > limit {
            passed = false;
            exit_code = 2;
            detail = format!("{detail}; took {seconds:.1}s, limit {limit}s");
        }
    }
    Outcome { id: s.id, name: s.name, passed, instances, seconds, limit_seconds: s.limit, detail, exit_code }
}

pub fn run_all(seed: u64, size: Size) -> Vec<Outcome> {
    SUITES.iter().map(|s| run_suite(s, seed, size)).collect()
}

fn budget() -> Budget {
    Budget::from_env()
}

fn to_terminal(x: &FilteredCubicalSet, pt: &FilteredCubicalSet) -> FilteredCubicalMap {
    let maps = (x.lo()..=x.hi().max(0)).map(|m| CubicalMap::to_point(x.level(m))).collect();
    FilteredCubicalMap::new(x, pt, x.lo(), maps).expect("maps to the point commute")
}

fn point() -> FilteredCubicalSet {
    free_filtered(0, &CubicalSet::point())
}

fn adjunction(rng: &mut Rng64, n: usize) -> Result<String> {
    let mut maps = 0;
    for _ in 0..n {
        let k = gen::random_cubical_set(rng, 2);
        let x = gen::random_filtered_cubical(rng, 2);
        maps += check_adjunction(&k, &x, &mut budget())?.filtered_maps;
    }
    Ok(format!("{maps} maps matched elementwise by the transposes"))
}

fn pullback(rng: &mut Rng64, n: usize) -> Result<String> {
    let mut cubes = 0;
    let mut kinds = [0usize; 3];
    for i in 0..n {
        let mut b = budget();
        let (x, y, z, f, g, kind) = match i % 3 {
            0 => {
                let (x, y, pt) = (gen::random_filtered_cubical(rng, 1), gen::random_filtered_cubical(rng, 1), point());
                let (f, g) = (to_terminal(&x, &pt), to_terminal(&y, &pt));
                (x, y, pt, f, g, 0)
            }
            1 => {
                let x = gen::random_filtered_cubical(rng, 2);
                let id = FilteredCubicalMap::identity(&x);
                (x.clone(), x.clone(), x, id.clone(), id, 1)
            }
            _ => {
                let z = gen::random_filtered_cubical(rng, 1);
                let x = gen::random_filtered_cubical(rng, 1);
                match gen::random_filtered_map(rng, &x, &z, &mut b)? {
                    Some(f) => {
                        let g = FilteredCubicalMap::identity(&z);
                        (x, z.clone(), z, f, g, 2)
                    }
                    None => {
                        let pt = point();
                        let (f, g) = (to_terminal(&x, &pt), to_terminal(&z, &pt));
                        (x, z, pt, f, g, 0)
                    }
                }
            }
        };
        kinds[kind] += 1;
        let w = pullback_comparison(&x, &y, &z, &f, &g, 2, &mut b)?;
        cubes += w.lhs_counts.iter().sum::<usize>();
    }
    Ok(format!(
        "isomorphic through dimension 2 on {} terminal, {} identity-leg, {} random-leg diagrams ({cubes} cubes)",
        kinds[0], kinds[1], kinds[2]
    ))
}

fn random_target(
    rng: &mut Rng64,
    x: &FilteredCubicalSet,
    b: &mut Budget,
) -> Result<(FilteredCubicalSet, FilteredCubicalMap)> {
    match rng.gen_range(0..3) {
        0 => Ok((x.clone(), FilteredCubicalMap::identity(x))),
        1 => {
            let pt = point();
            let f = to_terminal(x, &pt);
            Ok((pt, f))
        }
        _ => {
            let x2 = gen::random_filtered_cubical(rng, 1);
            match gen::random_filtered_map(rng, x, &x2, b)? {
                Some(f) => Ok((x2, f)),
                None => Ok((x.clone(), FilteredCubicalMap::identity(x))),
            }
        }
    }
}

fn lax(rng: &mut Rng64, n: usize) -> Result<String> {
    let mut squares = 0;
    for _ in 0..n {
        let mut b = budget();
        let x = gen::random_filtered_cubical(rng, 1);
        let y = gen::random_filtered_cubical(rng, 1);
        let (x2, f) = random_target(rng, &x, &mut b)?;
        let (y2, g) = random_target(rng, &y, &mut b)?;
        squares += lax_naturality((&x, &x2, &f), (&y, &y2, &g), 2, &mut b)?;
    }
    let mut levels = 0;
    for _ in 0..n {
        let mut b = budget();
        let (k, l) = (gen::random_cubical_set(rng, 2), gen::random_cubical_set(rng, 1));
        let kl = box_product(&k, &l).set;
        let day = day_convolution(&skeletal_filtration(&k), &skeletal_filtration(&l))?;
        let sk = skeletal_filtration(&kl);
        for m in 0..=kl.dim_cap().max(0) + 1 {
            if !is_isomorphic(day.result.level(m), sk.level(m), &mut b)? {
                return Err(Error::violation(format!("sk K ⊛ sk L differs from sk(K ⊠ L) at level {m}")));
            }
            levels += 1;
        }
        let (a, c) = (rng.gen_range(0..=2), rng.gen_range(0..=2));
        let free = day_convolution(&free_filtered(a, &k), &free_filtered(c, &l))?;
        if free.result.lo() != a + c || !is_isomorphic(free.result.level(a + c), &kl, &mut b)? {
            return Err(Error::violation("F_a K ⊛ F_b L differs from F_{a+b}(K ⊠ L)"));
        }
    }
    Ok(format!("{squares} naturality cubes commute; sk strong monoidal on {levels} levels"))
}

const T_RANGE: (i32, i32) = (-1, 3);
const W_RANGE: (i32, i32) = (-2, 2);

fn homotopy_formula(rng: &mut Rng64, n: usize) -> Result<String> {
    let mut checked = 0;
    for _ in 0..n {
        let y = gen::random_complex(rng, 0.3);
        for t in T_RANGE.0..=T_RANGE.1 {
            for w in W_RANGE.0..=W_RANGE.1 {
                let lhs = successor_hom(&sphere(t, w), &y)?.group;
                let rhs = pi_tw(&y, t, w);
                if !lhs.is_isomorphic(&rhs) {
                    return Err(Error::violation(format!("[S^({t},{w}), Y]† = {lhs} but π_({t},{w}) Y = {rhs}")));
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} bidegrees agree over a 5×5 window"))
}

fn spiral(rng: &mut Rng64, n: usize) -> Result<String> {
    let mut slots = 0;
    let mut xs: Vec<(FilteredComplex, Option<i64>)> = [2, 3, 5].iter().map(|&p| (gen::cone_p(p), Some(p))).collect();
    while xs.len() < n.max(3) {
        xs.push((gen::random_complex(rng, 0.3), None));
    }
    for (x, p) in &xs {
        let r = spiral_sequence(x, (-1, 3), (-1, 2))?;
        if let Some(f) = r.failures.first() {
            return Err(Error::violation(f.clone()));
        }
        slots += r.exact_slots + r.couple_checks;
        if let Some(p) = p {
            let e = r.entries.iter().find(|e| e.t == 0 && e.w == 0).expect("(0,0) in range");
            if e.pi_tau != format!("Z/{p}") {
                return Err(Error::violation(format!("cone({p}) gives E2 = {} at (0,0)", e.pi_tau)));
            }
        }
    }
    Ok(format!("{} complexes, {slots} exactness and couple checks, cone(p) gives Z/p", xs.len()))
}

fn page_oracle(rng: &mut Rng64, n: usize) -> Result<String> {
    for _ in 0..n {
        let x = gen::random_complex(rng, 0.0);
        check_pages_against_oracle(&x, 4)?;
    }
    Ok("derived couples match Z_r/B_r for r ≤ 4".into())
}

fn e2(rng: &mut Rng64, n: usize) -> Result<String> {
    let mut checked = 0;
    for i in 0..n {
        let x = gen::random_complex(rng, if i % 3 == 2 { 1.0 } else { 0.0 });
        let xt = mod_tau(&x);
        let p2 = if is_levelwise_injective(&x) { Some(page(&x, 2)?) } else { None };
        for t in 0..=2 {
            for w in -2..=2 {
                let a = pi_tw(&xt, t, w);
                let b = e2_homotopy(&x, t, w)?;
                if !a.is_isomorphic(&b) {
                    return Err(Error::violation(format!("π_({t},{w})(X//τ) = {a} but E2-homotopy = {b}")));
                }
                if let Some(c) = p2.as_ref().and_then(|p| p.group((t - w, t))) {
                    if !c.is_isomorphic(&b) {
                        return Err(Error::violation(format!("E2 page at ({t},{w}) is {c}, E2-homotopy is {b}")));
                    }
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} bidegrees agree"))
}

fn truncation(rng: &mut Rng64, n: usize) -> Result<String> {
    for _ in 0..n {
        let x = gen::random_complex(rng, 0.3);
        let w = rng.gen_range(-1..=1);
        let t = beilinson_truncate(&x, w)?;
        let a = beilinson_truncate(&x.shift(1), w + 1)?.y;
        let b = t.y.shift(1);
        if !same_levelwise_homology(&a, &b, (x.lo() - 3, x.hi() + 2)) {
            return Err(Error::violation(format!("τ_≥{} sh X and sh τ_≥{w} X differ", w + 1)));
        }
        let again = beilinson_truncate(&t.y, w)?;
        let range = (t.y.lo().min(x.lo()) - 1, t.y.hi().max(x.hi()) + 1);
        if !is_levelwise_quasi_iso(&again.map, &again.y, &t.y, range) {
            return Err(Error::violation("truncation is not idempotent"));
        }
    }
    Ok("postconditions, shift compatibility and idempotence hold".into())
}

fn weight_additivity(rng: &mut Rng64, n: usize) -> Result<String> {
    for _ in 0..n {
        let (w1, w2) = (rng.gen_range(-1..=1), rng.gen_range(-1..=1));
        let x = beilinson_truncate(&gen::random_complex(rng, 0.0), w1)?.y;
        let y = beilinson_truncate(&gen::random_complex(rng, 0.0), w2)?.y;
        for (z, w) in [(&x, w1), (&y, w2)] {
            if !weight_at_least(z, w).holds {
                return Err(Error::violation(format!("input lost its weight-{w} certificate")));
            }
        }
        let d = day_convolution_complex(&x, &y)?;
        let r = weight_at_least(&d, w1 + w2);
        if !r.holds {
            return Err(Error::violation(format!("X ⊛ Y fails weight ≥ {} at {:?}", w1 + w2, r.certificate)));
        }
    }
    Ok("X ⊛ Y has weight ≥ w₁ + w₂".into())
}

fn ctau(rng: &mut Rng64, n: usize) -> Result<String> {
    let mut entries = 0;
    let mut graded = 0;
    let mut probes = 0;
    for _ in 0..n {
        let x = gen::random_cell_complex(rng).complex().clone();
        let y = gen::random_complex(rng, 0.2);
        entries += ctau_hom_comparison(&x, &y, (-1, 2), (-1, 1))?.entries.len();

        let f = gen::random_filtered_map_complex(rng, &x, &y)?;
        let g = graded_cofiber_check(&f, &x, &y, (-1, 4), (-1, 3))?;
        if let Some(m) = g.mismatches.first() {
            return Err(Error::violation(format!("gr of the successor cofiber does not split: {m}")));
        }
        graded += g.checked;

        let tau = y.tau();
        let w = levelwise_cofiber(&tau, &y, &y.shift(1))?;
        for a in default_probes((-1, 2), (-1, 1)) {
            let h = successor_hom(&a, &w)?.group;
            if !h.is_trivial() {
                return Err(Error::violation(format!("[A, sh Y / Y]† = {h} for a probe")));
            }
            probes += 1;
        }
    }
    Ok(format!("{entries} comparison entries, {graded} graded splittings, {probes} vanishing probes"))
}

fn cofiber(_: &mut Rng64, _: usize) -> Result<String> {
    let (f, p, q) = ctau_fixture();
    let r = cofiber_preservation_check(&f, &p, &q, &default_probes((-1, 2), (-2, 2)))?;
    if !r.passed() || r.slots_checked == 0 {
        return Err(Error::violation("the τ-sequence fixture does not lift"));
    }
    let (f, p, q) = no_lift_fixture();
    let bad = cofiber_preservation_check(&f, &p, &q, &default_probes((0, 1), (0, 1)))?;
    let failed = !bad.passed();
    let Some(obstruction) = bad.obstruction.filter(|_| failed) else {
        return Err(Error::violation("the no-lift fixture reported a lift"));
    };
    Ok(format!("τ-sequence exact on {} probe slots; no-lift obstruction {obstruction}", r.slots_checked))
}

fn rees(_: &mut Rng64, n: usize) -> Result<String> {
    let primes = [2, 3, 5, 7];
    for &p in primes.iter().take(n.max(1)) {
        let base = Base::integers(p);
        let gr = gr_rees(&rees_tower(&base, 4)?);
        if gr.grades.len() != 5 || gr.grades.iter().any(|g| g.orders() != [p]) {
            return Err(Error::violation(format!("gr of the ({p})-adic tower is not F_{p} in grades 0..4")));
        }
        if !gr.t.iter().all(|t| t.is_iso()) {
            return Err(Error::violation("t-multiplication is not an isomorphism"));
        }
        let z = nu(&Module::new(&base, &ModuleSpec { summands: vec![0] })?, 4);
        let h = semisynthetic_hom(&z, &z)?.group;
        if h.orders() != [0] {
            return Err(Error::violation(format!("[ν ℤ, ν ℤ]† = {h} for p = {p}")));
        }
    }
    Ok(format!("F_p in grades 0..4 and [νℤ, νℤ]† = Z for p in {:?}", &primes[..n.clamp(1, 4)]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suites_pass() {
        for o in run_all(1, Size::Small) {
            println!("{}", o.line());
            assert!(o.passed, "{}", o.line());
        }
    }
}
