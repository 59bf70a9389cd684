//! Acceptance suite: one line per criterion, full instance counts, wall-clock limits enforced.

use pageturner::verify::{run_suite, Size, SUITES};

const SEED: u64 = 20240917;

#[test]
fn acceptance() {
    let mut failed = Vec::new();
    for s in &SUITES {
        let o = run_suite(s, SEED, Size::Full);
        println!("{}", o.line());
        if o.instances < s.full {
            failed.push(format!("criterion {} ran {} of {} instances", s.id, o.instances, s.full));
        }
        if !o.passed {
            failed.push(o.line());
        }
    }
    assert!(failed.is_empty(), "{}", failed.join("\n"));
}

#[test]
fn other_seeds_pass_small() {
    for seed in [1, 2, 3] {
        for s in &SUITES {
            let o = run_suite(s, seed, Size::Small);
            assert!(o.passed, "seed {seed}: {}", o.line());
        }
    }
}
