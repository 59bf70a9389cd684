use std::path::PathBuf;
use std::process::{Command, Output};

use pageturner::complex::{filtered_from_json, pi_tw};
use pageturner::cubical::{cubical_set_from_json, is_isomorphic, standard_cube, Budget};
use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name).display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pageturner")).args(args).env_remove("PAGETURNER_BUDGET").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn verify_small_passes() {
    let o = run(&["verify", "--seed", "42", "--size", "small"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("12/12 criteria passed"));
}

#[test]
fn cone_pages_show_z_mod_p() {
    let v = json(&run(&["pages", "--in", &fixture("cone_3.json"), "--r", "1..3", "--format", "json"]));
    assert_eq!(v["oracle_checked"], true);
    for page in v["pages"].as_array().unwrap().iter().skip(1) {
        let entries = page["entries"].as_array().unwrap();
        assert_eq!(entries.len(), 1);
        assert_eq!((&entries[0]["s"], &entries[0]["t"], &entries[0]["group"]), (&0.into(), &0.into(), &"Z/3".into()));
    }
    let ascii = stdout(&run(&["pages", "--in", &fixture("cone_3.json"), "--r", "2..2"]));
    assert!(ascii.contains("E_2") && ascii.contains(" 3"));
}

#[test]
fn successor_of_a_skeletal_square_is_the_square() {
    let v = json(&run(&["successor", "--in", &fixture("sk_square.json"), "--dim", "2"]));
    let set = cubical_set_from_json(&v["set"]).unwrap();
    assert!(is_isomorphic(&set, &standard_cube(2), &mut Budget::new(1_000_000)).unwrap());
}

#[test]
fn json_output_is_deterministic() {
    for args in [
        vec!["pages", "--in", "cone_3.json", "--r", "1..4", "--format", "json"],
        vec!["verify", "--seed", "7", "--format", "json"],
        vec!["successor", "--in", "sk_square.json", "--dim", "2"],
    ] {
        let args: Vec<String> =
            args.iter().map(|a| if a.ends_with(".json") { fixture(a) } else { a.to_string() }).collect();
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        assert_eq!(run(&args).stdout, run(&args).stdout);
    }
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["pages", "--in", "/nonexistent.json"]).status.code(), Some(1));
    assert_eq!(run(&["pages", "--in", &fixture("cone_3.json"), "--r", "3..1"]).status.code(), Some(1));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(
        run(&["--budget", "5", "successor", "--in", &fixture("sk_square.json"), "--dim", "2"]).status.code(),
        Some(3)
    );
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn pullback_over_a_point() {
    let v = json(&run(&[
        "pullback-check",
        "--x",
        &fixture("sk_interval.json"),
        "--y",
        &fixture("sk_square.json"),
        "--z",
        &fixture("point.json"),
    ]));
    assert_eq!(v["isomorphism"], true);
    assert_eq!(v["witness"]["lhs_counts"], v["witness"]["rhs_counts"]);
    let o = run(&[
        "pullback-check",
        "--x",
        &fixture("sk_interval.json"),
        "--y",
        &fixture("sk_interval.json"),
        "--z",
        &fixture("sk_square.json"),
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn hom_matches_homotopy() {
    let y = filtered_from_json(&std::fs::read_to_string(fixture("cone_3.json")).unwrap()).unwrap();
    for shift in [0, 1] {
        let s = shift.to_string();
        let v = json(&run(&[
            "hom",
            "--x",
            &fixture("sphere_1_0.cells.json"),
            "--y",
            &fixture("cone_3.json"),
            "--shift",
            &s,
        ]));
        let expected = pi_tw(&y.shift(shift), 1, 0);
        assert_eq!(v["hom"]["group"], expected.to_string());
    }
}

#[test]
fn cofiber_fixtures() {
    let v = json(&run(&["cofiber-check", "--seq", &fixture("ctau_seq.json")]));
    assert_eq!(v["lifts"], true);
    assert!(v["report"]["slots_checked"].as_u64().unwrap() > 0);
    let v = json(&run(&["cofiber-check", "--seq", &fixture("no_lift_seq.json")]));
    assert_eq!(v["lifts"], false);
    assert!(v["report"]["obstruction"].is_string());
}

#[test]
fn rees_tables() {
    let gr = stdout(&run(&["rees", "--ring", "Z", "--ideal", "2", "--depth", "4", "--show", "gr"]));
    assert_eq!(gr.lines().filter(|l| l.contains("Z/2")).count(), 5, "{gr}");
    assert_eq!(gr.lines().filter(|l| l.ends_with(" iso")).count(), 4, "{gr}");
    let v = json(&run(&["rees", "--ideal", "3", "--show", "hom", "--format", "json"]));
    assert_eq!(v["rows"]["semisynthetic"]["group"], "Z");
    let poly = stdout(&run(&["rees", "--ring", "Z[x]/x^3", "--show", "tower"]));
    assert!(poly.contains("Z[x]/(x^3)"), "{poly}");
}

#[test]
fn truncate_and_chart_write_files() {
    let dir = std::env::temp_dir().join(format!("pageturner-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("y.json");
    let v = json(&run(&["truncate", "--in", &fixture("cone_3.json"), "--w", "0", "--out", out.to_str().unwrap()]));
    assert_eq!(v["weight_certified"], true);
    filtered_from_json(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let svg = dir.join("pages.svg");
    let o = run(&[
        "chart",
        "--in",
        &fixture("cone_3.json"),
        "--r",
        "1..2",
        "--format",
        "svg",
        "--out",
        svg.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<svg") && text.contains("E_2") && text.contains("marker-end"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn mod_p_coefficients() {
    // cone(3) mod 3: d_1 is multiplication by 3, so E_1 = E_2 = Z/3 at (0,0) and (1,1)
    let v = json(&run(&["pages", "--in", &fixture("cone_3.json"), "--r", "1..2", "--format", "json", "--coeff", "3"]));
    for page in v["pages"].as_array().unwrap() {
        let entries = page["entries"].as_array().unwrap();
        let at: Vec<(i64, i64)> =
            entries.iter().map(|e| (e["s"].as_i64().unwrap(), e["t"].as_i64().unwrap())).collect();
        assert_eq!(at, [(0, 0), (1, 1)]);
        assert!(entries.iter().all(|e| e["group"] == "Z/3"));
    }
}
