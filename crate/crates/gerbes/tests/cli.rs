use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name).to_string_lossy().into_owned()
}

fn gerbes(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gerbes")).args(args).output().expect("binary runs")
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&o.stdout)))
}

#[test]
fn decomposable_demo_succeeds() {
    let o = gerbes(&["demo", "decomposable", "--p", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = stdout_json(&o);
    assert_eq!(v["kind"], "reduction_report");
    assert_eq!(v["all_passed"], true);
    assert_eq!(v["dd_order"], 2);
}

#[test]
fn trivializing_the_cup_gerbe_is_obstructed() {
    let o = gerbes(&["deligne", "trivialize", &fixture("cup_gerbe.json")]);
    assert_eq!(o.status.code(), Some(2));
    let v = stdout_json(&o);
    assert_eq!(v["kind"], "obstruction");
    assert_eq!(v["class"]["order"], 2);
    assert_eq!(v["class"]["torsion"][0][0], 2);
    assert!(!o.stderr.is_empty());
}

#[test]
fn unknown_flag_prints_usage() {
    let o = gerbes(&["gerbe", "check", "--frobnicate", &fixture("cup_gerbe.json")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(o.stdout.is_empty());
    assert!(String::from_utf8_lossy(&o.stderr).contains("Usage:"));
}

#[test]
fn missing_and_malformed_files_are_io_errors() {
    let o = gerbes(&["gerbe", "check", "/nonexistent/gerbe.json"]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(stdout_json(&o)["error"], "io");

    let dir = std::env::temp_dir().join(format!("gerbes-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, r#"{"schema": "v1", "kind": "cochain", "complex": "sphere2", "degree": 0, "ring": "Q", "values": [[[0], "1/0"]]}"#).unwrap();
    let o = gerbes(&["complex", "coboundary", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(stdout_json(&o)["pointer"], "/values/0/1");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn validation_failures_exit_one() {
    let dir = std::env::temp_dir().join(format!("gerbes-cli-v-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let zero = dir.join("zero.json");
    std::fs::write(&zero, r#"{"schema": "v1", "kind": "gerbe", "complex": "sphere2"}"#).unwrap();
    let o = gerbes(&["gerbe", "tensor", &fixture("cup_gerbe.json"), zero.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout_json(&o)["error"], "validation");
    // a document of the wrong kind is an input error
    let o = gerbes(&["gerbe", "check", &fixture("flat_cocycle_sphere2.json")]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(stdout_json(&o)["pointer"], "/kind");
    let o = gerbes(&["complex", "fixture", "klein_bottle"]);
    assert_eq!(o.status.code(), Some(1));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn checks_and_reports_on_shipped_fixtures() {
    let cup = fixture("cup_gerbe.json");
    let section = fixture("clock_shift_section.json");
    let product = fixture("rp2xs1_product.json");
    let ok = |args: &[&str]| {
        let o = gerbes(args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        stdout_json(&o)
    };
    assert_eq!(ok(&["gerbe", "check", &cup])["cocycle"], true);
    assert_eq!(ok(&["gerbe", "class", &cup])["order"], 2);
    assert_eq!(ok(&["morphism", "check", &section])["valid"], true);
    assert_eq!(ok(&["sections", "inner", &section, &section])["dimension"], 1);
    assert_eq!(ok(&["sections", "axioms", &cup])["all_passed"], true);
    assert_eq!(ok(&["sections", "obstruction", &cup])["certified_empty"], false);
    assert_eq!(ok(&["reduce", "section", "--product", &product, &section])["relations_hold"], true);
    assert_eq!(ok(&["deligne", "check", &fixture("flat_cocycle_sphere2.json")])["valid"], true);
    let hol = ok(&["gerbe", "holonomy", &cup, "--surface", "sphere2", "--map", &fixture("sphere2_to_top_simplex.json")]);
    assert_eq!(hol["holonomy"], "0/1");
    let groups = ok(&["complex", "cohomology", "--ring", "QmodZ", &fixture("rp2_6.json")]);
    assert_eq!(groups["groups"][1]["torsion"][0], 2);
    assert_eq!(ok(&["deligne", "cohomology", "--n", "2", "sphere2"])["all_verified"], true);
}

#[test]
fn output_is_deterministic() {
    let args = ["--seed", "7", "demo", "selftest", "--samples", "9"];
    let a = gerbes(&args);
    let b = gerbes(&args);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stdout));
    assert_eq!(a.stdout, b.stdout);
    let c = gerbes(&["morphism", "det", &fixture("clock_shift_section.json")]);
    let d = gerbes(&["morphism", "det", &fixture("clock_shift_section.json")]);
    assert_eq!(c.stdout, d.stdout);
}

#[test]
fn fmt_reproduces_every_fixture() {
    for name in ["cup_gerbe.json", "clock_shift_section.json", "rp2xs1_product.json", "cochain_circle4.json"] {
        let path = fixture(name);
        let o = gerbes(&["fmt", &path]);
        assert_eq!(o.status.code(), Some(0));
        assert_eq!(o.stdout, std::fs::read(&path).unwrap(), "{name}");
    }
}

#[test]
fn decomposable_demo_on_projective_three_space() {
    // L(2,1) = ℝP³, 11 vertices
    let lens = fixture("rp3_11.json");
    let o = gerbes(&["complex", "info", &lens]);
    let groups: Vec<Value> = stdout_json(&o)["integral_cohomology"].as_array().unwrap().iter().map(|g| g["display"].clone()).collect();
    assert_eq!(groups, ["Z^1", "0", "Z/2", "Z^1"]);
    let o = gerbes(&["demo", "decomposable", "--p", "2", "--lens", &lens]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = stdout_json(&o);
    assert_eq!(v["all_passed"], true);
    assert_eq!(v["dd_order"], 2);
}
