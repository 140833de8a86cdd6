use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use casalvero_cli::{parse_and_dispatch, MANIFEST_NAME};

fn casalvero(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_casalvero"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) {
    fs::write(dir.join(name), text).unwrap();
}

const NODES: &str = r#"{"nodes":[{"re":"0"},{"re":"1/2","im":"1"},{"re":"-2"},{"re":"3/7"}]}"#;
const CUBIC: &str = r#"{"coeffs":[{"re":"0"},{"re":"-3"},{"re":"0"},{"re":"1"}]}"#;

fn manifest(dir: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(dir.join(MANIFEST_NAME)).unwrap()).unwrap()
}

#[test]
fn goncharov_all_methods_agree() {
    let tmp = tempfile::tempdir().unwrap();
    write(tmp.path(), "nodes.json", NODES);
    let out = casalvero(tmp.path(), &["goncharov", "--nodes", "nodes.json", "--method", "all", "--out", "o"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("o/goncharov.json")).unwrap()).unwrap();
    assert_eq!(report["agree"], true);
    assert_eq!(report["constructions"].as_array().unwrap().len(), 7);
    let m = manifest(&tmp.path().join("o"));
    assert_eq!(m["command"], "goncharov");
    assert_eq!(m["exit_code"], 0);
    assert_eq!(m["input_digests"]["nodes.json"].as_str().unwrap().len(), 64);
}

#[test]
fn exact_reruns_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    write(tmp.path(), "nodes.json", NODES);
    write(tmp.path(), "f.json", CUBIC);
    for out in ["a", "b"] {
        assert_eq!(parse_and_dispatch(["goncharov", "--nodes", &tmp.path().join("nodes.json").display().to_string(), "--out", &tmp.path().join(out).display().to_string()]), 0);
        assert_eq!(parse_and_dispatch(["check", "--poly", &tmp.path().join("f.json").display().to_string(), "--out", &tmp.path().join(out).display().to_string()]), 0);
    }
    for f in ["goncharov.json", "check.json"] {
        assert_eq!(
            fs::read(tmp.path().join("a").join(f)).unwrap(),
            fs::read(tmp.path().join("b").join(f)).unwrap()
        );
    }
}

#[test]
fn verify_writes_one_csv_row_per_trial() {
    let tmp = tempfile::tempdir().unwrap();
    let out = casalvero(tmp.path(), &["verify", "--identity", "EQ21", "--trials", "500", "--seed", "7", "--out", "o"]);
    assert_eq!(out.status.code(), Some(0));
    let csv = fs::read_to_string(tmp.path().join("o/verify_EQ21.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 501);
    assert_eq!(lines[0], "identity_id,trial,degree,seed,residual,scale,passed");
    assert!(lines[1..].iter().all(|l| l.ends_with(",true")));
    assert_eq!(manifest(&tmp.path().join("o"))["seeds"], serde_json::json!([7]));
}

#[test]
fn check_reports_non_ca_and_exits_zero() {
    let tmp = tempfile::tempdir().unwrap();
    write(tmp.path(), "f.json", CUBIC);
    let out = casalvero(tmp.path(), &["check", "--poly", "f.json", "--out", "o"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("non_CA"));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("o/check.json")).unwrap()).unwrap();
    assert_eq!(report["verdict"], "non_CA");
    assert_eq!(report["method"], "exact");
}

#[test]
fn missing_input_is_exit_two() {
    let tmp = tempfile::tempdir().unwrap();
    let out = casalvero(tmp.path(), &["check", "--poly", "missing.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("missing.json"));
    assert!(!tmp.path().join("casalvero-out").exists());
}

#[test]
fn usage_errors_are_exit_two() {
    assert_eq!(parse_and_dispatch(["frobnicate"]), 2);
    assert_eq!(parse_and_dispatch(["check", "--poly", "x.json", "--bogus"]), 2);
    assert_eq!(parse_and_dispatch(["check", "--poly", "x.json", "--exact", "--float"]), 2);
    assert_eq!(parse_and_dispatch(Vec::<String>::new()), 2);
    assert_eq!(parse_and_dispatch(["--help"]), 0);
}

#[test]
fn exact_flag_rejects_float_input() {
    let tmp = tempfile::tempdir().unwrap();
    write(tmp.path(), "g.json", r#"{"coeffs":[{"re":"0.5"},{"re":"1"}]}"#);
    let out = casalvero(tmp.path(), &["check", "--poly", "g.json", "--exact"]);
    assert_eq!(out.status.code(), Some(2));
    let out = casalvero(tmp.path(), &["search", "--exact"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn malformed_polynomial_names_the_field() {
    let tmp = tempfile::tempdir().unwrap();
    write(tmp.path(), "bad.json", r#"{"coeffs":[{"re":"1"},{"im":"2"}]}"#);
    let out = casalvero(tmp.path(), &["check", "--poly", "bad.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("coeffs[1].re"));
}

#[test]
fn bounds_are_ordered() {
    let tmp = tempfile::tempdir().unwrap();
    write(tmp.path(), "nodes.json", NODES);
    let out = casalvero(tmp.path(), &["bounds", "--nodes", "nodes.json", "--z", "1/3", "--z", "(0.5,-1)", "--out", "o"]);
    assert_eq!(out.status.code(), Some(0));
    let rows: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("o/bounds.json")).unwrap()).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 2);
    assert!(rows.as_array().unwrap().iter().all(|r| r["ordered"] == true));
}

#[test]
fn degree_two_schoenberg_equality_is_not_collinear() {
    // Every pair of roots gives gap 0, collinear through the origin or not.
    let tmp = tempfile::tempdir().unwrap();
    let out = casalvero(tmp.path(), &["schoenberg", "--degree", "2", "--trials", "50", "--out", "o"]);
    assert_eq!(out.status.code(), Some(1));
    let csv = fs::read_to_string(tmp.path().join("o/schoenberg.csv")).unwrap();
    assert_eq!(csv.lines().count(), 51);
}

#[test]
fn small_search_is_clean() {
    let tmp = tempfile::tempdir().unwrap();
    let out = casalvero(tmp.path(), &["search", "--degree", "4", "--restarts", "6", "--seed", "3", "--out", "o"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(tmp.path().join("o/search_n4.json").exists());
    assert!(!tmp.path().join("o/findings").exists());
    assert_eq!(fs::read_to_string(tmp.path().join("o/search.csv")).unwrap().lines().count(), 7);
}
