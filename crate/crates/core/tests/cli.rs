use std::path::Path;
use std::process::{Command, Output};

use approx::assert_abs_diff_eq;
use serde_json::Value;
use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dwradius"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, json: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, json).unwrap();
    path.to_str().unwrap().to_string()
}

fn nilpotent(dir: &Path) -> String {
    write(dir, "t.json", r#"{"n": 2, "re": [[0, 2], [0, 0]]}"#)
}

fn identity(dir: &Path) -> String {
    write(dir, "i.json", r#"{"n": 2, "re": [[1, 0], [0, 1]]}"#)
}

#[test]
fn compute_json_on_nilpotent() {
    let dir = TempDir::new().unwrap();
    let out = run(&["compute", "--matrix", &nilpotent(dir.path()), "--norms", "op,fro", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_abs_diff_eq!(v["w"]["value"].as_f64().unwrap(), 1.0, epsilon = 1e-8);
    assert_abs_diff_eq!(v["dw"]["value"].as_f64().unwrap(), 4.0, epsilon = 1e-4);
    let op = &v["norms"][0];
    assert_eq!(op["norm"], "op");
    assert_abs_diff_eq!(op["dw_N"]["value"].as_f64().unwrap(), 17f64.sqrt(), epsilon = 1e-8);
}

#[test]
fn compute_text_uses_nine_digits() {
    let dir = TempDir::new().unwrap();
    let out = run(&["compute", "--matrix", &nilpotent(dir.path())]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("4.12310563"));
}

#[test]
fn identity_bounds_report_refuted_violation_with_exit_zero() {
    let dir = TempDir::new().unwrap();
    let out = run(&["bounds", "--matrix", &identity(dir.path()), "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let rows: Vec<Value> = String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    let refuted = rows.iter().find(|r| r["bound"] == "B_REFUTED_UP").unwrap();
    assert_eq!(refuted["satisfied"], false);
    assert_eq!(refuted["norm"], "op");
    assert!(rows.iter().filter(|r| r["bound"] != "B_REFUTED_UP").all(|r| r["satisfied"] == true));
}

#[test]
fn bounds_with_two_matrices_evaluates_triangles() {
    let dir = TempDir::new().unwrap();
    let pair = format!("{},{}", nilpotent(dir.path()), identity(dir.path()));
    let out = run(&["bounds", "--matrix", &pair, "--norms", "op,tr", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    let tri: Vec<Value> = text
        .lines()
        .map(|l| serde_json::from_str::<Value>(l).unwrap())
        .filter(|r| r["bound"] == "B_TRI_DWN")
        .collect();
    assert_eq!(tri.len(), 2);
    assert!(tri.iter().all(|r| r["applicable"] == true && r["satisfied"] == true));
}

#[test]
fn counterexample_defaults_to_identity() {
    let out = run(&["counterexample"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("1.41421356"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["fuzz", "--count", "0"]).status.code(), Some(2));
    assert_eq!(run(&["fuzz", "--classes", "banana"]).status.code(), Some(2));
    assert_eq!(run(&["fuzz", "--norms", "sp:0.5"]).status.code(), Some(2));
    assert_eq!(run(&["compute", "--matrix", "/nonexistent.json"]).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    let dir = TempDir::new().unwrap();
    let bad = write(dir.path(), "bad.json", r#"{"n": 2, "re": [[1, 2]]}"#);
    assert_eq!(run(&["compute", "--matrix", &bad]).status.code(), Some(2));
}

#[test]
fn fuzz_json_is_reproducible_across_thread_counts() {
    let args = [
        "fuzz", "--dims", "2,3", "--classes", "ginibre,nilpotent,projection", "--norms", "op,tr", "--count", "6",
        "--oracle-samples", "2000", "--format", "json",
    ];
    let one = Command::new(env!("CARGO_BIN_EXE_dwradius"))
        .args(args)
        .env("DWRADIUS_THREADS", "1")
        .output()
        .unwrap();
    let many = Command::new(env!("CARGO_BIN_EXE_dwradius"))
        .args(args)
        .env("DWRADIUS_THREADS", "3")
        .output()
        .unwrap();
    assert_eq!(one.status.code(), Some(0), "{}", String::from_utf8_lossy(&one.stderr));
    assert_eq!(one.stdout, many.stdout);
    let v: Value = serde_json::from_slice(&one.stdout).unwrap();
    assert_eq!(v["samples"], 36);
    assert!(v.get("elapsed").is_none());
}

#[test]
fn fuzz_writes_csv_to_file() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("cells.csv");
    let out = run(&[
        "fuzz", "--dims", "2", "--classes", "hermitian", "--norms", "op", "--count", "3", "--oracle-samples", "0",
        "--format", "csv", "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(&path).unwrap();
    let mut lines = csv.lines();
    assert!(lines.next().unwrap().starts_with("bound,class,norm"));
    assert_eq!(lines.count(), 21);
}

#[test]
fn paper_examples_pass_with_one_expected_discrepancy() {
    let out = run(&["paper-examples"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(!text.contains("FAIL"));
    assert_eq!(text.matches("EXPECTED-DISCREPANCY").count(), 1);
    assert_eq!(run(&["paper-examples", "--format", "csv"]).status.code(), Some(2));
}
