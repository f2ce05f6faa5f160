use std::process::{Command, Output};

use serde_json::Value;

fn pfc8(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pfc8")).args(args).output().expect("binary runs")
}

fn json_stdout(args: &[&str]) -> Value {
    let out = pfc8(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn error_kind(out: &Output) -> String {
    let v: Value = serde_json::from_slice(&out.stderr).expect("stderr is a JSON error object");
    v["error"]["kind"].as_str().unwrap().to_string()
}

#[test]
fn lists_the_catalog() {
    let v = json_stdout(&["groups", "list"]);
    let aut: Vec<u64> = v["catalog"].as_array().unwrap().iter().map(|g| g["aut_order"].as_u64().unwrap()).collect();
    assert_eq!(aut, [168, 8, 4, 8, 24]);
}

#[test]
fn computes_cohomology() {
    let v = json_stdout(&["cohomology", "--group", "D8", "--degree", "3", "--coeffs", "torus"]);
    assert_eq!(v["invariant_factors"], serde_json::json!([2, 2, 4]));
    let v = json_stdout(&["cohomology", "--group", "Q8", "--degree", "4", "--coeffs", "int"]);
    assert_eq!(v["invariant_factors"], serde_json::json!([8]));
}

#[test]
fn cache_directory_is_populated_and_reused() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let args = ["--cache-dir", d, "cohomology", "--group", "Z4xZ2", "--degree", "3"];
    let first = json_stdout(&args);
    assert!(std::fs::read_dir(dir.path()).unwrap().count() > 0);
    assert_eq!(json_stdout(&args), first);
}

#[test]
fn orbits_and_omega() {
    let v = json_stdout(&["orbits", "--group", "Z4xZ2"]);
    assert_eq!(v["orbits"].as_array().unwrap().len(), 9);
    let v = json_stdout(&["omega", "--group", "D8", "--subgroup", "0,1,2,3"]);
    assert_eq!(v["order"], 4);
}

#[test]
fn accepts_group_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("z8.json");
    let table: Vec<Vec<usize>> = (0..8).map(|i| (0..8).map(|j| (i + j) % 8).collect()).collect();
    std::fs::write(&path, serde_json::json!({ "name": "cyclic", "order": 8, "table": table }).to_string()).unwrap();
    let v = json_stdout(&["omega", "--group", path.to_str().unwrap(), "--subgroup", "0,4"]);
    assert_eq!(v["catalog_group"], "Z8");
    assert_eq!(v["order"], 4);
}

#[test]
fn classification_counts() {
    assert_eq!(json_stdout(&["classify", "tensor"])["count"], 47);
    assert_eq!(json_stdout(&["--threads", "2", "classify", "morita"])["count"], 38);
    let v = json_stdout(&["doubles", "census"]);
    assert_eq!((v["commutative"].as_u64(), v["noncommutative"].as_u64()), (Some(18), Some(20)));
}

#[test]
fn report_is_written_and_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        assert!(pfc8(&["--threads", "2", "report", "--format", "json", "--out", p.to_str().unwrap()]).status.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let md = pfc8(&["report", "--format", "md"]);
    assert!(String::from_utf8(md.stdout).unwrap().contains("38 Morita classes"));
}

#[test]
fn bad_arguments_exit_with_code_two() {
    assert_eq!(pfc8(&["cohomology", "--group", "D8"]).status.code(), Some(2));
    assert_eq!(pfc8(&["report", "--format", "pdf"]).status.code(), Some(2));
    assert_eq!(pfc8(&["--max-denominator-exp", "0", "groups", "list"]).status.code(), Some(2));
}

#[test]
fn contract_violations_exit_with_json_errors() {
    let out = pfc8(&["omega", "--group", "D8", "--subgroup", "0,4"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(error_kind(&out), "invalid-input");
    let out = pfc8(&["cohomology", "--group", "no-such-group", "--degree", "2"]);
    assert_eq!(out.status.code(), Some(1));
    let out = pfc8(&["cohomology", "--group", "D8", "--degree", "5", "--coeffs", "int"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(error_kind(&out), "cohomology");
}
