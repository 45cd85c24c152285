use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn linkhom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_linkhom")).args(args).output().expect("run linkhom")
}

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name).to_string_lossy().into_owned()
}

fn scratch(name: &str, contents: &str) -> String {
    let dir = std::env::temp_dir().join(format!("linkhom-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path.to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn classify_prints_record() {
    let o = linkhom(&["classify", "--weights", "13,143,775,620,465"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["ws"]["degree"], 2015);
    assert_eq!(v["mu"], "24192");
    assert_eq!(v["rank"], 0);
    assert_eq!(v["h3"], "(Z_13)^14");
    assert_eq!(v["kind"], "RationalHomologySphere");
    assert_eq!(v["polynomial"], "z0^155+z0 z1^14+z4 z2^2+z2 z3^2+z3 z4^3");
}

#[test]
fn classify_verify_runs_oracles() {
    let o = linkhom(&["classify", "--weights", "77,77,333,180,27", "--verify"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("verify:"));
}

#[test]
fn bad_weights_are_usage_errors() {
    assert_eq!(linkhom(&["classify", "--weights", "1,a"]).status.code(), Some(2));
    assert_eq!(linkhom(&["classify", "--weights", "0,1,2"]).status.code(), Some(2));
    assert_eq!(linkhom(&["classify"]).status.code(), Some(2));
    assert_eq!(linkhom(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn batch_markdown_over_reference_rows() {
    let o = linkhom(&["batch", "--input", &data("table1.csv"), "--emit", "markdown"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.starts_with("| w | Polynomial | Type | d | μ | H₃ |"));
    assert_eq!(text.lines().count(), 2 + 52);
    assert!(text.contains("(Z_13)^14"));
}

#[test]
fn batch_reports_failing_entries() {
    let input = scratch("mixed.csv", "w0,w1,w2,w3,w4,d\n13,143,775,620,465,2015\n2,3,5,7,11,10\n");
    let o = linkhom(&["batch", "--input", &input, "--emit", "jsonl"]);
    assert_eq!(o.status.code(), Some(1));
    let lines: Vec<Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
}

#[test]
fn batch_writes_to_file_and_filters() {
    let input = scratch("flags.jsonl", concat!(
        "{\"weights\":[13,143,775,620,465],\"ke\":true}\n",
        "{\"weights\":[77,77,333,180,27],\"ke\":false}\n",
    ));
    let out = scratch("flags.out.csv", "");
    let o = linkhom(&["batch", "--input", &input, "--format", "jsonl", "--filter", "ke", "--emit", "csv", "--out", &out]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let written = std::fs::read_to_string(&out).unwrap();
    assert_eq!(written.lines().count(), 2);
    assert!(written.contains("13,143,775,620,465,2015"));
}

#[test]
fn missing_input_is_usage_error() {
    assert_eq!(linkhom(&["batch", "--input", "/nonexistent/catalog.csv"]).status.code(), Some(2));
}

#[test]
fn cover_prints_record() {
    let o = linkhom(&["cover", "--weights", "13,143,775,620,465", "--p", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["p"], 3);
    assert_eq!(v["cover_ws"]["degree"], 6045);
    assert!(v["sphere_type"].is_string());
}

#[test]
fn cover_rejects_p_sharing_factor_with_degree() {
    let o = linkhom(&["cover", "--weights", "13,143,775,620,465", "--p", "5"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn twins_over_reference_rows() {
    let o = linkhom(&["twins", "--input", &data("table1.csv")]);
    assert_eq!(o.status.code(), Some(0));
    let groups: Vec<Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(groups.len(), 11);
    assert!(groups.iter().any(|g| g["degree"] == 5545));
    assert!(groups.iter().all(|g| g["members"].as_array().unwrap().len() >= 2));
}

#[test]
fn decompose_lists_all() {
    let one = linkhom(&["decompose", "--weights", "77,77,333,180,27"]);
    let all = linkhom(&["decompose", "--weights", "77,77,333,180,27", "--all"]);
    assert_eq!(one.status.code(), Some(0));
    let one: Vec<Value> = serde_json::from_str(&stdout(&one)).unwrap();
    let all: Vec<Value> = serde_json::from_str(&stdout(&all)).unwrap();
    assert_eq!(one.len(), 1);
    assert!(all.len() >= 1);
    assert!(all.contains(&one[0]));
    assert_eq!(one[0]["label"], "BP + Cycle");
}
