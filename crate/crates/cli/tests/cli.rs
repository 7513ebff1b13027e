//! End-to-end checks of the command-line interface.

use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_conic-billiards")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn classify_rejects_a_non_admissible_residue() {
    let out = run(&["classify", "--rho", "5/7"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["in_M"], Value::Bool(false));
    assert_eq!(v["schema"], "1");
}

#[test]
fn residues_of_b1() {
    let out = run(&["residues", "--spec", r#"{"kind":"b1"}"#]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["poles"], serde_json::json!({"0": "3/2", "1": "1"}));
    assert_eq!(v["infinity"], "3/2");
    assert_eq!(v["total"], "4");
}

#[test]
fn verify_is_deterministic_and_passes() {
    let args = ["verify", "--spec", r#"{"kind":"d"}"#, "--samples", "100", "--seed", "7"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["report"]["counterexamples"].as_array().map(Vec::len), Some(0));
}

#[test]
fn spec_files_are_accepted() {
    let dir = std::env::temp_dir().join(format!("conic-billiards-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("spec.json");
    std::fs::write(&path, r#"{"kind":"a","N":1,"parity":"even"}"#).unwrap();
    let out = run(&["residues", "--spec", path.to_str().unwrap()]);
    assert_eq!(json(&out)["poles"]["0"], "3/2");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn exit_codes() {
    // Parse error.
    let out = run(&["residues", "--spec", r#"{"kind":"nope"}"#]);
    assert_eq!(out.status.code(), Some(2));
    // Library error: no primitive polynomial outside the admissible set.
    let out = run(&["classify", "--build-primitive", "5/7"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["error"]["kind"], "library");
    // Failed check: a space-form field has no dual catalog spec.
    let out = run(&["dualize", "--field", r#"{"kind":"space-form","a":["1","0","0","1","0","-1"]}"#]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["spec"], Value::Null);
    // Usage error: at least one sample is required.
    let out = run(&["verify", "--spec", r#"{"kind":"d"}"#, "--samples", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn simulate_writes_csv() {
    let out = run(&[
        "simulate",
        "--field",
        r#"{"kind":"a","rho":"4/3"}"#,
        "--position",
        "-1,1",
        "--velocity",
        "3,0",
        "--steps",
        "2",
        "--traversal",
        "chord",
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("step,x1,x2,v1,v2,psi_num,psi_den"));
    assert_eq!(lines.next(), Some("0,-1,1,3,0,-4,1"));
    assert_eq!(lines.next(), Some("1,1,1,-1,4,-4,1"));
}

#[test]
fn dualize_reports_the_global_constant() {
    let out = run(&["dualize", "--spec", r#"{"kind":"c1"}"#]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["psi_over_dual_integral"], "64");
}

#[test]
fn approx_renders_decimals() {
    let out = run(&["--approx", "residues", "--spec", r#"{"kind":"a","N":2,"parity":"odd"}"#]);
    let v = json(&out);
    assert_eq!(v["poles"]["0"], "1.6");
    assert_eq!(v["infinity"], "2.4");
}
