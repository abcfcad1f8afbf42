use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const DIAGONAL: &str = r#"{"schema":1,"n":2,"C":[["1/t","0"],["0","2/t"]]}"#;

fn linham(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_linham")).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

fn run_on(cmd: &str, text: &str, extra: &[&str]) -> (i32, Value, String) {
    let dir = TempDir::new().unwrap();
    let p = write(dir.path(), "sys.json", text);
    let mut args = vec![cmd, "-i", p.to_str().unwrap(), "--no-timing"];
    args.extend_from_slice(extra);
    let out = linham(&args);
    (out.status.code().unwrap(), report(&out), String::from_utf8_lossy(&out.stderr).into_owned())
}

#[test]
fn certify_diagonal_system() {
    let (code, r, _) = run_on("certify", DIAGONAL, &[]);
    assert_eq!(code, 0);
    let e = &r["results"][0];
    assert_eq!(e["row"], 2);
    assert_eq!(e["certificate"]["pq"], serde_json::json!([1, 2]));
    assert_eq!(e["first_integrals"], serde_json::json!(["x1*y1", "x2*y2"]));
    assert_eq!(r["summary"]["ok"], 1);
}

#[test]
fn non_abelian_system_has_no_certificate() {
    let (code, r, _) = run_on("certify", r#"{"n":2,"C":[["t","1"],["0","0"]]}"#, &[]);
    assert_eq!(code, 1);
    assert_eq!(r["results"][0]["status"], "no-certificate");
}

#[test]
fn catalog_verifies_all_rows() {
    let out = linham(&["catalog", "--no-timing"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["results"][0]["details"]["verified"], "11/11");
}

#[test]
fn asymmetric_block_is_an_input_error() {
    let (code, r, stderr) = run_on("check", r#"{"n":2,"A":[["0","1"],["0","0"]]}"#, &[]);
    assert_eq!(code, 2);
    assert_eq!(r["results"][0]["status"], "input-error");
    assert!(stderr.contains("linham:"));
}

#[test]
fn malformed_and_ramified_coefficients() {
    let (code, r, _) = run_on("check", r#"{"n":1,"C":[["t^"]]}"#, &[]);
    assert_eq!(code, 2);
    assert!(r["results"][0]["error"].as_str().unwrap().contains("C[0][0]"));
    let (code, _, _) = run_on("check", r#"{"n":1,"C":[["t^(1/2)"]]}"#, &[]);
    assert_eq!(code, 2);
}

#[test]
fn json_syntax_errors_carry_positions() {
    let (code, r, _) = run_on("check", "{\n  \"n\": 1,\n  \"C\": [\n}", &[]);
    assert_eq!(code, 2);
    assert!(r["results"][0]["error"].as_str().unwrap().contains(":4:1:"));
}

#[test]
fn missing_file_is_an_input_error() {
    let out = linham(&["check", "-i", "/nonexistent/sys.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_is_deterministic_without_timing() {
    let dir = TempDir::new().unwrap();
    let p = write(dir.path(), "sys.json", DIAGONAL);
    let args = ["certify", "-i", p.to_str().unwrap(), "--no-timing", "--seed", "7"];
    let a = linham(&args);
    let b = linham(&args);
    assert_eq!(a.stdout, b.stdout);
    assert!(!String::from_utf8_lossy(&a.stdout).contains("timing_ms"));
}

#[test]
fn output_file_matches_stdout() {
    let dir = TempDir::new().unwrap();
    let p = write(dir.path(), "sys.json", DIAGONAL);
    let o = dir.path().join("report.json");
    let out = linham(&["classify", "-i", p.to_str().unwrap(), "--no-timing", "-o", o.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let direct = linham(&["classify", "-i", p.to_str().unwrap(), "--no-timing"]);
    assert_eq!(fs::read(&o).unwrap(), direct.stdout);
}

#[test]
fn batch_runs_keep_input_order() {
    let dir = TempDir::new().unwrap();
    let good = write(dir.path(), "good.json", DIAGONAL);
    let bad = write(dir.path(), "bad.json", r#"{"n":1,"C":[["t^"]]}"#);
    let nonab = write(dir.path(), "nonab.json", r#"{"n":2,"C":[["t","1"],["0","0"]]}"#);
    let paths = [&good, &bad, &nonab, &good];
    let mut args = vec!["certify", "--no-timing", "--jobs", "3"];
    for p in paths {
        args.extend(["-i", p.to_str().unwrap()]);
    }
    let out = linham(&args);
    assert_eq!(out.status.code(), Some(2));
    let r = report(&out);
    let codes: Vec<i64> = r["results"].as_array().unwrap().iter().map(|e| e["exit_code"].as_i64().unwrap()).collect();
    assert_eq!(codes, vec![0, 2, 1, 0]);
    assert_eq!(r["summary"]["total"], 4);
    let serial = linham(&[&args[..3], &["1"], &args[4..]].concat());
    assert_eq!(serial.stdout, out.stdout);
}

#[test]
fn bracket_of_two_inputs() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "f.json", r#"{"n":1,"A":[["1"]]}"#);
    let g = write(dir.path(), "g.json", r#"{"n":1,"B":[["1"]]}"#);
    let out = linham(&["bracket", "-i", f.to_str().unwrap(), "-i", g.to_str().unwrap(), "--no-timing"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["results"][0]["details"]["involutive"], false);
    let out = linham(&["bracket", "-i", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn integrate_reports_small_drift() {
    let text = r#"{"n":2,"C":[["1/t","0"],["0","2/t"]],"numeric":{"t0":1,"t1":2,"steps":1000}}"#;
    let (code, r, _) = run_on("integrate", text, &[]);
    assert_eq!(code, 0);
    let num = &r["results"][0]["numeric"];
    assert_eq!(num["method"], "rk4");
    assert!(num["symplectic_drift"].as_f64().unwrap() < 1e-8);
}

#[test]
fn pole_on_the_path_is_reported() {
    let text = r#"{"n":1,"C":[["1/t"]],"numeric":{"t0":-1,"t1":1,"steps":100}}"#;
    let (code, r, _) = run_on("integrate", text, &[]);
    assert_eq!(code, 2);
    assert!(r["results"][0]["error"].is_string());
}
