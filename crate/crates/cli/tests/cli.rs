//! End-to-end tests of the `digit-sigma` binary: output, formats, and the
//! exit-code contract (0 confirmed, 1 violation, 2 usage, 3 indeterminate).

use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_digit-sigma"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

#[test]
fn eval_worked_examples() {
    let out = run(&["eval", "--seq", "a", "--n", "3567"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "892466");

    let out = run(&["eval", "--seq", "b", "--n", "4637"]);
    assert_eq!(stdout(&out).trim(), "1894354");

    let out = run(&["eval", "--seq", "c", "--n", "0"]);
    assert_eq!(stdout(&out).trim(), "0");
}

#[test]
fn eval_accepts_huge_decimal_strings() {
    let n = "1".to_string() + &"0".repeat(200);
    let out = run(&["eval", "--seq", "c", "--n", &n]);
    assert_eq!(out.status.code(), Some(0));
    assert!(!stdout(&out).trim().is_empty());
}

#[test]
fn eval_formats() {
    let out = run(&["eval", "--seq", "a", "--n", "4", "--format", "csv"]);
    assert_eq!(stdout(&out), "seq,n,value\na,4,20\n");
    let out = run(&["eval", "--seq", "a", "--n", "4", "--format", "jsonl"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["value"], "20");
}

#[test]
fn eval_rejects_garbage() {
    let out = run(&["eval", "--seq", "a", "--n", "12x4"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["eval", "--seq", "a", "--n", "-3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_flag_is_usage_error() {
    let out = run(&["eval", "--seq", "a", "--n", "1", "--bogus"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn oracle_small_ranges() {
    let out = run(&["oracle", "--seq", "c", "--lo", "0", "--hi", "11"]);
    assert_eq!(out.status.code(), Some(0));
    let out = run(&["oracle", "--seq", "b", "--lo", "10", "--hi", "5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn oracle_limit_env_override() {
    let out = bin()
        .args(["oracle", "--seq", "a", "--lo", "0", "--hi", "5000"])
        .env("DIGIT_SIGMA_MAX_ORACLE", "1000")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn scan_bound_f_reports_equality_family() {
    let out = run(&["scan", "--kind", "bound-f", "--hi", "5000", "--workers", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("equalities: 4 49 499 4999"), "got: {text}");
}

#[test]
fn scan_bound_h_lists_exceptions() {
    let out = run(&["scan", "--kind", "bound-h", "--hi", "10000"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("exceptions: 9 99 999 9999"));
}

#[test]
fn scan_ratio_and_linear_confirm() {
    let out = run(&["scan", "--kind", "ratio", "--hi", "20000"]);
    assert_eq!(out.status.code(), Some(0));
    let out = run(&["scan", "--kind", "linear", "--hi", "20000"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn scan_jsonl_is_machine_parseable() {
    let out = run(&["scan", "--kind", "bound-g", "--hi", "600", "--format", "jsonl"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["kind"], "bound-g");
    assert_eq!(v["equalities"], serde_json::json!([5, 50, 500]));
}

#[test]
fn bfile_emit_first_odd_terms() {
    let out = run(&["bfile", "emit", "--seq", "b", "--lo", "1", "--hi", "5"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "1 1\n2 4\n3 9\n4 16\n5 25\n");
}

#[test]
fn bfile_compare_round_trip_and_corruption() {
    let dir = std::env::temp_dir();
    let good = dir.join("digit_sigma_cli_good.txt");
    let bad = dir.join("digit_sigma_cli_bad.txt");

    let emitted = run(&["bfile", "emit", "--seq", "a", "--lo", "1", "--hi", "200"]);
    std::fs::write(&good, &emitted.stdout).unwrap();
    let out = run(&["bfile", "compare", "--seq", "a", "--file", good.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));

    let mut lines: Vec<String> =
        stdout(&emitted).lines().map(String::from).collect();
    lines[99] = "100 1".to_string();
    std::fs::write(&bad, lines.join("\n") + "\n").unwrap();
    let out = run(&["bfile", "compare", "--seq", "a", "--file", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("index 100"));

    let out = run(&["bfile", "compare", "--seq", "a", "--file", "/nonexistent/b.txt"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bench_cross_checks_small_n() {
    let out = run(&["bench", "--n", "4", "--repetitions", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("values agree"), "got: {text}");
}

#[test]
fn bench_marks_huge_n_infeasible() {
    let n = "1".to_string() + &"0".repeat(40);
    let out = run(&["bench", "--n", &n, "--repetitions", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("infeasible"));
}
