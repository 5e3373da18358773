//! Behaviour of the installed binary: exit codes, structured errors on
//! stderr, report envelopes, CSV headers, and byte-level determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_conformal4");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary should run")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no exit code")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout should be a JSON document")
}

fn stderr_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stderr).expect("stderr should be a JSON error object")
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(name);
    std::fs::write(&path, contents).expect("temp file");
    path
}

#[test]
fn pic_on_the_product_cylinder_reports_a_positive_verdict() {
    let out = run(&["pic", "--manifold", "s3xs1"]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let doc = stdout_json(&out);
    assert_eq!(doc["command"], "pic");
    assert_eq!(doc["meta"]["tool"], "conformal4");
    let fingerprint = doc["meta"]["recipe_fingerprint"].as_str().unwrap();
    assert_eq!(fingerprint.len(), 16);
    assert!(fingerprint.chars().all(|c| c.is_ascii_hexdigit()));
    assert_eq!(doc["result"]["verdict"], "positive");
    let margin = doc["result"]["margin_min"].as_f64().unwrap();
    assert!((margin - 1.0).abs() < 1e-6, "margin_min {margin}");
}

#[test]
fn csv_output_carries_schema_and_recipe_header() {
    let out = run(&["gbchern", "--manifold", "t4", "--resolution", "8", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with("# tool=conformal4 version="), "header: {header}");
    assert!(header.contains(" recipe="), "header: {header}");
    assert!(header.contains("schema=gbchern-v1"), "header: {header}");
    let columns = lines.next().unwrap();
    assert!(columns.starts_with("manifold,orientation,resolution"), "columns: {columns}");
    assert!(lines.next().unwrap().starts_with("flat-torus-4,1,8"));
}

#[test]
fn missing_manifold_file_is_a_parse_error() {
    let out = run(&["pic", "--manifold", "/definitely/not/there.json"]);
    assert_eq!(code(&out), 4);
    assert!(out.stdout.is_empty(), "no report should be emitted");
    let err = stderr_json(&out);
    assert_eq!(err["error"]["exit"], 4);
    assert_eq!(err["error"]["kind"], "parse");
    let message = err["error"]["message"].as_str().unwrap();
    assert!(message.contains("catalog"), "message should list catalog names: {message}");
}

#[test]
fn invalid_orientation_is_a_precondition_error() {
    let out = run(&["pic", "--manifold", "s4", "--orientation", "2"]);
    assert_eq!(code(&out), 2);
    let err = stderr_json(&out);
    assert_eq!(err["error"]["kind"], "precondition");
}

#[test]
fn unknown_config_field_is_rejected() {
    let cfg = temp_file("conformal4_unknown_field.json", r#"{"sample": 5}"#);
    let out = run(&["pic", "--manifold", "s4", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&out), 4);
    let err = stderr_json(&out);
    assert_eq!(err["error"]["kind"], "parse");
    assert!(err["error"]["message"].as_str().unwrap().contains("sample"));
}

#[test]
fn invalid_initial_amplitude_is_rejected() {
    let cfg = temp_file(
        "conformal4_big_amplitude.json",
        r#"{"initial": {"kind": "cosine", "amplitude": 1.5}}"#,
    );
    let out = run(&["yamabe", "--manifold", "t4", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert_eq!(stderr_json(&out)["error"]["kind"], "precondition");
}

#[test]
fn unknown_flag_is_rejected_by_the_argument_parser() {
    let out = run(&["gbchern", "--manifold", "t4", "--samples", "5"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn repeated_runs_emit_identical_bytes() {
    let cfg = temp_file("conformal4_det_cfg.json", r#"{"samples": 16, "seed": 11}"#);
    let args = ["decompose", "--manifold", "t4", "--config", cfg.to_str().unwrap()];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(code(&first), 0);
    assert_eq!(first.stdout, second.stdout, "JSON reports differ between runs");

    let csv_args = ["gbchern", "--manifold", "s4", "--resolution", "10", "--format", "csv"];
    let first = run(&csv_args);
    let second = run(&csv_args);
    assert_eq!(code(&first), 0);
    assert_eq!(first.stdout, second.stdout, "CSV reports differ between runs");
}

#[test]
fn unconverged_solve_still_emits_a_report_and_exits_three() {
    let cfg = temp_file(
        "conformal4_lowiter.json",
        r#"{"max_iterations": 3, "initial": {"kind": "cosine", "amplitude": 0.3}}"#,
    );
    let out = run(&["yamabe", "--manifold", "s4", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&out), 3);
    let doc = stdout_json(&out);
    assert_eq!(doc["result"]["all_converged"], false);
    assert!(!doc["result"]["stages"].as_array().unwrap().is_empty());
}

#[test]
fn report_goes_to_the_output_file_when_requested() {
    let path = std::env::temp_dir().join("conformal4_outfile.json");
    let _ = std::fs::remove_file(&path);
    let out = run(&["pic", "--manifold", "s4", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty(), "report should go to the file, not stdout");
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["result"]["verdict"], "positive");
}

#[test]
fn manifold_documents_resolve_named_parameters() {
    let doc = temp_file(
        "conformal4_long_cylinder.json",
        r#"{"catalog": "s3xs1", "params": {"circle": 5.0}}"#,
    );
    let out = run(&["pic", "--manifold", doc.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let report = stdout_json(&out);
    assert_eq!(report["result"]["verdict"], "positive");
    assert_eq!(report["meta"]["parameters"]["manifold"]["document"]["params"]["circle"], 5.0);
}

#[test]
fn reversed_orientation_flips_the_half_weyl_verdict() {
    let standard = run(&["pic", "--manifold", "cp2-fs", "--sigma-mode", "plus"]);
    assert_eq!(code(&standard), 0);
    assert_eq!(stdout_json(&standard)["result"]["verdict"], "nonnegative");

    let reversed =
        run(&["pic", "--manifold", "cp2-fs", "--sigma-mode", "plus", "--orientation", "-1"]);
    assert_eq!(code(&reversed), 0);
    let doc = stdout_json(&reversed);
    assert_eq!(doc["result"]["verdict"], "positive");
    let min = doc["result"]["sigma_min"].as_f64().unwrap();
    assert!((min - 24.0).abs() < 1e-6, "reversed half-Weyl bound should sit at 24, got {min}");
}
