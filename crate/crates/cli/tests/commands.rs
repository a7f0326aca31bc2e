use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn testdata(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("testdata")
        .join(name)
}

fn koszul(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_koszul"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_report(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = koszul(&full);
    let value = serde_json::from_slice(&out.stdout).expect("stdout is JSON");
    (out.status.code().expect("exit code"), value)
}

fn statuses(report: &Value) -> Vec<(String, String)> {
    report["verdicts"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| {
            (
                v["name"].as_str().unwrap().to_string(),
                v["status"].as_str().unwrap().to_string(),
            )
        })
        .collect()
}

#[test]
fn compute_finite_length() {
    let path = testdata("times_two.json");
    let (code, report) = json_report(&["compute", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(
        report["results"]["profile"]["chis"],
        serde_json::json!([0, 1])
    );
    assert!(statuses(&report).iter().all(|(_, s)| s == "pass"));
    assert_eq!(report["instance"]["p"], 2);
    assert!(report.get("timing_ms").is_none());
}

#[test]
fn compute_graded() {
    let path = testdata("z4xy.json");
    let (code, report) = json_report(&["compute", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(report["results"]["chi"][0], 2);
    assert_eq!(report["results"]["strands"]["stabilized"], true);
}

#[test]
fn compute_inconclusive_at_tiny_bound() {
    let path = testdata("cube_presentation.json");
    let (code, _) = json_report(&["compute", path.to_str().unwrap(), "--degree-bound", "2"]);
    assert_eq!(code, 3);
}

#[test]
fn malformed_and_missing_files() {
    let path = testdata("malformed.json");
    let out = koszul(&["compute", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 5"));

    let out = koszul(&["compute", "/nonexistent/instance.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn invalid_instance_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("unit.json");
    let text = std::fs::read_to_string(testdata("times_two.json"))
        .unwrap()
        .replace("[[2]]", "[[1]]");
    std::fs::write(&path, text).unwrap();
    let (code, report) = json_report(&["compute", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert_eq!(report["error"], "input");
    assert_eq!(report["field"], "module.actions");
}

#[test]
fn multiplicity_tables() {
    let path = testdata("z4xy.json");
    let (code, report) = json_report(&["multiplicity", path.to_str().unwrap(), "--t-max", "3"]);
    assert_eq!(code, 0);
    assert_eq!(
        report["results"]["table"]["rows"],
        serde_json::json!([[1, 2], [2, 8], [3, 18]])
    );
    assert_eq!(
        report["results"]["table"]["leading_coefficient"]["numerator"],
        2
    );

    let path = testdata("z4x.json");
    let (code, report) = json_report(&["multiplicity", path.to_str().unwrap(), "--t-max", "4"]);
    assert_eq!(code, 0);
    assert_eq!(
        report["results"]["table"]["rows"],
        serde_json::json!([[1, 2], [2, 4], [3, 6], [4, 8]])
    );

    let path = testdata("times_two.json");
    let (code, report) = json_report(&["multiplicity", path.to_str().unwrap(), "--t-max", "4"]);
    assert_eq!(code, 0);
    assert_eq!(
        report["results"]["table"]["rows"],
        serde_json::json!([[1, 1], [2, 2], [3, 2], [4, 2]])
    );
}

#[test]
fn shift_check_exit_codes() {
    let path = testdata("x_squared.json");
    let (code, report) = json_report(&["shift-check", path.to_str().unwrap()]);
    assert_eq!(code, 0, "{report}");
    let (code, report) =
        json_report(&["shift-check", path.to_str().unwrap(), "--degree-bound", "1"]);
    assert_eq!(code, 3);
    assert_eq!(statuses(&report)[0].1, "inconclusive");

    let zero = testdata("z4xy.json");
    assert_eq!(json_report(&["shift-check", zero.to_str().unwrap()]).0, 0);

    let finite = testdata("times_two.json");
    assert_eq!(
        koszul(&["shift-check", finite.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn lift_certificate() {
    let path = testdata("truncated_z4x.json");
    let (code, report) = json_report(&["lift", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(report["results"]["certificate"]["delta_valuation"], 2);
    assert_eq!(statuses(&report).len(), 4);
    assert!(statuses(&report).iter().all(|(_, s)| s == "pass"));
}

#[test]
fn verify_serre_batches() {
    let (code, report) = json_report(&["verify-serre", "--samples", "40", "--seed", "7"]);
    assert_eq!(code, 0);
    assert_eq!(report["provenance"]["prng"], "ChaCha8");
    assert!(statuses(&report).iter().all(|(_, s)| s == "pass"));

    let (code, report) = json_report(&["verify-serre", "--samples", "0"]);
    assert_eq!(code, 0);
    assert_eq!(report["results"]["samples"], 0);

    let (code, _) = json_report(&[
        "verify-serre",
        "--samples",
        "10",
        "--p",
        "2",
        "--k",
        "3",
        "--n",
        "3",
    ]);
    assert_eq!(code, 0);

    let out = koszul(&["verify-serre", "--p", "4"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reports_are_deterministic() {
    let a = koszul(&["--json", "verify-serre", "--samples", "15", "--seed", "3"]);
    let b = koszul(&["--json", "verify-serre", "--samples", "15", "--seed", "3"]);
    assert_eq!(a.stdout, b.stdout);
    let timed = koszul(&[
        "--json",
        "--timing",
        "compute",
        testdata("times_two.json").to_str().unwrap(),
    ]);
    let report: Value = serde_json::from_slice(&timed.stdout).unwrap();
    assert!(report["timing_ms"].is_u64());
}
