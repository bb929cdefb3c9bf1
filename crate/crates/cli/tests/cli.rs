use std::path::PathBuf;
use std::process::{Command, Output};

fn repo() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn ring(name: &str) -> PathBuf {
    repo().join("rings").join(format!("{name}.json"))
}

fn golden(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn typeseq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_typeseq"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("json output")
}

#[test]
fn analyze_matches_golden_files() {
    for name in ["example1", "example2", "example3", "f7-comparison", "cusp"] {
        let out = typeseq(&["analyze", ring(name).to_str().unwrap()]);
        assert!(out.status.success(), "{name}: {}", String::from_utf8_lossy(&out.stderr));
        assert_eq!(stdout(&out), golden(&format!("{name}.analyze.json")), "{name}");
    }
}

#[test]
fn reruns_are_byte_identical() {
    for args in [
        vec!["analyze", "--emit-gsr", "--suite"],
        vec!["compare-gsr"],
        vec!["check"],
    ] {
        let mut full = args.clone();
        let path = ring("example3");
        full.push(path.to_str().unwrap());
        let a = typeseq(&full);
        let b = typeseq(&full);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
    let args = ["fuzz", "--seed", "9", "--count", "12", "--max-n", "3", "--max-N", "8"];
    assert_eq!(typeseq(&args).stdout, typeseq(&args).stdout);
}

#[test]
fn output_flag_writes_the_same_report() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("report.json");
    let path = ring("example1");
    let out = typeseq(&["analyze", path.to_str().unwrap(), "-o", target.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(target).unwrap(), golden("example1.analyze.json"));
}

#[test]
fn example_reports() {
    let r = json(&typeseq(&["analyze", ring("example1").to_str().unwrap()]));
    assert_eq!(r["ring"]["type_sequence"], serde_json::json!([3, 4, 4, 2]));
    assert_eq!(r["ring"]["classification"]["label"], "almost-gorenstein");
    let r = json(&typeseq(&["analyze", ring("example2").to_str().unwrap()]));
    assert_eq!(r["ring"]["type_sequence"], serde_json::json!([5, 5, 5]));
    assert_eq!(r["ring"]["classification"]["label"], "maximal-length");
    let r = json(&typeseq(&["analyze", ring("cusp").to_str().unwrap()]));
    assert_eq!(r["ring"]["classification"]["label"], "gorenstein");
    assert!(r["suite"].as_array().unwrap().iter().all(|c| c["passed"] == true));
}

#[test]
fn compare_gsr() {
    let out = typeseq(&["compare-gsr", ring("f7-comparison").to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), golden("f7-comparison.compare.json"));
    let r = json(&out);
    assert_eq!(r["ring"]["type_sequence"], serde_json::json!([2, 2, 1, 1]));
    assert_eq!(r["gsr"]["type_sequence"], serde_json::json!([3, 1, 1, 1]));
    assert_eq!(r["verdicts"]["biconditional_holds"], true);
}

#[test]
fn check_and_fuzz_exit_codes() {
    let out = typeseq(&["check", ring("example2").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["passed"], true);
    let out = typeseq(&["fuzz", "--seed", "3", "--count", "10", "--max-n", "2", "--max-N", "6", "--mode", "gsr"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["failed_instances"], 0);
    let out = typeseq(&["fuzz", "--count", "0"]);
    assert_eq!(out.status.code(), Some(2));
    let out = typeseq(&["fuzz", "--mode", "sideways"]);
    assert!(!out.status.success());
}

#[test]
fn oracle() {
    let out = typeseq(&["oracle", "4,6,11,13"]);
    assert!(out.status.success());
    assert_eq!(json(&out)["type_sequence"], serde_json::json!([3, 1, 1, 1]));
    let out = typeseq(&["oracle", "3, 4, 5"]);
    assert_eq!(json(&out)["type_sequence"], serde_json::json!([2]));
    assert_eq!(typeseq(&["oracle", "4,6"]).status.code(), Some(2));
    assert_eq!(typeseq(&["oracle", "4,x"]).status.code(), Some(2));
}

#[test]
fn errors_are_reported_with_their_stage() {
    let path = ring("example3");
    let out = typeseq(&["analyze", path.to_str().unwrap(), "--max-degree-cap", "17"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.starts_with("error: generated ring:"), "{err}");
    let out = typeseq(&["analyze", "/nonexistent.json"]);
    assert_eq!(out.status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"base": "Q", "tower": [{"name": "a", "poly": "a^2 - 4"}], "ring": {"generators": ["X^2", "a*X^3"]}, "options": {"max-degree-cap": 64}}"#).unwrap();
    let out = typeseq(&["analyze", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    // a^2 - 4 is reducible, so K[[X]] has zero divisors and the closure never stabilises.
    assert!(err.contains("no conductor found"), "{err}");
}
