//! End-to-end tests that drive the compiled binary the way a user would:
//! spawn it with real arguments, then check exit codes, stdout, and any
//! files it writes.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_heptabound"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("failed to spawn heptabound")
}

/// Runs the binary, asserts success, and returns stdout as a string.
fn run_ok(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "`heptabound {}` failed\nstderr: {}",
        args.join(" "),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("stdout was not UTF-8")
}

/// A scratch path under the system temp dir, unique to this test process.
fn scratch(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("heptabound-cli-{}-{name}", std::process::id()))
}

#[test]
fn truant_reports_known_anchor_values() {
    assert_eq!(run_ok(&["truant", "--m", "7", "--coeffs", "1,2,4"]), "131\n");
    assert_eq!(run_ok(&["truant", "--coeffs", "1"]), "2\n");
    assert_eq!(run_ok(&["truant", "--coeffs", "1,1,3,3"]), "9\n");
    assert_eq!(run_ok(&["truant", "--coeffs", "1,1,1,3"]), "none\n");
}

#[test]
fn scan_limits_below_the_floor_are_rejected_at_parse_time() {
    let out = run(&["truant", "--coeffs", "1,2,4", "--limit", "100"]);
    assert_eq!(out.status.code(), Some(2), "clap should reject --limit 100");
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("invalid value"), "stderr: {stderr}");
}

#[test]
fn count_matches_hand_checked_values() {
    // r*(0) = 1: only the all-zero tuple.
    assert_eq!(run_ok(&["count", "--coeffs", "1,1,1,3", "--n", "0"]), "1\n");
    // s*(h) at the completed argument of n = 0 must agree with r*(0).
    assert_eq!(
        run_ok(&["count", "--coeffs", "1,1,1,3", "--n", "54", "--shifted"]),
        "1\n"
    );
}

#[test]
fn count_reuses_an_on_disk_cache() {
    let dir = scratch("cache");
    let _ = std::fs::remove_dir_all(&dir);
    let args = [
        "count",
        "--coeffs",
        "1,1,1,3",
        "--n",
        "100",
        "--cache-dir",
        dir.to_str().unwrap(),
    ];
    let first = run_ok(&args);
    let wrote_table = std::fs::read_dir(&dir)
        .expect("cache dir should exist after the first run")
        .filter_map(|e| e.ok())
        .any(|e| e.file_name().to_string_lossy().ends_with(".u64"));
    assert!(wrote_table, "first run should persist a table file");
    let second = run_ok(&args);
    assert_eq!(first, second, "cached run must return the same count");
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn bounds_reports_are_versioned_json_with_exact_constants() {
    let path = scratch("bounds.json");
    run_ok(&[
        "bounds",
        "--coeffs",
        "1,1,1,3",
        "--out",
        path.to_str().unwrap(),
    ]);
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["schema_version"], 1);
    let report = &doc["report"];
    assert_eq!(report["h0"], 54);
    assert_eq!(report["c_l"], "75/13");
    assert_eq!(report["c_delta"], "2/3");
    assert_eq!(report["c_a"], "1/1300");
    assert_eq!(report["anisotropic"], false);
    let _ = std::fs::remove_file(&path);
}

#[test]
fn bounds_marks_the_anisotropic_tuple() {
    let path = scratch("bounds-aniso.json");
    run_ok(&[
        "bounds",
        "--coeffs",
        "1,1,3,3",
        "--precision",
        "96",
        "--out",
        path.to_str().unwrap(),
    ]);
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let report = &doc["report"];
    assert_eq!(report["c_l"], "25/9");
    assert_eq!(report["c_delta"], "anisotropic:p=3");
    assert_eq!(report["c_a"], "1/1200");
    assert_eq!(report["anisotropic"], true);
    let _ = std::fs::remove_file(&path);
}

#[test]
fn escalate_writes_a_versioned_tree() {
    let path = scratch("tree.json");
    run_ok(&["escalate", "--depth", "2", "--out", path.to_str().unwrap()]);
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["schema_version"], 1);
    assert_eq!(doc["m"], 7);
    assert_eq!(doc["depth"], 2);
    let root = &doc["tree"];
    assert_eq!(root["coeffs"].as_array().unwrap().len(), 0);
    assert_eq!(root["truant"], 1);
    let first = &root["children"][0];
    assert_eq!(first["coeffs"], serde_json::json!([1]));
    assert_eq!(first["children"].as_array().unwrap().len(), 2);
    let _ = std::fs::remove_file(&path);
}

#[test]
fn table_output_is_identical_across_thread_counts() {
    let one = scratch("table-jobs1.csv");
    let two = scratch("table-jobs2.csv");
    run_ok(&[
        "table",
        "--precision",
        "128",
        "--jobs",
        "1",
        "--out",
        one.to_str().unwrap(),
    ]);
    run_ok(&[
        "table",
        "--precision",
        "128",
        "--jobs",
        "2",
        "--out",
        two.to_str().unwrap(),
    ]);
    let a = std::fs::read_to_string(&one).unwrap();
    let b = std::fs::read_to_string(&two).unwrap();
    assert_eq!(a, b, "table rows must not depend on the worker count");
    let mut lines = a.lines();
    assert_eq!(
        lines.next().unwrap(),
        "a1,a2,a3,a4,C_L,C_Delta,c_a,norm_sq_hi,d_a_hi,C_a_hi"
    );
    assert_eq!(a.lines().count(), 218, "header plus one row per tuple");
    assert!(
        a.contains("1,1,3,3,25/9,anisotropic:p=3,1/1200,"),
        "the anisotropic row must carry its decay constants"
    );
    let _ = std::fs::remove_file(&one);
    let _ = std::fs::remove_file(&two);
}

#[test]
fn final_bound_prints_the_certified_enclosure() {
    let out = run_ok(&["final-bound"]);
    assert!(
        out.contains("universality bound: [3.895e106, 3.896e106]"),
        "stdout: {out}"
    );
    assert!(out.contains("attained at: (1, 2, 4, 108)"), "stdout: {out}");
    assert!(
        out.contains("margin 9, reproduces proof"),
        "stdout: {out}"
    );
    assert!(
        out.contains("cusp coefficient (3/5 profile): <= 5.829e38"),
        "stdout: {out}"
    );
}

#[test]
fn verify_runs_both_suites_and_rejects_unknown_names() {
    let paper = run_ok(&["verify", "--suite", "paper"]);
    assert!(
        paper.contains("suite paper: 23 of 23 fixtures passed"),
        "stdout: {paper}"
    );
    let property = run_ok(&["verify", "--suite", "property"]);
    assert!(
        property.contains("suite property: 10 of 10 fixtures passed"),
        "stdout: {property}"
    );
    let bad = run(&["verify", "--suite", "nonsense"]);
    assert_eq!(bad.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&bad.stderr);
    assert!(stderr.contains("unknown suite"), "stderr: {stderr}");
}
