//! End-to-end checks of the binary: subcommands, exit codes, file outputs,
//! and byte-level determinism of generated artifacts.

use std::fs;
use std::path::Path;
use std::process::Command;

fn cocfg() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cocfg"))
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = cocfg().args(args).output().expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn generate_writes_all_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("artifacts");
    let (code, stdout, _) = run(&[
        "generate",
        "--p",
        "5",
        "--fusion",
        "0",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(stdout.contains("degree 100, rank 40"));
    for file in [
        "group.json",
        "partition.json",
        "scheme.json",
        "tensor.json",
        "partition_f0.json",
        "scheme_f0.json",
    ] {
        assert!(out.join(file).exists(), "{file} missing");
    }
}

#[test]
fn generated_artifacts_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for out in [&a, &b] {
        let (code, _, _) = run(&["generate", "--p", "5", "--out", out.to_str().unwrap()]);
        assert_eq!(code, 0);
    }
    for file in ["group.json", "partition.json", "scheme.json", "tensor.json"] {
        let left = fs::read(a.join(file)).unwrap();
        let right = fs::read(b.join(file)).unwrap();
        assert_eq!(left, right, "{file} differs between runs");
    }
}

#[test]
fn non_prime_p_is_a_usage_error() {
    let (code, _, stderr) = run(&["generate", "--p", "4", "--out", "/tmp/unused-cocfg"]);
    assert_eq!(code, 3);
    assert!(stderr.contains("not prime"));
}

#[test]
fn p_over_the_maximum_needs_override() {
    let (code, _, stderr) = run(&["verify", "--p", "17", "--lemma", "ring-meets"]);
    assert_eq!(code, 3);
    assert!(stderr.contains("exceeds"));
}

#[test]
fn verify_single_stage_passes() {
    let (code, stdout, _) = run(&["verify", "--p", "5", "--lemma", "orderscheme"]);
    assert_eq!(code, 0, "{stdout}");
    assert!(stdout.contains("scheme-meets"));
    assert!(stdout.contains("verdict: PASS"));
}

#[test]
fn verify_unknown_stage_lists_names() {
    let (code, _, stderr) = run(&["verify", "--p", "5", "--lemma", "nonsense"]);
    assert_eq!(code, 3);
    assert!(stderr.contains("separability"));
}

#[test]
fn verify_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _, _) = run(&[
        "verify",
        "--p",
        "5",
        "--lemma",
        "census",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let report = fs::read_to_string(dir.path().join("report.json")).unwrap();
    let parsed: serde_json::Value = serde_json::from_str(&report).unwrap();
    assert_eq!(parsed["passed"], true);
    assert_eq!(parsed["config"]["p"], 5);
}

#[test]
fn aut_reports_order_and_class() {
    let (code, stdout, _) = run(&["aut", "--p", "5"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("order 100"));
    assert!(stdout.contains("regular"));

    let (code, stdout, _) = run(&["aut", "--p", "5", "--fusion", "1"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("order 2500"));
}

#[test]
fn aut_budget_exhaustion_is_inconclusive() {
    let (code, _, stderr) = run(&["aut", "--p", "5", "--budget", "2"]);
    assert_eq!(code, 2, "{stderr}");
    assert!(stderr.contains("inconclusive"));
}

#[test]
fn wl_roundtrip_on_generated_scheme() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("artifacts");
    run(&["generate", "--p", "5", "--out", out.to_str().unwrap()]);
    let scheme = out.join("scheme.json");
    let (code, stdout, _) = run(&["wl", "--in", scheme.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.contains("delta 0"));
}

#[test]
fn wl_accepts_raw_matrices_without_rank() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("raw.json");
    // 5-cycle adjacency with an undeclared rank
    let n = 5usize;
    let mut colors = vec![0u32; n * n];
    for a in 0..n {
        for b in [(a + 1) % n, (a + n - 1) % n] {
            colors[a * n + b] = 1;
        }
    }
    let body = serde_json::json!({ "degree": n, "colors": colors });
    fs::write(&path, serde_json::to_string(&body).unwrap()).unwrap();
    let (code, stdout, _) = run(&["wl", "--in", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.contains("rank"), "{stdout}");
}

#[test]
fn malformed_input_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(&path, "{\"degree\": 3, \"colors\": [0, 1]}").unwrap();
    let (code, _, _) = run(&["wl", "--in", path.to_str().unwrap()]);
    assert_eq!(code, 3);

    let (code2, _, _) = run(&["tensor", "--in", Path::new("/nonexistent.json").to_str().unwrap()]);
    assert_eq!(code2, 3);
}

#[test]
fn tensor_from_p_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tensor.json");
    let (code, stdout, _) = run(&["tensor", "--p", "5", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.contains("rank 40"));
    let parsed: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(parsed["rank"], 40);
}
