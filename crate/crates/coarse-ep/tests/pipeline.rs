//! End-to-end drives of the compiled binary: generate, solve, verify,
//! tamper, oracle, and bench, checking exit codes and output shapes.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_coarse-ep"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn path_str(p: &Path) -> &str {
    p.to_str().expect("temp paths are valid unicode")
}

#[test]
fn solve_and_verify_round_trip_on_a_grid() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("grid.txt");
    let cert = dir.path().join("cert.json");

    let out = run(&["generate", "--kind", "grid", "--params", "4,5", "--output", path_str(&graph)]);
    assert!(out.status.success(), "generate failed: {out:?}");

    let out = run(&[
        "solve",
        "--input",
        path_str(&graph),
        "--k",
        "2",
        "--d",
        "1",
        "--output",
        path_str(&cert),
    ]);
    // A 4x5 grid has no two distant cycles, so the hitting side answers.
    assert_eq!(out.status.code(), Some(1), "expected the hitting exit code");
    let text = fs::read_to_string(&cert).unwrap();
    assert!(text.contains("\"type\": \"hitting\""));

    let out = run(&["verify", "--input", path_str(&graph), "--certificate", path_str(&cert)]);
    assert_eq!(out.status.code(), Some(0), "verify rejected a fresh certificate: {out:?}");
    let msg = String::from_utf8(out.stdout).unwrap();
    assert!(msg.contains("valid for k = 2, d = 1"), "unexpected report: {msg}");
}

#[test]
fn solve_reports_packings_with_exit_zero() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("cycles.txt");
    let cert = dir.path().join("cert.json");

    let out = run(&[
        "generate",
        "--kind",
        "disjoint-cycles",
        "--params",
        "3,4,5",
        "--output",
        path_str(&graph),
    ]);
    assert!(out.status.success());

    let out = run(&[
        "solve",
        "--input",
        path_str(&graph),
        "--k",
        "3",
        "--d",
        "5",
        "--output",
        path_str(&cert),
    ]);
    assert_eq!(out.status.code(), Some(0), "expected the packing exit code");
    let text = fs::read_to_string(&cert).unwrap();
    assert!(text.contains("\"type\": \"packing\""));

    let out = run(&["verify", "--input", path_str(&graph), "--certificate", path_str(&cert)]);
    assert_eq!(out.status.code(), Some(0));

    // The exact oracle agrees that three cycles fit at this gap.
    let out = run(&["oracle", "max-packing", "--graph", path_str(&graph), "--d", "5"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "3");
}

#[test]
fn tampered_certificates_are_rejected_with_a_reason() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("grid.txt");
    let cert = dir.path().join("cert.json");

    run(&["generate", "--kind", "grid", "--params", "3,3", "--output", path_str(&graph)]);
    run(&[
        "solve",
        "--input",
        path_str(&graph),
        "--k",
        "2",
        "--d",
        "1",
        "--output",
        path_str(&cert),
    ]);

    let text = fs::read_to_string(&cert).unwrap();
    let tampered = text.replace("\"X\": [", "\"X\": [ 999,");
    assert_ne!(text, tampered, "tampering must change the certificate");
    fs::write(&cert, tampered).unwrap();

    let out = run(&["verify", "--input", path_str(&graph), "--certificate", path_str(&cert)]);
    assert_eq!(out.status.code(), Some(2));
    let msg = String::from_utf8(out.stderr).unwrap();
    assert!(msg.contains("error:"), "missing reason: {msg}");
}

#[test]
fn generators_are_deterministic_and_honor_their_contracts() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.txt");
    let b = dir.path().join("b.txt");

    for (kind, params) in [
        ("grid", "3,4"),
        ("random-gnm", "12,18"),
        ("disjoint-cycles", "2,5,3"),
        ("subdivision", "6,8,2"),
    ] {
        run(&["generate", "--kind", kind, "--params", params, "--seed", "9", "--output", path_str(&a)]);
        run(&["generate", "--kind", kind, "--params", params, "--seed", "9", "--output", path_str(&b)]);
        assert_eq!(
            fs::read(&a).unwrap(),
            fs::read(&b).unwrap(),
            "{kind} output changed between runs"
        );
    }

    run(&["generate", "--kind", "random-gnm", "--params", "10,0", "--seed", "4", "--output", path_str(&a)]);
    assert_eq!(fs::read_to_string(&a).unwrap(), "10 0\n", "m = 0 must yield an edgeless graph");

    run(&["generate", "--kind", "grid", "--params", "2,2", "--output", path_str(&a)]);
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text.lines().next(), Some("4 4"), "a 2x2 grid is a four-cycle");
}

#[test]
fn io_and_parse_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "not a graph\n").unwrap();

    let out = run(&["solve", "--input", path_str(&bad), "--k", "1", "--d", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("line 1"));

    let missing = dir.path().join("missing.txt");
    let out = run(&["solve", "--input", path_str(&missing), "--k", "1", "--d", "1"]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["solve", "--input", path_str(&bad), "--k", "0", "--d", "1"]);
    assert_eq!(out.status.code(), Some(2), "k = 0 must be rejected at parse time");
}

#[test]
fn bench_emits_one_csv_row_per_instance() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("bench.csv");
    let out = run(&[
        "bench",
        "--count",
        "6",
        "--seed",
        "1",
        "--workers",
        "2",
        "--output",
        path_str(&csv),
    ]);
    assert!(out.status.success(), "bench failed: {out:?}");
    let text = fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("instance,n,m,k,d,outcome,|X|,runtime_ms"));
    assert_eq!(lines.count(), 6);
}

#[test]
fn oracle_limits_can_be_overridden_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("grid.txt");
    run(&["generate", "--kind", "grid", "--params", "3,3", "--output", path_str(&graph)]);

    let out = bin()
        .env("COARSE_EP_LIMITS", "4,10")
        .args(["oracle", "cycles", "--graph", path_str(&graph)])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2), "the tightened limit must refuse the instance");
    assert!(String::from_utf8(out.stderr).unwrap().contains("limit"));
}
