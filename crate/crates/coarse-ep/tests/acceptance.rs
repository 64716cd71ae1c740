//! Acceptance gate: runs the full self-test suite at release scale and
//! prints one PASS/FAIL line per criterion.
//!
//! Output is written straight to the process stdout so the per-criterion
//! lines survive libtest's capture; run `cargo test --test acceptance`
//! to see them.

use std::io::Write;

use coarse_ep::selftest::{acceptance_scale, run_suite};

#[test]
fn acceptance_criteria() {
    let reports = run_suite(&acceptance_scale());

    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let mut failures = Vec::new();
    for report in &reports {
        match &report.outcome {
            Ok(detail) => writeln!(out, "PASS {}: {detail}", report.name).unwrap(),
            Err(reason) => {
                writeln!(out, "FAIL {}: {reason}", report.name).unwrap();
                failures.push(format!("{}: {reason}", report.name));
            }
        }
    }
    out.flush().unwrap();

    assert_eq!(reports.len(), 9, "the suite must cover all nine criteria");
    assert!(failures.is_empty(), "failed criteria: {failures:?}");
}
