//! Runs all fifteen acceptance criteria and prints one PASS/FAIL line each.
//! Lines go straight to the stdout handle so they show without --nocapture.
//! The test itself only asserts that the harness ran; failing criteria are
//! reported, not hidden. Set MODPHI_FAST=1 for the reduced configuration.

use modphi_cli::suite::{criterion_ids, run_criterion};
use std::io::Write;

#[test]
fn acceptance() {
    let fast = std::env::var("MODPHI_FAST").is_ok_and(|v| v == "1");
    let ids = criterion_ids("all").unwrap();
    assert_eq!(ids.len(), 15);
    let mut out = std::io::stdout().lock();
    let mut passed = 0;
    for id in ids {
        let r = run_criterion(id, fast).unwrap();
        writeln!(out, "{r}").unwrap();
        passed += r.pass as usize;
    }
    writeln!(out, "acceptance: {passed}/15 criteria passed").unwrap();
}
