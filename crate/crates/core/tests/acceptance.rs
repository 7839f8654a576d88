//! Acceptance suite: every quantitative criterion runs at its stated
//! tolerance and prints one pass/fail line (visible with
//! `cargo test --test acceptance -- --nocapture`).

use thermoplate::checks::{self, Verdict};

fn report(verdicts: &[Verdict]) {
    for v in verdicts {
        println!(
            "{} {}  {}",
            if v.pass { "PASS" } else { "FAIL" },
            v.name,
            v.detail
        );
    }
    let failed: Vec<&Verdict> = verdicts.iter().filter(|v| !v.pass).collect();
    assert!(
        failed.is_empty(),
        "failed criteria: {:?}",
        failed.iter().map(|v| &v.name).collect::<Vec<_>>()
    );
}

#[test]
fn criterion1_gevrey_band() {
    report(&checks::criterion1_gevrey_band());
}

#[test]
fn criterion2_analytic_baseline() {
    report(&checks::criterion2_analytic_baseline());
}

#[test]
fn criterion3_nonanalyticity_witness() {
    report(&checks::criterion3_witness_growth());
}

#[test]
fn criterion4_witness_asymptotics() {
    report(&checks::criterion4_witness_asymptotics());
}

#[test]
fn criterion5_dissipativity_identity() {
    report(&checks::criterion5_dissipativity(checks::DEFAULT_SEED));
}

#[test]
fn criterion6_exponential_stability() {
    report(&checks::criterion6_exponential_stability());
}

#[test]
fn criterion7_oracle_equivalence() {
    report(&checks::criterion7_oracle_equivalence(checks::DEFAULT_SEED));
}

#[test]
fn criterion8_semigroup_property() {
    report(&checks::criterion8_semigroup(checks::DEFAULT_SEED));
}

#[test]
fn criterion9_check_subcommand_end_to_end() {
    // the `check` subcommand must be self-contained: fresh directory, no
    // inputs, runs criteria 1-8 plus the invariant battery, exits 0, and
    // finishes well inside the ten-minute budget
    let dir = tempfile::tempdir().expect("tempdir");
    let start = std::time::Instant::now();
    let output = std::process::Command::new(env!("CARGO_BIN_EXE_thermoplate"))
        .arg("check")
        .current_dir(dir.path())
        .output()
        .expect("run thermoplate check");
    let secs = start.elapsed().as_secs_f64();
    let stdout = String::from_utf8_lossy(&output.stdout);
    println!(
        "{} criterion9.check_subcommand  exit={:?} time={secs:.1}s",
        if output.status.success() && secs < 600.0 {
            "PASS"
        } else {
            "FAIL"
        },
        output.status.code()
    );
    assert!(
        output.status.success(),
        "check failed:\n{stdout}\n{}",
        String::from_utf8_lossy(&output.stderr)
    );
    assert!(secs < 600.0, "check took {secs:.1}s, budget is 600s");
    assert!(
        stdout.contains("check:"),
        "missing verdict table:\n{stdout}"
    );
    let summary =
        std::fs::read_to_string(dir.path().join("summary.txt")).expect("summary.txt written");
    assert!(
        summary.lines().any(|l| l == "all_pass=true"),
        "summary missing all_pass=true:\n{summary}"
    );
}
