//! One line per acceptance criterion. Set `WGROUPS_FULL=1` for the stretch runs.
//!
//! Criteria 3, 5 and 13 do not pass with the computed data; the expected statuses
//! below pin that, so a change in either direction fails this target.

use std::process::ExitCode;
use wgroups::suite::{run_criterion, Status, SuiteOptions, CRITERIA};

/// Statuses of the default run.
const EXPECTED: [(u8, Status); 14] = [
    (1, Status::Pass),
    (2, Status::Pass),
    (3, Status::Fail),
    (4, Status::Pass),
    (5, Status::Fail),
    (6, Status::Pass),
    (7, Status::Pass),
    (8, Status::Pass),
    (9, Status::Pass),
    (10, Status::Pass),
    (11, Status::Pass),
    (12, Status::Pass),
    (13, Status::Fail),
    (14, Status::Pass),
];

fn label(s: Status) -> &'static str {
    match s {
        Status::Pass => "PASS",
        Status::Fail => "FAIL",
        Status::Undecided => "UNDECIDED",
    }
}

fn main() -> ExitCode {
    let opts = SuiteOptions {
        full: std::env::var_os("WGROUPS_FULL").is_some(),
        ..SuiteOptions::default()
    };
    let mut unexpected = Vec::new();
    for (id, title) in CRITERIA {
        let r = run_criterion(id, &opts).expect("criterion exists");
        let failed: Vec<&str> = r
            .checks
            .iter()
            .filter(|(_, v)| v.as_str() != Some("true"))
            .map(|(k, _)| k.as_str())
            .collect();
        let mut line = format!(
            "criterion {id:>2}: {:<9} {title} ({} ms, limit {} s)",
            label(r.status),
            r.elapsed_ms,
            r.time_limit_s
        );
        if !failed.is_empty() {
            line.push_str(&format!(" failing: {}", failed.join(", ")));
        }
        if let Some(e) = &r.error {
            line.push_str(&format!(" error: {e}"));
        }
        println!("{line}");
        let expected = EXPECTED.iter().find(|(i, _)| *i == id).map(|(_, s)| *s);
        if !opts.full && expected != Some(r.status) {
            unexpected.push(id);
        }
    }
    let passed = EXPECTED.iter().filter(|(_, s)| *s == Status::Pass).count();
    println!("acceptance: {passed}/14 expected to pass");
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        eprintln!("status changed for criteria {unexpected:?}");
        ExitCode::FAILURE
    }
}
