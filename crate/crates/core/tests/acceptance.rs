use std::process::ExitCode;

use chainsemi::verify::{run_criterion, VerifyConfig, CRITERIA};
use chainsemi::Limits;

/// Every criterion compares exact integers or exact sets.
const TOLERANCE: u64 = 0;

fn main() -> ExitCode {
    let cfg = VerifyConfig {
        limits: Limits::default(),
        ..VerifyConfig::default()
    };
    let mut failed = 0;
    for id in 1..=CRITERIA.len() {
        let res = run_criterion(id, &cfg);
        let status = if res.passed { "PASS" } else { "FAIL" };
        println!(
            "criterion {:>2} [{status}] {} ({} checks, tolerance {TOLERANCE}, {:.1}s)",
            res.id, res.title, res.checks, res.seconds
        );
        for f in res.failures.iter().take(10) {
            println!("    {f}");
        }
        if res.failures.len() > 10 {
            println!("    ... {} more", res.failures.len() - 10);
        }
        failed += usize::from(!res.passed);
    }
    println!(
        "{} of {} criteria passed",
        CRITERIA.len() - failed,
        CRITERIA.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
