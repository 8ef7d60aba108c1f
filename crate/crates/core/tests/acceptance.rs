//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

use magnus::membership::Engine;
use magnus::selftest::{run_criterion, CRITERIA, DEFAULT_SEED};

fn main() {
    let engine = Engine::default();
    let mut failed = 0;
    for (id, _, _) in CRITERIA {
        let result = run_criterion(id, &engine, DEFAULT_SEED);
        println!("{}", result.line());
        if !result.passed {
            failed += 1;
        }
    }
    println!(
        "acceptance: {} of {} criteria passed",
        CRITERIA.len() - failed,
        CRITERIA.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
