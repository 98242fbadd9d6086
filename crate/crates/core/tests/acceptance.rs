//! One line per acceptance criterion. Set `ONION_ACCEPTANCE=quick` for the
//! reduced samples.

use std::process::ExitCode;

use onion_core::selftest::{run_criterion, Level, CRITERIA};

const SEED: u64 = 2024;

fn main() -> ExitCode {
    let level = match std::env::var("ONION_ACCEPTANCE").as_deref() {
        Ok("quick") => Level::Quick,
        _ => Level::Full,
    };
    println!("acceptance ({level:?}, seed {SEED})");
    let mut failed = Vec::new();
    for (id, _) in CRITERIA {
        let outcome = run_criterion(id, level, SEED);
        println!("{}", outcome.line());
        if !outcome.passed {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all {} criteria passed", CRITERIA.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failed:?}");
        ExitCode::FAILURE
    }
}
