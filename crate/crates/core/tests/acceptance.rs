//! Runs every acceptance criterion at full scale and prints one line each.
//! Exits non-zero if any asserted criterion fails.

use std::process::ExitCode;

use rlc_moments::verify::{run_check, Level, Verdict, VerifyOptions, CRITERIA};

fn main() -> ExitCode {
    let seed = std::env::var("RLCM_ACCEPTANCE_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(20240601);
    let opts = VerifyOptions::new(Level::Full, seed);
    println!("acceptance: {} criteria, full level, seed {seed}", CRITERIA.len());
    let mut failed = 0;
    for &(id, _) in CRITERIA.iter() {
        let r = run_check(id, &opts);
        let mut lines = r.line().lines().map(str::to_string).collect::<Vec<_>>().into_iter();
        println!("{}", lines.next().unwrap_or_default());
        for rest in lines {
            println!("             {rest}");
        }
        if r.verdict == Verdict::Fail {
            failed += 1;
        }
    }
    println!("acceptance: {failed} failed");
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
