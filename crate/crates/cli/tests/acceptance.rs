//! Acceptance criteria: one PASS/FAIL line per criterion, followed by the
//! computed values behind it. Exits nonzero if any criterion fails.

use affine_tl::claims::{run, TITLES};
use std::process::ExitCode;

const SEED: u64 = 20240601;

fn main() -> ExitCode {
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = vec![];
    for id in 1..=TITLES.len() {
        let name = format!("c{id:02}");
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        match run(id, SEED) {
            Ok(c) => {
                println!("{}", c.line());
                for d in &c.details {
                    println!("    {d}");
                }
                if !c.passed {
                    failed.push(id);
                }
            }
            Err(e) => {
                println!("criterion {id:2} FAIL: {} (error: {e})", TITLES[id - 1]);
                failed.push(id);
            }
        }
    }
    if failed.is_empty() {
        println!("acceptance: all criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failing criteria {failed:?}");
        ExitCode::FAILURE
    }
}
