//! The seeded property suites behind `wittk selfcheck`, run from library code.

use wittk::cli::{run_selfcheck, Suite};

fn main() {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(7);
    let report = run_selfcheck(Suite::All, seed);
    for r in &report.results {
        println!("{:<9} {:>5} checks, {} failures", r.name, r.checks, r.failures.len());
    }
    println!("passed: {}", report.passed());
    std::process::exit(report.exit_code());
}
