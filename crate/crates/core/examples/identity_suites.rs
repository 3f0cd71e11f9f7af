//! Runs every randomized identity suite at a small size and prints the
//! per-check summary that the `identities` subcommand writes as JSON.

use genform::suites::{run_suite, Suite, SuiteConfig};

fn main() {
    let dim = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(2);
    let report = run_suite(Suite::All, &SuiteConfig { dim, epsilon: None, trials: 20, seed: 7 });
    for c in &report.checks {
        println!("{:<42} {:>3} trials {:>3} failures {:>6} ms", c.name, c.trials, c.failures, c.wall_time_ms);
    }
    println!("degrees {:?}", report.degrees);
    println!("ε values {:?}", report.epsilons.iter().map(ToString::to_string).collect::<Vec<_>>());
    println!("pass: {}", report.pass());
}
