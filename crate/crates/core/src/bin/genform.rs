//! Batch harness: identity suites, the oscillator, and fixture-driven
//! demonstrations. Exit codes: 0 pass, 1 failure (report written), 2 usage or
//! fixture error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::Value;

use genform::fixtures::{run_connection, run_cover, run_hamiltonian, run_oscillator, TheoremCase};
use genform::hamiltonian::OscillatorParams;
use genform::ring::{parse_rational, Rational};
use genform::suites::{run_suite, Suite, SuiteConfig};

#[derive(Parser)]
#[command(name = "genform", version, about = "Exact generalized differential form calculus")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run randomized identity suites with exact arithmetic.
    Identities {
        #[arg(long)]
        dim: usize,
        /// Fixed ε; omitted cycles through 0, 1, -1, 2, -2, 1/2 by trial.
        #[arg(long, value_parser = rational, allow_hyphen_values = true)]
        epsilon: Option<Rational>,
        #[arg(long, default_value_t = 50)]
        trials: u64,
        #[arg(long, env = "GENFORM_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "all")]
        suite: Suite,
        /// Report path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Integrate the damped-oscillator Hamilton equations with RK4.
    Oscillator {
        #[arg(long, value_parser = rational, allow_hyphen_values = true)]
        epsilon: Rational,
        #[arg(long, value_parser = rational, allow_hyphen_values = true)]
        v0: Rational,
        #[arg(long, default_value_t = 1)]
        l: usize,
        #[arg(long)]
        t_end: f64,
        #[arg(long)]
        dt: f64,
        /// Trajectory CSV `t,q1..ql,p1..pl`.
        #[arg(long)]
        out: PathBuf,
        /// Summary path; stdout when omitted.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Build V_H for a fixture and check its defining relations.
    Hamiltonian {
        #[arg(long)]
        fixture: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Metric-compatible connection construction for a fixture.
    ConnectionThm {
        #[arg(long)]
        fixture: PathBuf,
        #[arg(long)]
        case: TheoremCase,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Validate a chart cover and canonicalize the odd generator.
    Cover {
        #[arg(long)]
        fixture: PathBuf,
        #[arg(long, value_parser = rational, allow_hyphen_values = true)]
        epsilon: Option<Rational>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn rational(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

/// A pass flag, or a message for exit code 2.
type Outcome = Result<bool, String>;

fn read_fixture(path: &Path) -> Result<Value, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("{}: invalid JSON: {e}", path.display()))
}

fn emit(report: &Value, out: Option<&Path>) -> Result<(), String> {
    let text = serde_json::to_string_pretty(report).expect("serializable report") + "\n";
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn fixture_report(
    fixture: &Path,
    out: Option<&Path>,
    run: impl FnOnce(&Value) -> genform::Result<genform::fixtures::FixtureReport>,
) -> Outcome {
    let value = read_fixture(fixture)?;
    let r = run(&value).map_err(|e| format!("{}: {e}", fixture.display()))?;
    emit(&r.report, out)?;
    Ok(r.pass)
}

fn execute(command: Command) -> Outcome {
    match command {
        Command::Identities { dim, epsilon, trials, seed, suite, out } => {
            if !(1..=16).contains(&dim) {
                return Err(format!("--dim must be in 1..=16, got {dim}"));
            }
            let report = run_suite(suite, &SuiteConfig { dim, epsilon, trials, seed });
            emit(&report.to_json(), out.as_deref())?;
            Ok(report.pass())
        }
        Command::Oscillator { epsilon, v0, l, t_end, dt, out, report } => {
            let params = OscillatorParams::new(epsilon, v0, l, t_end, dt);
            let (traj, summary) = run_oscillator(&params).map_err(|e| e.to_string())?;
            std::fs::write(&out, traj.to_csv()).map_err(|e| format!("{}: {e}", out.display()))?;
            emit(&summary.report, report.as_deref())?;
            Ok(summary.pass)
        }
        Command::Hamiltonian { fixture, out } => fixture_report(&fixture, out.as_deref(), run_hamiltonian),
        Command::ConnectionThm { fixture, case, out } => {
            fixture_report(&fixture, out.as_deref(), |v| run_connection(v, case))
        }
        Command::Cover { fixture, epsilon, out } => {
            fixture_report(&fixture, out.as_deref(), |v| run_cover(v, epsilon.as_ref()))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
