//! Command-line front end: scenario runs and curvature-function
//! certification.
//!
//! Exit codes: 0 success (run converged with all bounds flags true, or all
//! checks passed), 1 honest negative outcome, 2 invalid arguments or
//! scenario validation failure.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use clap::{Parser, Subcommand};

use weinflow::flow;
use weinflow::monitors::verify_bounds;
use weinflow::output::write_run;
use weinflow::scenario::{function_from_token, Scenario, ScenarioConfig};
use weinflow::symfunc::{assumption_suite, lemma_check};
use weinflow::Result;

#[derive(Parser)]
#[command(name = "weinflow", version, about = "Curvature-flow scenario runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one or more flow scenarios and write their artifacts.
    Run {
        /// Scenario file; repeat for a sweep.
        #[arg(long, required = true)]
        config: Vec<PathBuf>,
        /// Root directory receiving one subdirectory per scenario.
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Worker threads for independent scenarios.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Certify a curvature function against the structural requirements.
    Check {
        /// Function token: sigma1, gauss_root, harmonic_mean,
        /// sigma_k_root:K, quotient, quotient:K.
        #[arg(long)]
        function: String,
        /// Number of principal curvatures.
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Accept functions that stay positive on the cone boundary.
        #[arg(long)]
        allow_nonvanishing: bool,
    },
}

struct RunOutcome {
    line: String,
    accepted: bool,
}

/// Pinned thresholds for the pinching sweep: the normalized excess over the
/// bound, and the two-curvature identity gap.
const LEMMA_EXCESS_TOL: f64 = 1e-9;
const LEMMA_EQUALITY_TOL: f64 = 1e-12;

fn execute_scenario(scenario: &Scenario, out_root: &Path) -> Result<RunOutcome> {
    let initial_report = scenario.surface.geometry(&scenario.initial)?;
    let theta = scenario.config.theta.resolve(&initial_report);
    let (records, state, summary) =
        flow::run(&scenario.surface, &scenario.initial, &scenario.config)?;
    let bounds = verify_bounds(&records, theta, scenario.config.tol_residual)?;
    let dir = out_root.join(&scenario.directory);
    write_run(&dir, &records, &state.report, &summary, &bounds)?;

    let accepted = summary.converged && bounds.all_passed();
    let mut line = format!(
        "run {}: converged={} reason={} steps={} t_final={:.6e}",
        scenario.directory,
        summary.converged,
        summary.reason.label(),
        summary.steps,
        summary.t_final,
    );
    if let Some(r) = summary.r_final {
        line.push_str(&format!(" r_final={r:.10e}"));
    }
    let failed: Vec<&str> = bounds
        .flags()
        .iter()
        .filter(|(_, ok)| !ok)
        .map(|(name, _)| *name)
        .collect();
    if failed.is_empty() {
        line.push_str(" bounds=ok");
    } else {
        line.push_str(&format!(" bounds_failed={}", failed.join(",")));
    }
    Ok(RunOutcome { line, accepted })
}

fn run_command(configs: &[PathBuf], out: &Path, jobs: usize) -> ExitCode {
    // all scenarios are parsed and cross-validated before any run starts,
    // so a typo in the last config of a sweep surfaces immediately
    let mut scenarios = Vec::new();
    for path in configs {
        match ScenarioConfig::load(path).and_then(|c| c.build()) {
            Ok(s) => scenarios.push(s),
            Err(e) => {
                eprintln!("error in {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
    }

    let results: Vec<Option<Result<RunOutcome>>> = {
        let slots = Mutex::new((0..scenarios.len()).map(|_| None).collect::<Vec<_>>());
        let next = AtomicUsize::new(0);
        let workers = jobs.max(1).min(scenarios.len().max(1));
        std::thread::scope(|scope| {
            for _ in 0..workers {
                scope.spawn(|| loop {
                    let i = next.fetch_add(1, Ordering::Relaxed);
                    if i >= scenarios.len() {
                        break;
                    }
                    let outcome = execute_scenario(&scenarios[i], out);
                    slots.lock().unwrap()[i] = Some(outcome);
                });
            }
        });
        slots.into_inner().unwrap()
    };

    let mut any_error = false;
    let mut all_accepted = true;
    for (scenario, slot) in scenarios.iter().zip(results) {
        match slot.expect("every scenario was executed") {
            Ok(outcome) => {
                println!("{}", outcome.line);
                all_accepted &= outcome.accepted;
            }
            Err(e) => {
                eprintln!("error in {}: {e}", scenario.directory);
                any_error = true;
            }
        }
    }
    if any_error {
        ExitCode::from(2)
    } else if all_accepted {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn check_command(
    function: &str,
    n: usize,
    samples: usize,
    seed: u64,
    allow_nonvanishing: bool,
) -> ExitCode {
    let f = match function_from_token(function, n) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let report = assumption_suite(&f, samples, seed);
    print!("{}", report.render());

    let sweep = lemma_check(&f, samples, seed);
    let pinching_ok = sweep.worst_excess <= LEMMA_EXCESS_TOL;
    println!(
        "  [{}] {:<24} worst {:>13.6e}  normalized excess over the pinching bound",
        if pinching_ok { "pass" } else { "FAIL" },
        "pinching_sweep",
        sweep.worst_excess
    );
    let equality_ok = match sweep.max_equality_gap {
        Some(gap) => {
            let ok = gap <= LEMMA_EQUALITY_TOL;
            println!(
                "  [{}] {:<24} worst {:>13.6e}  two-curvature identity gap",
                if ok { "pass" } else { "FAIL" },
                "pinching_equality",
                gap
            );
            ok
        }
        None => true,
    };

    let structural_ok = if allow_nonvanishing {
        if !report.all_passed() && report.passed_allowing_nonvanishing() {
            println!("  note: boundary vanishing exempted (--allow-nonvanishing)");
        }
        report.passed_allowing_nonvanishing()
    } else {
        report.all_passed()
    };

    if structural_ok && pinching_ok && equality_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Run { config, out, jobs } => run_command(&config, &out, jobs),
        Command::Check {
            function,
            n,
            samples,
            seed,
            allow_nonvanishing,
        } => check_command(&function, n, samples, seed, allow_nonvanishing),
    }
}
