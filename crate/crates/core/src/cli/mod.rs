//! The `tvd` command line.
//!
//! Tolerances and seed are resolved per scenario in increasing priority:
//! built-in defaults, the scenario's own `tolerances`/`seed` block, the
//! `TVD_TOL_ZERO` / `TVD_TOL_VIOLATION` / `TVD_SEED` environment variables,
//! then command-line flags.

mod models;
mod oracle;
mod run;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::scenario_io::{
    parse_report, parse_scenario, serialize_report, serialize_scenario, Provenance, Report, Scenario,
};
use crate::tolerance::Tolerances;

pub use models::{build_model, MODEL_NAMES};
pub use oracle::{count_disagreements, cross_check};
pub use run::{render_text, run_requests};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_DISAGREEMENT: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "tvd",
    version,
    about = "Time-reversal violation detectors for quantum toy models"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run every request of one or more scenarios.
    Check(RunArgs),
    /// Write a built-in model as a ready-to-run scenario.
    Models {
        /// One of kaon-decay, kaon-oscillation, edm, t-symmetric-s, kramers.
        name: String,
        /// Model parameter as key=value; repeatable.
        #[arg(long = "param", value_name = "K=V")]
        params: Vec<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Recompute every request by brute force and compare with the detectors.
    Oracle {
        #[command(flatten)]
        run: RunArgs,
        /// Check this previously written report instead of running the detectors.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Run the built-in invariant suites.
    Selftest,
}

#[derive(Args, Debug)]
struct RunArgs {
    /// Scenario file; repeat to run a batch.
    #[arg(long, required = true)]
    scenario: Vec<PathBuf>,
    /// Output file (default: standard output).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    tol_zero: Option<f64>,
    #[arg(long)]
    tol_violation: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Scenarios evaluated concurrently in batch mode.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Overrides {
    pub tau_zero: Option<f64>,
    pub tau_violation: Option<f64>,
    pub seed: Option<u64>,
}

impl Overrides {
    /// Reads the `TVD_*` variables through `lookup`.
    pub fn from_env(lookup: &dyn Fn(&str) -> Option<String>) -> Result<Self, String> {
        fn get<T: std::str::FromStr>(lookup: &dyn Fn(&str) -> Option<String>, key: &str) -> Result<Option<T>, String> {
            match lookup(key) {
                None => Ok(None),
                Some(v) => v
                    .trim()
                    .parse()
                    .map(Some)
                    .map_err(|_| format!("environment variable {key}={v:?} is not a valid number")),
            }
        }
        Ok(Self {
            tau_zero: get(lookup, "TVD_TOL_ZERO")?,
            tau_violation: get(lookup, "TVD_TOL_VIOLATION")?,
            seed: get(lookup, "TVD_SEED")?,
        })
    }

    /// `self` takes priority over `lower`.
    pub fn over(self, lower: Overrides) -> Overrides {
        Overrides {
            tau_zero: self.tau_zero.or(lower.tau_zero),
            tau_violation: self.tau_violation.or(lower.tau_violation),
            seed: self.seed.or(lower.seed),
        }
    }

    pub fn apply(&self, base: Tolerances) -> Tolerances {
        Tolerances {
            tau_zero: self.tau_zero.unwrap_or(base.tau_zero),
            tau_violation: self.tau_violation.unwrap_or(base.tau_violation),
            ..base
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub inputs: Vec<PathBuf>,
    pub output: Option<PathBuf>,
    pub format: Format,
    /// Environment and flag overrides, already merged.
    pub overrides: Overrides,
    pub jobs: usize,
}

/// A failure that ends the command with a nonzero status.
#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message: message.into(),
    }
}

/// Runs the command line with the process environment.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_cli(args, &|k| std::env::var(k).ok(), stdout, stderr)
}

pub fn run_cli<I, T>(
    args: I,
    env: &dyn Fn(&str) -> Option<String>,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    let result = Overrides::from_env(env)
        .map_err(input_error)
        .and_then(|env_overrides| dispatch(cli.command, env_overrides, stdout, stderr));
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "tvd: {}", f.message);
            f.code
        }
    }
}

fn dispatch(command: Command, env: Overrides, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, Failure> {
    match command {
        Command::Check(args) => {
            let config = run_config(args, env)?;
            let reports = cmd_check(&config)?;
            emit(&config, &reports, stdout)?;
            Ok(EXIT_OK)
        }
        Command::Models { name, params, out } => {
            let scenario = build_model(&name, &params).map_err(|e| input_error(e.to_string()))?;
            write_file(&out, &serialize_scenario(&scenario))?;
            Ok(EXIT_OK)
        }
        Command::Oracle { run, report } => {
            let config = run_config(run, env)?;
            let reports = cmd_oracle(&config, report.as_deref())?;
            emit(&config, &reports, stdout)?;
            let disagreements: usize = reports
                .iter()
                .map(|r| r.oracle.as_deref().map_or(0, count_disagreements))
                .sum();
            let checked: usize = reports.iter().map(|r| r.records.len()).sum();
            let _ = writeln!(
                stderr,
                "oracle: {checked} records checked, {disagreements} disagreements"
            );
            Ok(if disagreements == 0 { EXIT_OK } else { EXIT_DISAGREEMENT })
        }
        Command::Selftest => {
            let tol = env.apply(Tolerances::default());
            tol.validate().map_err(|e| input_error(e.to_string()))?;
            let results = crate::selftest::run_all(&tol, env.seed.unwrap_or(0));
            for r in &results {
                let _ = writeln!(stdout, "{r}");
            }
            let failed = results.iter().filter(|r| !r.passed()).count();
            let _ = writeln!(stdout, "{} suites, {failed} failed", results.len());
            Ok(if failed == 0 { EXIT_OK } else { 1 })
        }
    }
}

fn run_config(args: RunArgs, env: Overrides) -> Result<RunConfig, Failure> {
    if args.jobs == 0 {
        return Err(input_error("--jobs must be at least 1"));
    }
    let flags = Overrides {
        tau_zero: args.tol_zero,
        tau_violation: args.tol_violation,
        seed: args.seed,
    };
    let config = RunConfig {
        inputs: args.scenario,
        output: args.out,
        format: args.format,
        overrides: flags.over(env),
        jobs: args.jobs,
    };
    // Catch bad overrides up front, before any file is read.
    config
        .overrides
        .apply(Tolerances::default())
        .validate()
        .map_err(|e| input_error(e.to_string()))?;
    Ok(config)
}

fn load(path: &Path) -> Result<Scenario, Failure> {
    let bytes = std::fs::read(path).map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    parse_scenario(&bytes).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn resolve(scenario: &Scenario, overrides: &Overrides) -> (Tolerances, Option<u64>) {
    let tol = overrides.apply(scenario.tolerances(Tolerances::default()));
    (tol, overrides.seed.or(scenario.seed))
}

fn evaluate(path: &Path, overrides: &Overrides) -> Result<(Scenario, Report, Tolerances), Failure> {
    let scenario = load(path)?;
    let (tol, seed) = resolve(&scenario, overrides);
    tol.validate()
        .map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    let mut report = Report::new(Provenance {
        tolerances: tol,
        seed,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
    });
    report.records = run_requests(&scenario, &tol).map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    Ok((scenario, report, tol))
}

/// Evaluates each input in its own task and returns results in input order.
fn batch<T: Send>(config: &RunConfig, job: impl Fn(&Path) -> Result<T, Failure> + Sync) -> Result<Vec<T>, Failure> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .map_err(|e| input_error(format!("cannot start worker pool: {e}")))?;
    pool.install(|| config.inputs.par_iter().map(|p| job(p)).collect())
}

pub fn cmd_check(config: &RunConfig) -> Result<Vec<Report>, Failure> {
    batch(config, |path| evaluate(path, &config.overrides).map(|(_, r, _)| r))
}

/// Runs (or loads) each report and attaches the oracle cross-check.
pub fn cmd_oracle(config: &RunConfig, existing: Option<&Path>) -> Result<Vec<Report>, Failure> {
    if existing.is_some() && config.inputs.len() != 1 {
        return Err(input_error("--report needs exactly one --scenario"));
    }
    batch(config, |path| {
        let (scenario, mut report, tol) = match existing {
            None => evaluate(path, &config.overrides)?,
            Some(rp) => {
                let scenario = load(path)?;
                let bytes = std::fs::read(rp).map_err(|e| input_error(format!("{}: {e}", rp.display())))?;
                let report = parse_report(&bytes).map_err(|e| input_error(format!("{}: {e}", rp.display())))?;
                let tol = report.provenance.tolerances;
                (scenario, report, tol)
            }
        };
        report.oracle = Some(cross_check(&scenario, &report.records, &tol));
        Ok(report)
    })
}

fn emit(config: &RunConfig, reports: &[Report], stdout: &mut dyn Write) -> Result<(), Failure> {
    let bytes = match config.format {
        Format::Json => {
            let mut out = Vec::new();
            if reports.len() == 1 {
                out.extend(serialize_report(&reports[0]));
            } else {
                out.push(b'[');
                for (k, r) in reports.iter().enumerate() {
                    if k > 0 {
                        out.push(b',');
                    }
                    out.extend(serialize_report(r));
                }
                out.push(b']');
            }
            out.push(b'\n');
            out
        }
        Format::Text => {
            let mut out = String::new();
            for (path, r) in config.inputs.iter().zip(reports) {
                if reports.len() > 1 {
                    out.push_str(&format!("# {}\n", path.display()));
                }
                out.push_str(&render_text(&r.records));
                for o in r.oracle.iter().flatten() {
                    let mark = if o.agrees { "agree" } else { "DISAGREE" };
                    out.push_str(&format!("[{}] oracle {mark}: {}\n", o.index, o.detail));
                }
            }
            out.into_bytes()
        }
    };
    match &config.output {
        Some(path) => write_file(path, &bytes),
        None => stdout
            .write_all(&bytes)
            .map_err(|e| input_error(format!("cannot write output: {e}"))),
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    std::fs::write(path, bytes).map_err(|e| input_error(format!("{}: {e}", path.display())))
}
