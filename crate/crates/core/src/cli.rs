//! Command-line front end: one subcommand per experiment kind, `run` for
//! any config file and `suite` for the check batteries.
//!
//! Exit status: 0 success, 1 execution error, 2 configuration error,
//! 3 failed check.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::checks::{run_suite, CheckOptions, SuiteReport, DEFAULT_SUITE_SEED};
use crate::error::{Error, Result};
use crate::experiments::{run_experiment, ExperimentConfig, ExperimentKind, ExperimentOutput};
use crate::stats::to_csv;

pub const EXIT_OK: i32 = 0;
pub const EXIT_EXECUTION: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_CHECK: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "ctxlab", version, about = "Experiments on one-way communication with imperfectly shared context")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Distance between subset-majority or block-parity functions.
    Distance(RunArgs),
    /// Gaussian sign disagreement or majority noise stability.
    Stability(RunArgs),
    /// Failure rate of the inner-product estimator.
    Gip(RunArgs),
    /// Error and message length of the uncertain-context protocol.
    IsrProtocol(RunArgs),
    /// Hash-based set recovery.
    SetRecovery(RunArgs),
    /// Shift-game reduction: games, score distance or independence.
    ShiftGame(RunArgs),
    /// Exact chromatic numbers of shift graphs.
    Chromatic(RunArgs),
    /// Exact closeness of the conditioned and noisy laws.
    Closeness(RunArgs),
    /// Information cost of a message rule.
    InfoCost(RunArgs),
    /// Gaussian approximation error against the block length.
    BerryEsseen(RunArgs),
    /// Exhaustive search for the best short protocol.
    Bruteforce(RunArgs),
    /// Any experiment kind named in the config file.
    Run(RunArgs),
    /// A check battery: acceptance, invariants or calibration.
    Suite(SuiteArgs),
}

#[derive(Args, Debug, Default)]
pub struct RunArgs {
    /// JSON config; its `kind` must match the subcommand.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long)]
    pub workers: Option<usize>,
    /// Divide the trial count by ten.
    #[arg(long)]
    pub fast: bool,
    /// Directory for `<kind>.csv`, `<kind>.json` and artifacts.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SuiteArgs {
    pub name: String,
    /// Acceptance criteria to run (repeatable); all when absent.
    #[arg(long = "criterion")]
    pub criteria: Vec<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub workers: Option<usize>,
    #[arg(long)]
    pub fast: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl Command {
    fn kind(&self) -> Option<ExperimentKind> {
        Some(match self {
            Command::Distance(_) => ExperimentKind::Distance,
            Command::Stability(_) => ExperimentKind::Stability,
            Command::Gip(_) => ExperimentKind::Gip,
            Command::IsrProtocol(_) => ExperimentKind::IsrProtocol,
            Command::SetRecovery(_) => ExperimentKind::SetRecovery,
            Command::ShiftGame(_) => ExperimentKind::ShiftGame,
            Command::Chromatic(_) => ExperimentKind::Chromatic,
            Command::Closeness(_) => ExperimentKind::Closeness,
            Command::InfoCost(_) => ExperimentKind::InfoCost,
            Command::BerryEsseen(_) => ExperimentKind::BerryEsseen,
            Command::Bruteforce(_) => ExperimentKind::Bruteforce,
            Command::Run(_) | Command::Suite(_) => return None,
        })
    }
}

/// Config from the file (if any) with command-line overrides applied.
pub fn resolve_config(kind: Option<ExperimentKind>, args: &RunArgs) -> Result<ExperimentConfig> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
            ExperimentConfig::from_json(&text)?
        }
        None => match kind {
            Some(k) => ExperimentConfig::new(k.name()),
            None => return Err(Error::Parse("`run` needs --config".into())),
        },
    };
    let named = ExperimentKind::parse(&cfg.kind)?;
    if let Some(k) = kind {
        if k != named {
            return Err(Error::Parse(format!("config kind `{}` does not match subcommand `{}`", cfg.kind, k.name())));
        }
    }
    if let Some(s) = args.seed {
        cfg.master_seed = s;
    }
    if let Some(t) = args.trials {
        cfg.trials = Some(t);
    }
    cfg.fast |= args.fast;
    if let Some(w) = args.workers {
        if w == 0 {
            return Err(Error::Parse("--workers must be positive".into()));
        }
        cfg.workers = Some(w);
    }
    if let Some(o) = &args.out {
        cfg.out_dir = Some(o.clone());
    }
    Ok(cfg)
}

fn write_files(dir: &Path, stem: &str, csv: &str, json: &str, artifacts: &[(String, String)]) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join(format!("{stem}.csv")), csv)?;
    fs::write(dir.join(format!("{stem}.json")), json)?;
    for (name, text) in artifacts {
        fs::write(dir.join(name), text)?;
    }
    Ok(())
}

fn experiment(cfg: &ExperimentConfig) -> i32 {
    let out: ExperimentOutput = match run_experiment(cfg) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return if e.is_config() { EXIT_CONFIG } else { EXIT_EXECUTION };
        }
    };
    let csv = to_csv(&out.reports);
    print!("{csv}");
    if let Some(dir) = &cfg.out_dir {
        let json = serde_json::to_string_pretty(&out.reports).unwrap_or_default();
        if let Err(e) = write_files(dir, &cfg.kind, &csv, &json, &out.artifacts) {
            eprintln!("error: writing {}: {e}", dir.display());
            return EXIT_EXECUTION;
        }
    }
    EXIT_OK
}

fn suite(args: &SuiteArgs) -> i32 {
    let opts = CheckOptions { fast: args.fast, seed: args.seed.unwrap_or(DEFAULT_SUITE_SEED) };
    let run = || run_suite(&args.name, &opts, &args.criteria);
    let report: Result<SuiteReport> = match args.workers {
        Some(0) => Err(Error::Parse("--workers must be positive".into())),
        Some(w) => match rayon::ThreadPoolBuilder::new().num_threads(w).build() {
            Ok(pool) => pool.install(run),
            Err(e) => Err(Error::InvalidParameter(e.to_string())),
        },
        None => run(),
    };
    let report = match report {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_CONFIG;
        }
    };
    let summary = report.summary();
    print!("{summary}");
    if let Some(dir) = &args.out {
        let csv = to_csv(&report.reports());
        let json = serde_json::to_string_pretty(&report.reports()).unwrap_or_default();
        let mut artifacts = report.artifacts.clone();
        artifacts.push((format!("{}.txt", report.name), summary));
        if let Err(e) = write_files(dir, &report.name, &csv, &json, &artifacts) {
            eprintln!("error: writing {}: {e}", dir.display());
            return EXIT_EXECUTION;
        }
    }
    if report.passed() {
        EXIT_OK
    } else {
        EXIT_CHECK
    }
}

/// Parses `args` (program name first) and runs; returns the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    match &cli.command {
        Command::Suite(a) => suite(a),
        cmd @ (Command::Distance(a)
        | Command::Stability(a)
        | Command::Gip(a)
        | Command::IsrProtocol(a)
        | Command::SetRecovery(a)
        | Command::ShiftGame(a)
        | Command::Chromatic(a)
        | Command::Closeness(a)
        | Command::InfoCost(a)
        | Command::BerryEsseen(a)
        | Command::Bruteforce(a)
        | Command::Run(a)) => match resolve_config(cmd.kind(), a) {
            Ok(cfg) => experiment(&cfg),
            Err(e) => {
                eprintln!("error: {e}");
                EXIT_CONFIG
            }
        },
    }
}
