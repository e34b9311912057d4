//! Command-line front end: symbolic antibunching tables, oracle cross-checks,
//! parameter sweeps and single-process analysis.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use hoa_core::heisenberg::InteractionError;
use hoa_core::oracle::OracleError;
use hoa_core::statistics::StatisticsError;
use thiserror::Error;

pub mod analyze;
pub mod config;
pub mod output;
pub mod process;
pub mod reference;
pub mod sweep;
pub mod table;
pub mod verify;

use config::{Grid, RunConfig, Settings};

pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Statistics(#[from] StatisticsError),
    #[error("oracle: {0}")]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Interaction(#[from] InteractionError),
    #[error("worker pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

pub fn pool(workers: usize) -> Result<rayon::ThreadPool, CliError> {
    Ok(rayon::ThreadPoolBuilder::new().num_threads(workers).build()?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Success,
    VerificationFailed,
}

impl Outcome {
    pub fn exit_code(self) -> u8 {
        match self {
            Outcome::Success => 0,
            Outcome::VerificationFailed => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "hoa", version, about = "Higher-order antibunching in multiphoton processes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Regenerate the d(1), d(2) table for every preset and initial state.
    Table(TableArgs),
    /// Cross-check symbolic (gt)² coefficients against the truncated-Fock oracle.
    Verify(VerifyArgs),
    /// Evaluate d(l) over grids of |α|² and gt.
    Sweep(SweepArgs),
    /// Print the short-time solution and criteria for one process.
    Analyze(AnalyzeArgs),
}

#[derive(Debug, Default, Args)]
pub struct CommonArgs {
    /// JSON config file; flags and environment override it.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Worker threads [env: HOA_WORKERS].
    #[arg(long)]
    pub workers: Option<usize>,
    /// Directory for `<command>.csv` and `<command>.json` [env: HOA_OUT_DIR].
    #[arg(long, value_name = "DIR")]
    pub out_dir: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    pub csv: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Default, Args)]
pub struct ProcessArgs {
    /// Preset process name.
    #[arg(long)]
    pub preset: Option<String>,
    /// Modes to report, e.g. `A,B`.
    #[arg(long, alias = "mode", value_delimiter = ',')]
    pub modes: Option<Vec<String>>,
    /// Criterion orders, e.g. `1,2`.
    #[arg(short = 'l', long = "l", value_delimiter = ',')]
    pub l: Option<Vec<u32>>,
    /// Initial states: pump-coherent, stokes-coherent, signal-coherent.
    #[arg(long, alias = "state", value_delimiter = ',')]
    pub states: Option<Vec<String>>,
    /// Coupling constant.
    #[arg(long)]
    pub g: Option<f64>,
    /// Order of the short-time expansion.
    #[arg(long)]
    pub order: Option<u32>,
}

#[derive(Debug, Default, Args)]
pub struct OracleArgs {
    /// Per-mode Fock dimensions, e.g. `40,12,8`.
    #[arg(long, value_delimiter = ',')]
    pub dims: Option<Vec<usize>>,
    /// Cap on the total Fock dimension.
    #[arg(long)]
    pub dim_cap: Option<usize>,
}

#[derive(Debug, Default, Args)]
pub struct TableArgs {
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Default, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub process: ProcessArgs,
    #[command(flatten)]
    pub oracle: OracleArgs,
    /// Coherent amplitudes to test.
    #[arg(long, value_delimiter = ',')]
    pub alphas: Option<Vec<f64>>,
    /// Two gt values for the short-time fit.
    #[arg(long, value_delimiter = ',', num_args = 1)]
    pub window: Option<Vec<f64>>,
    #[arg(long, hide = true, allow_negative_numbers = true)]
    pub corrupt_symbolic: Option<f64>,
}

#[derive(Debug, Default, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub process: ProcessArgs,
    #[command(flatten)]
    pub oracle: OracleArgs,
    /// |α|² grid: `start:stop:step` or a comma list.
    #[arg(long)]
    pub alpha2: Option<String>,
    /// gt grid: `start:stop:step` or a comma list.
    #[arg(long)]
    pub gt_grid: Option<String>,
    /// Skip the oracle column.
    #[arg(long)]
    pub symbolic_only: bool,
}

#[derive(Debug, Default, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub process: ProcessArgs,
    #[command(flatten)]
    pub oracle: OracleArgs,
    /// Coherent amplitude for the numeric evaluation.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Scaled time gt for the numeric evaluation.
    #[arg(long)]
    pub gt: Option<f64>,
    /// Skip the oracle.
    #[arg(long)]
    pub symbolic_only: bool,
}

fn base(common: &CommonArgs) -> Settings {
    Settings {
        workers: common.workers,
        out_dir: common.out_dir.clone(),
        csv: common.csv.clone(),
        json: common.json.clone(),
        ..Settings::default()
    }
}

fn with_process(mut s: Settings, p: &ProcessArgs, o: &OracleArgs) -> Settings {
    s.preset = p.preset.clone();
    s.modes = p.modes.clone();
    s.l = p.l.clone();
    s.states = p.states.clone();
    s.g = p.g;
    s.order = p.order;
    s.dims = o.dims.clone();
    s.dim_cap = o.dim_cap;
    s
}

fn resolve(flags: Settings, common: &CommonArgs) -> Result<RunConfig, CliError> {
    RunConfig::resolve(Settings::layered(flags, common.config.as_deref())?)
}

impl Command {
    fn common(&self) -> &CommonArgs {
        match self {
            Command::Table(a) => &a.common,
            Command::Verify(a) => &a.common,
            Command::Sweep(a) => &a.common,
            Command::Analyze(a) => &a.common,
        }
    }

    /// Merged and validated settings for this invocation.
    pub fn config(&self) -> Result<RunConfig, CliError> {
        let flags = match self {
            Command::Table(a) => base(&a.common),
            Command::Verify(a) => {
                let mut s = with_process(base(&a.common), &a.process, &a.oracle);
                s.alphas = a.alphas.clone();
                s.window = match a.window.as_deref() {
                    None => None,
                    Some(&[lo, hi]) => Some([lo, hi]),
                    Some(_) => return Err(CliError::Config("--window takes two values, gt1,gt2".into())),
                };
                s
            }
            Command::Sweep(a) => {
                let mut s = with_process(base(&a.common), &a.process, &a.oracle);
                s.alpha2 = a.alpha2.as_deref().map(Grid::parse).transpose()?;
                s.gt_grid = a.gt_grid.as_deref().map(Grid::parse).transpose()?;
                s
            }
            Command::Analyze(a) => {
                let mut s = with_process(base(&a.common), &a.process, &a.oracle);
                s.alpha = a.alpha;
                s.gt = a.gt;
                s
            }
        };
        resolve(flags, self.common())
    }
}

/// Runs one subcommand, printing its report to stdout and warnings to stderr.
pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let cfg = cli.command.config()?;
    for w in &cfg.warnings {
        eprintln!("warning: {w}");
    }
    let (name, text, csv, json, outcome) = match &cli.command {
        Command::Table(_) => {
            let report = table::build_table(cfg.workers)?;
            let ok = report.undocumented() == 0;
            ("table", report.render(), report.to_csv()?, report.to_json()?, ok)
        }
        Command::Verify(a) => {
            let opts = verify::VerifyOptions { corrupt: a.corrupt_symbolic };
            let report = verify::run_verify(&cfg, &opts)?;
            ("verify", report.render(), report.to_csv()?, report.to_json()?, report.all_pass())
        }
        Command::Sweep(a) => {
            let report = sweep::run_sweep(&cfg, a.symbolic_only)?;
            ("sweep", report.render(), report.to_csv()?, report.to_json()?, true)
        }
        Command::Analyze(a) => {
            let report = analyze::run_analyze(&cfg, a.symbolic_only)?;
            ("analyze", report.render(), report.to_csv()?, report.to_json()?, true)
        }
    };
    print!("{text}");
    for p in output::emit(&cfg, name, &csv, &json)? {
        eprintln!("wrote {}", p.display());
    }
    Ok(if outcome { Outcome::Success } else { Outcome::VerificationFailed })
}
