//! Run configuration: a JSON file, environment overrides and command-line
//! flags, merged in that order of increasing priority.

use std::path::{Path, PathBuf};

use hoa_core::algebra::ModeId;
use hoa_core::heisenberg::{ModeCoupling, Preset, VALIDATED_ORDER};
use hoa_core::oracle::{Window, DEFAULT_DIMENSION_CAP};
use serde::Deserialize;

use crate::process::{parse_mode, Process, StateChoice};
use crate::CliError;

pub const WORKERS_ENV: &str = "HOA_WORKERS";
pub const OUT_DIR_ENV: &str = "HOA_OUT_DIR";

/// Largest number of grid points a sweep accepts.
pub const MAX_GRID_POINTS: usize = 1_000_000;

/// Above this `gt` the truncated series is no longer a short-time expansion.
pub const SHORT_TIME_LIMIT: f64 = 0.1;

/// Grid given either as an explicit list or as `start:stop:step`.
#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Grid {
    List(Vec<f64>),
    Range(String),
}

impl Grid {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let text = text.trim();
        if text.contains(':') {
            return Ok(Grid::Range(text.to_string()));
        }
        if text.is_empty() {
            return Ok(Grid::List(Vec::new()));
        }
        text.split(',')
            .map(|v| v.trim().parse::<f64>().map_err(|_| CliError::Config(format!("bad grid value `{v}`"))))
            .collect::<Result<Vec<_>, _>>()
            .map(Grid::List)
    }

    /// Expands the grid; ranges include `stop` when it lies on the lattice.
    pub fn values(&self) -> Result<Vec<f64>, CliError> {
        match self {
            Grid::List(v) => Ok(v.clone()),
            Grid::Range(text) => {
                let parts: Vec<&str> = text.split(':').map(str::trim).collect();
                let [start, stop, step] = parts.as_slice() else {
                    return Err(CliError::Config(format!("grid `{text}` is not start:stop:step")));
                };
                let num = |s: &str| s.parse::<f64>().map_err(|_| CliError::Config(format!("bad grid value `{s}`")));
                let (start, stop, step) = (num(start)?, num(stop)?, num(step)?);
                if !(step > 0.0 && step.is_finite() && start.is_finite() && stop.is_finite()) {
                    return Err(CliError::Config(format!("grid `{text}` needs a positive finite step")));
                }
                if stop < start {
                    return Ok(Vec::new());
                }
                let count = ((stop - start) / step * (1.0 + 1e-12)).floor() + 1.0;
                if count > MAX_GRID_POINTS as f64 {
                    return Err(CliError::Config(format!(
                        "grid `{text}` has {count} points, more than {MAX_GRID_POINTS}"
                    )));
                }
                Ok((0..count as usize).map(|i| start + i as f64 * step).collect())
            }
        }
    }
}

/// Every tunable, all optional. The same shape is read from the config file
/// and produced from flags and the environment.
#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Settings {
    pub preset: Option<String>,
    pub interaction: Option<Vec<ModeCoupling>>,
    pub modes: Option<Vec<String>>,
    pub l: Option<Vec<u32>>,
    pub states: Option<Vec<String>>,
    pub alpha: Option<f64>,
    pub alphas: Option<Vec<f64>>,
    pub g: Option<f64>,
    pub gt: Option<f64>,
    pub window: Option<[f64; 2]>,
    pub dims: Option<Vec<usize>>,
    pub dim_cap: Option<usize>,
    pub order: Option<u32>,
    pub alpha2: Option<Grid>,
    pub gt_grid: Option<Grid>,
    pub workers: Option<usize>,
    pub out_dir: Option<PathBuf>,
    pub csv: Option<PathBuf>,
    pub json: Option<PathBuf>,
}

macro_rules! merge_fields {
    ($hi:ident, $lo:ident; $($f:ident),*) => {
        Settings { $($f: $hi.$f.or($lo.$f)),* }
    };
}

impl Settings {
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("invalid config {}: {e}", path.display())))
    }

    /// Worker count and output directory from the environment.
    pub fn from_env() -> Result<Self, CliError> {
        let mut s = Settings::default();
        if let Ok(v) = std::env::var(WORKERS_ENV) {
            let n = v
                .trim()
                .parse::<usize>()
                .map_err(|_| CliError::Config(format!("{WORKERS_ENV}=`{v}` is not a worker count")))?;
            s.workers = Some(n);
        }
        if let Some(v) = std::env::var_os(OUT_DIR_ENV) {
            if !v.is_empty() {
                s.out_dir = Some(PathBuf::from(v));
            }
        }
        Ok(s)
    }

    /// Fields of `self` win over those of `lower`.
    pub fn over(self, lower: Settings) -> Settings {
        merge_fields!(self, lower; preset, interaction, modes, l, states, alpha, alphas, g, gt, window, dims,
            dim_cap, order, alpha2, gt_grid, workers, out_dir, csv, json)
    }

    /// Flags over environment over file.
    pub fn layered(flags: Settings, config: Option<&Path>) -> Result<Settings, CliError> {
        let file = match config {
            Some(p) => Settings::from_file(p)?,
            None => Settings::default(),
        };
        Ok(flags.over(Settings::from_env()?).over(file))
    }
}

/// Validated configuration shared by all subcommands.
#[derive(Clone, Debug)]
pub struct RunConfig {
    /// `None` means every preset.
    pub process: Option<Process>,
    /// Requested mode labels, resolved per process; empty means all modes.
    pub modes: Vec<String>,
    pub l: Vec<u32>,
    pub states: Vec<StateChoice>,
    pub alpha: f64,
    pub alphas: Vec<f64>,
    pub g: f64,
    pub gt: f64,
    pub window: Window,
    pub dims: Option<Vec<usize>>,
    pub dim_cap: usize,
    pub order: u32,
    pub alpha2: Option<Vec<f64>>,
    pub gt_grid: Vec<f64>,
    pub workers: usize,
    pub out_dir: Option<PathBuf>,
    pub csv: Option<PathBuf>,
    pub json: Option<PathBuf>,
    pub warnings: Vec<String>,
}

fn bad(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

fn positive(name: &str, v: f64) -> Result<f64, CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(bad(format!("{name} must be positive and finite, got {v}")))
    }
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

impl RunConfig {
    pub fn resolve(s: Settings) -> Result<Self, CliError> {
        let mut warnings = Vec::new();
        let process = match (s.preset, s.interaction) {
            (Some(_), Some(_)) => return Err(bad("give either a preset or an inline interaction, not both")),
            (Some(name), None) => {
                Some(Process::from_preset(name.parse::<Preset>().map_err(|e| bad(e.to_string()))?))
            }
            (None, Some(couplings)) => Some(Process::inline(couplings)?),
            (None, None) => None,
        };

        let modes = s.modes.unwrap_or_default();
        if let Some(p) = &process {
            for m in &modes {
                parse_mode(m, p)?;
            }
        } else {
            for m in &modes {
                ModeId::from_label(m).ok_or_else(|| bad(format!("unknown mode `{m}`")))?;
            }
        }

        let l = s.l.unwrap_or_else(|| vec![1]);
        if l.is_empty() {
            return Err(bad("at least one l value is required"));
        }
        if let Some(&bad_l) = l.iter().find(|&&v| v == 0 || v > 6) {
            return Err(bad(format!("l must lie in 1..=6, got {bad_l}")));
        }

        let states = match s.states {
            Some(names) => names.iter().map(|n| n.parse()).collect::<Result<Vec<StateChoice>, _>>()?,
            None => vec![StateChoice::PumpCoherent],
        };
        if states.is_empty() {
            return Err(bad("at least one initial state is required"));
        }

        let alpha = s.alpha.unwrap_or(1.0);
        if !(alpha >= 0.0 && alpha.is_finite()) {
            return Err(bad(format!("alpha must be non-negative, got {alpha}")));
        }
        let alphas = s.alphas.unwrap_or_else(|| vec![0.5, 1.0]);
        if alphas.is_empty() || alphas.iter().any(|a| !(*a > 0.0 && a.is_finite())) {
            return Err(bad("alphas must be a non-empty list of positive amplitudes"));
        }
        let g = positive("g", s.g.unwrap_or(1.0))?;
        let gt = positive("gt", s.gt.unwrap_or(1e-3))?;

        let [gt1, gt2] = s.window.unwrap_or([5e-4, 1e-3]);
        if !(gt1 > 0.0 && gt2 > gt1 && gt2.is_finite()) {
            return Err(bad(format!("window must satisfy 0 < gt1 < gt2, got [{gt1}, {gt2}]")));
        }
        let window = Window { gt1, gt2, ..Window::default() };

        let order = s.order.unwrap_or(VALIDATED_ORDER);
        if order == 0 || order > 4 {
            return Err(bad(format!("order must lie in 1..=4, got {order}")));
        }
        if order > VALIDATED_ORDER {
            warnings.push(format!("order {order} is beyond the validated order {VALIDATED_ORDER}"));
        }

        let alpha2 = match s.alpha2 {
            Some(grid) => {
                let v = grid.values()?;
                if v.iter().any(|x| !(*x >= 0.0 && x.is_finite())) {
                    return Err(bad("|alpha|^2 values must be non-negative"));
                }
                Some(v)
            }
            None => None,
        };
        let gt_grid = match s.gt_grid {
            Some(grid) => grid.values()?,
            None => vec![gt],
        };
        for &v in gt_grid.iter().chain([gt, gt2].iter()) {
            positive("gt", v)?;
            if v > SHORT_TIME_LIMIT {
                warnings.push(format!("gt = {v} is outside short-time regime (gt ≤ {SHORT_TIME_LIMIT})"));
            }
        }
        warnings.dedup();

        let workers = s.workers.unwrap_or_else(default_workers);
        if workers == 0 {
            return Err(bad("worker count must be at least 1"));
        }

        Ok(Self {
            process,
            modes,
            l,
            states,
            alpha,
            alphas,
            g,
            gt,
            window,
            dims: s.dims,
            dim_cap: s.dim_cap.unwrap_or(DEFAULT_DIMENSION_CAP),
            order,
            alpha2,
            gt_grid,
            workers,
            out_dir: s.out_dir,
            csv: s.csv,
            json: s.json,
            warnings,
        })
    }

    /// The configured process, required by single-process commands.
    pub fn require_process(&self) -> Result<&Process, CliError> {
        self.process
            .as_ref()
            .ok_or_else(|| bad(format!("no process given; use --preset ({})", Preset::names())))
    }

    /// Processes to iterate over: the configured one, or every preset.
    pub fn processes(&self) -> Vec<Process> {
        match &self.process {
            Some(p) => vec![p.clone()],
            None => Process::all_presets(),
        }
    }

    /// Requested modes of `process`, or all of them.
    pub fn modes_of(&self, process: &Process) -> Result<Vec<ModeId>, CliError> {
        if self.modes.is_empty() {
            return Ok((0..process.mode_count()).map(ModeId).collect());
        }
        self.modes.iter().map(|m| parse_mode(m, process)).collect()
    }

    pub fn l_max(&self) -> u32 {
        self.l.iter().copied().max().unwrap_or(1)
    }
}
