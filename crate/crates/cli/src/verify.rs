use std::fmt;

use hoa_core::heisenberg::interaction_hamiltonian;
use hoa_core::oracle::{initial_modes, Observable, OracleError, OracleSession, TruncationSpec};
use hoa_core::statistics::{factorial_moments, ExpectationSeries};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::RunConfig;
use crate::output::{csv_string, fmt_float, json_string};
use crate::process::{Process, StateChoice};
use crate::reference::{self, exception};
use crate::{pool, CliError, ENGINE_VERSION};

/// Relative agreement required between oracle and symbolic coefficients.
pub const REL_TOL: f64 = 0.01;
/// Largest `|coefficient|` accepted for a cell whose symbolic coefficient is 0.
pub const ZERO_TOL: f64 = 1e-6;

pub const CSV_HEADER: [&str; 11] = [
    "process",
    "mode",
    "state",
    "quantity",
    "alpha",
    "symbolic",
    "numeric",
    "rel_error",
    "zero_residual",
    "status",
    "note",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Quantity {
    D(u32),
    MeanPhoton,
}

impl Quantity {
    fn observable(self) -> Observable {
        match self {
            Quantity::D(l) => Observable::HoaD(l),
            Quantity::MeanPhoton => Observable::FactorialMoment(1),
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Quantity::D(l) => write!(f, "d({l})"),
            Quantity::MeanPhoton => f.write_str("<N>"),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct VerifyOptions {
    /// Test hook: scales every nonzero symbolic coefficient by `1 + factor`.
    pub corrupt: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyRow {
    pub process: String,
    pub mode: String,
    pub state: String,
    pub quantity: Quantity,
    pub alpha: f64,
    /// Symbolic `(gt)²` coefficient at this amplitude.
    pub symbolic: f64,
    /// Oracle estimate of the same coefficient.
    pub numeric: Option<f64>,
    pub rel_error: Option<f64>,
    /// Raw oracle value at the larger window time, for cells whose symbolic
    /// coefficient is 0.
    pub zero_residual: Option<f64>,
    pub pass: bool,
    pub note: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub engine_version: String,
    pub window: [f64; 2],
    pub g: f64,
    pub rows: Vec<VerifyRow>,
}

struct Task {
    process: Process,
    state: StateChoice,
    alpha: f64,
}

fn judge(symbolic: f64, numeric: f64) -> (bool, Option<f64>) {
    if symbolic == 0.0 {
        (numeric.abs() <= ZERO_TOL, None)
    } else {
        let rel = (numeric - symbolic).abs() / symbolic.abs();
        (rel <= REL_TOL, Some(rel))
    }
}

fn grade_two(series: &ExpectationSeries, state: StateChoice, alpha: f64) -> Result<f64, CliError> {
    Ok(series.coefficient_value(2, &state.point(alpha, 1.0))?.re)
}

/// Oracle session for one process, initial state and amplitude, truncated
/// per `cfg.dims` or the default rule for the largest requested `l`.
pub fn open_session(process: &Process, state: StateChoice, alpha: f64, cfg: &RunConfig) -> Result<OracleSession, OracleError> {
    let product = state.product_state(process.mode_count());
    let init = initial_modes(&product, &state.point(alpha, cfg.gt))?;
    let trunc = match &cfg.dims {
        Some(d) => TruncationSpec::with_cap(d.clone(), cfg.dim_cap)?,
        None => {
            let t = TruncationSpec::default_for(&process.spec, &init, cfg.l_max())?;
            TruncationSpec::with_cap(t.dims().to_vec(), cfg.dim_cap)?
        }
    };
    OracleSession::new(&process.spec, &init, &trunc, cfg.g)
}

fn run_task(task: &Task, cfg: &RunConfig, opts: &VerifyOptions) -> Result<Vec<VerifyRow>, CliError> {
    let Task { process, state, alpha } = task;
    let (state, alpha) = (*state, *alpha);
    let modes = cfg.modes_of(process)?;
    let l_values = &cfg.l;
    let l_max = cfg.l_max();
    let product = state.product_state(process.mode_count());
    let h = interaction_hamiltonian(&process.spec, 2);

    let session = open_session(process, state, alpha, cfg);

    let mut rows = Vec::new();
    for &mode in &modes {
        let moments = factorial_moments(&h, mode, l_max + 1, &product, 2)?;
        let mut quantities: Vec<(Quantity, ExpectationSeries)> = l_values
            .iter()
            .map(|&l| Ok((Quantity::D(l), moments[l as usize + 1].sub(&moments[1].pow(l + 1))?)))
            .collect::<Result<_, CliError>>()?;
        quantities.push((Quantity::MeanPhoton, moments[1].clone()));

        for (quantity, series) in quantities {
            let exact = grade_two(&series, state, alpha)?;
            let symbolic = match opts.corrupt {
                Some(f) if exact != 0.0 => exact * (1.0 + f),
                _ => exact,
            };
            let mut notes = Vec::new();
            let (numeric, zero_residual, pass, rel_error) = match &session {
                Err(e) => {
                    notes.push(format!("oracle unavailable: {e}"));
                    (None, None, false, None)
                }
                Ok(s) => match s.leading_coefficient(mode, quantity.observable(), &cfg.window) {
                    Err(e) => {
                        notes.push(format!("oracle did not converge: {e}"));
                        (None, None, false, None)
                    }
                    Ok(est) => {
                        let (pass, rel) = judge(symbolic, est.coefficient);
                        let residual = if exact == 0.0 {
                            Some(s.value_at(mode, quantity.observable(), cfg.window.gt2 / cfg.g)?)
                        } else {
                            None
                        };
                        (Some(est.coefficient), residual, pass, rel)
                    }
                },
            };
            if let (Quantity::D(l), Some(p)) = (quantity, process.preset) {
                if let Some(e) = exception(p, mode, state, l) {
                    let rejected = numeric.is_some_and(|n| n.abs() > ZERO_TOL);
                    notes.push(format!(
                        "reference value 0 {} by the oracle; engine {}",
                        if rejected { "rejected" } else { "NOT rejected" },
                        crate::output::compact(&e.engine_series().pretty())
                    ));
                }
            }
            if quantity == Quantity::MeanPhoton
                && process.preset == Some(reference::SIGNAL_MEAN_PRESET)
                && mode == reference::SIGNAL_MEAN_MODE
                && state == StateChoice::PumpCoherent
            {
                let per_unit = numeric.map(|n| n / alpha.powi(6));
                notes.push(format!(
                    "reference claims {}; oracle coefficient of (gt)²|α|⁶ = {}",
                    reference::SIGNAL_MEAN_REFERENCE,
                    per_unit.map_or_else(|| "n/a".to_string(), |v| format!("{v:.6}"))
                ));
            }
            rows.push(VerifyRow {
                process: process.name.clone(),
                mode: mode.label(),
                state: state.ket(),
                quantity,
                alpha,
                symbolic,
                numeric,
                rel_error,
                zero_residual,
                pass,
                note: notes.join("; "),
            });
        }
    }
    Ok(rows)
}

/// Oracle cross-check of every requested cell, fanned out over processes,
/// states and amplitudes.
pub fn run_verify(cfg: &RunConfig, opts: &VerifyOptions) -> Result<VerifyReport, CliError> {
    let processes = cfg.processes();
    for p in &processes {
        cfg.modes_of(p)?;
    }
    let mut tasks = Vec::new();
    for process in &processes {
        for &state in &cfg.states {
            for &alpha in &cfg.alphas {
                tasks.push(Task { process: process.clone(), state, alpha });
            }
        }
    }
    let chunks: Vec<Result<Vec<VerifyRow>, CliError>> =
        pool(cfg.workers)?.install(|| tasks.par_iter().map(|t| run_task(t, cfg, opts)).collect());
    let mut rows = Vec::new();
    for c in chunks {
        rows.extend(c?);
    }
    Ok(VerifyReport { engine_version: ENGINE_VERSION.to_string(), window: [cfg.window.gt1, cfg.window.gt2], g: cfg.g, rows })
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| !r.pass).count()
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let opt = |v: Option<f64>| v.map_or_else(String::new, fmt_float);
        csv_string(
            &CSV_HEADER,
            self.rows.iter().map(|r| {
                vec![
                    r.process.clone(),
                    r.mode.clone(),
                    r.state.clone(),
                    r.quantity.to_string(),
                    fmt_float(r.alpha),
                    fmt_float(r.symbolic),
                    opt(r.numeric),
                    opt(r.rel_error),
                    opt(r.zero_residual),
                    if r.pass { "PASS" } else { "FAIL" }.to_string(),
                    r.note.clone(),
                ]
            }),
        )
    }

    pub fn to_json(&self) -> Result<String, CliError> {
        json_string(self)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for r in &self.rows {
            let numeric = r.numeric.map_or_else(|| "n/a".to_string(), |v| format!("{v:+.6e}"));
            let err = match (r.rel_error, r.numeric) {
                (Some(e), _) => format!("rel {e:.2e}"),
                (None, Some(n)) => format!("|c| {:.2e} (tol {ZERO_TOL:.0e})", n.abs()),
                _ => String::new(),
            };
            out.push_str(&format!(
                "{} {} mode {} {} {} α={}: symbolic {:+.6e} numeric {numeric} {err}",
                if r.pass { "PASS" } else { "FAIL" },
                r.process,
                r.mode,
                r.state,
                r.quantity,
                r.alpha,
                r.symbolic
            ));
            if !r.note.is_empty() {
                out.push_str(&format!("  [{}]", r.note));
            }
            out.push('\n');
        }
        out.push_str(&format!("{}/{} cells PASS\n", self.rows.len() - self.failures(), self.rows.len()));
        out
    }
}
