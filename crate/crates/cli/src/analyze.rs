use hoa_core::heisenberg::{evolve_mode, interaction_hamiltonian};
use hoa_core::oracle::Observable;
use hoa_core::statistics::{ba_an_a, classify, factorial_moments, lee_r, Classification};
use serde::Serialize;

use crate::config::RunConfig;
use crate::output::{csv_string, fmt_float, json_string};
use crate::verify::open_session;
use crate::{CliError, ENGINE_VERSION};

pub const CSV_HEADER: [&str; 10] =
    ["state", "mode", "l", "d_series", "classification", "d_symbolic", "d_numeric", "lee_r", "ba_an_a", "note"];

#[derive(Clone, Debug, Serialize)]
pub struct Criterion {
    pub l: u32,
    pub d_series: String,
    pub classification: Classification,
    pub d_symbolic: f64,
    pub d_numeric: Option<f64>,
    /// Lee's `R(l, 1)`.
    pub lee_r: Option<f64>,
    /// Ba An's `A_l`.
    pub ba_an_a: Option<f64>,
    pub note: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ModeAnalysis {
    pub state: String,
    pub mode: String,
    pub evolved_operator: String,
    pub mean_photon: String,
    /// `⟨N^(k)(t)⟩` for `k = 1..=l_max+1`.
    pub factorial_moments: Vec<String>,
    pub criteria: Vec<Criterion>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalyzeReport {
    pub engine_version: String,
    pub process: String,
    pub interaction: String,
    pub order: u32,
    pub alpha: f64,
    pub gt: f64,
    pub g: f64,
    pub modes: Vec<ModeAnalysis>,
}

fn undefined(e: impl std::fmt::Display) -> String {
    format!("undefined ({e})")
}

pub fn run_analyze(cfg: &RunConfig, symbolic_only: bool) -> Result<AnalyzeReport, CliError> {
    let process = cfg.require_process()?;
    let h = interaction_hamiltonian(&process.spec, cfg.order);
    let mut out = Vec::new();
    for &state in &cfg.states {
        let product = state.product_state(process.mode_count());
        let point = state.point(cfg.alpha, cfg.gt);
        let (session, oracle_note) = if symbolic_only {
            (None, String::new())
        } else {
            match open_session(process, state, cfg.alpha, cfg) {
                Ok(s) => (Some(s), String::new()),
                Err(e) => (None, format!("oracle unavailable: {e}")),
            }
        };
        let psi = session.as_ref().map(|s| s.state_at(cfg.gt / cfg.g)).transpose()?;
        for mode in cfg.modes_of(process)? {
            let ev = evolve_mode(&process.spec, mode, cfg.order)?;
            let moments = factorial_moments(&h, mode, cfg.l_max() + 1, &product, cfg.order)?;
            let mut criteria = Vec::new();
            for &l in &cfg.l {
                let d = moments[l as usize + 1].sub(&moments[1].pow(l + 1))?;
                let mut notes = Vec::new();
                if !oracle_note.is_empty() {
                    notes.push(oracle_note.clone());
                }
                let lee = lee_r(&process.spec, mode, l, 1, &product, &point, cfg.order)
                    .map_err(|e| notes.push(format!("R: {}", undefined(e))))
                    .ok();
                let ba = ba_an_a(&process.spec, mode, l, &product, &point, cfg.order)
                    .map_err(|e| notes.push(format!("A: {}", undefined(e))))
                    .ok();
                criteria.push(Criterion {
                    l,
                    d_series: d.pretty(),
                    classification: classify(&d, &point)?,
                    d_symbolic: d.evaluate(&point)?.re,
                    d_numeric: session
                        .as_ref()
                        .zip(psi.as_ref())
                        .map(|(s, psi)| s.observe(psi, mode, Observable::HoaD(l))),
                    lee_r: lee,
                    ba_an_a: ba,
                    note: notes.join("; "),
                });
            }
            out.push(ModeAnalysis {
                state: state.ket(),
                mode: mode.label(),
                evolved_operator: ev.series.to_string(),
                mean_photon: moments[1].pretty(),
                factorial_moments: moments[1..].iter().map(|m| m.pretty()).collect(),
                criteria,
            });
        }
    }
    Ok(AnalyzeReport {
        engine_version: ENGINE_VERSION.to_string(),
        process: process.name.clone(),
        interaction: process.interaction(),
        order: cfg.order,
        alpha: cfg.alpha,
        gt: cfg.gt,
        g: cfg.g,
        modes: out,
    })
}

impl AnalyzeReport {
    pub fn to_csv(&self) -> Result<String, CliError> {
        let opt = |v: Option<f64>| v.map_or_else(String::new, fmt_float);
        csv_string(
            &CSV_HEADER,
            self.modes.iter().flat_map(|m| {
                m.criteria.iter().map(move |c| {
                    vec![
                        m.state.clone(),
                        m.mode.clone(),
                        c.l.to_string(),
                        c.d_series.clone(),
                        c.classification.to_string(),
                        fmt_float(c.d_symbolic),
                        opt(c.d_numeric),
                        opt(c.lee_r),
                        opt(c.ba_an_a),
                        c.note.clone(),
                    ]
                })
            }),
        )
    }

    pub fn to_json(&self) -> Result<String, CliError> {
        json_string(self)
    }

    pub fn render(&self) -> String {
        let num = |v: Option<f64>| v.map_or_else(|| "n/a".to_string(), |v| format!("{v:+.9e}"));
        let mut out = format!(
            "process {} ({}), expansion order {}\nnumeric point: |α| = {}, gt = {}, g = {}\n",
            self.process, self.interaction, self.order, self.alpha, self.gt, self.g
        );
        for m in &self.modes {
            out.push_str(&format!("\nmode {} under {}\n", m.mode, m.state));
            out.push_str(&format!("  X(t) = {}\n", m.evolved_operator));
            out.push_str(&format!("  ⟨N(t)⟩ = {}\n", m.mean_photon));
            for (k, f) in m.factorial_moments.iter().enumerate().skip(1) {
                out.push_str(&format!("  ⟨N^({})(t)⟩ = {f}\n", k + 1));
            }
            for c in &m.criteria {
                out.push_str(&format!("  d({}) = {}  [{}]\n", c.l, c.d_series, c.classification));
                out.push_str(&format!(
                    "    at the numeric point: d = {:+.9e}, oracle d = {}, R({},1) = {}, A_{} = {}\n",
                    c.d_symbolic,
                    num(c.d_numeric),
                    c.l,
                    num(c.lee_r),
                    c.l,
                    num(c.ba_an_a)
                ));
                if !c.note.is_empty() {
                    out.push_str(&format!("    note: {}\n", c.note));
                }
            }
        }
        out
    }
}
