use hoa_core::algebra::ModeId;
use hoa_core::heisenberg::interaction_hamiltonian;
use hoa_core::statistics::{classify, factorial_moments, Classification, ExpectationSeries};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::RunConfig;
use crate::output::{csv_string, fmt_float, json_string};
use crate::process::StateChoice;
use crate::verify::open_session;
use crate::{pool, CliError, ENGINE_VERSION};

pub const CSV_HEADER: [&str; 7] = ["|alpha|^2", "gt", "mode", "l", "d_symbolic", "d_numeric", "classification"];

#[derive(Clone, Debug, Serialize)]
pub struct SweepPoint {
    pub alpha2: f64,
    pub gt: f64,
    pub mode: String,
    pub l: u32,
    pub d_symbolic: f64,
    pub d_numeric: Option<f64>,
    pub classification: Classification,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Trend {
    Decreasing,
    Increasing,
    Constant,
    NonMonotone,
}

impl Trend {
    /// Trend of a sequence, treating steps within `tol` as flat.
    pub fn of(values: &[f64], tol: f64) -> Trend {
        let (mut down, mut up) = (false, false);
        for w in values.windows(2) {
            let step = w[1] - w[0];
            if step < -tol {
                down = true;
            } else if step > tol {
                up = true;
            }
        }
        match (down, up) {
            (true, false) => Trend::Decreasing,
            (false, true) => Trend::Increasing,
            (false, false) => Trend::Constant,
            (true, true) => Trend::NonMonotone,
        }
    }

    fn label(self) -> &'static str {
        match self {
            Trend::Decreasing => "decreasing",
            Trend::Increasing => "increasing",
            Trend::Constant => "constant",
            Trend::NonMonotone => "not monotone",
        }
    }
}

/// Behavior of `d(l)` along the `|α|²` axis at one `gt`.
#[derive(Clone, Debug, Serialize)]
pub struct Monotonicity {
    pub mode: String,
    pub l: u32,
    pub gt: f64,
    pub symbolic: Trend,
    pub numeric: Option<Trend>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub engine_version: String,
    pub process: String,
    pub state: String,
    pub points: Vec<SweepPoint>,
    pub monotonicity: Vec<Monotonicity>,
    pub warnings: Vec<String>,
}

fn d_series(cfg: &RunConfig, mode: ModeId, state: StateChoice) -> Result<Vec<(u32, ExpectationSeries)>, CliError> {
    let process = cfg.require_process()?;
    let h = interaction_hamiltonian(&process.spec, cfg.order);
    let m = factorial_moments(&h, mode, cfg.l_max() + 1, &state.product_state(process.mode_count()), cfg.order)?;
    cfg.l
        .iter()
        .map(|&l| Ok((l, m[l as usize + 1].sub(&m[1].pow(l + 1))?)))
        .collect()
}

/// `d(l)` on the `|α|² × gt` grid, one oracle session per `|α|²` value.
pub fn run_sweep(cfg: &RunConfig, symbolic_only: bool) -> Result<SweepReport, CliError> {
    let process = cfg.require_process()?;
    let state = match cfg.states.as_slice() {
        [s] => *s,
        _ => return Err(CliError::Config("sweep takes exactly one initial state".into())),
    };
    let alpha2 = cfg.alpha2.clone().unwrap_or_else(|| vec![cfg.alpha * cfg.alpha]);
    if alpha2.is_empty() || cfg.gt_grid.is_empty() {
        return Err(CliError::Config("sweep grid is empty".into()));
    }
    let modes = cfg.modes_of(process)?;
    let series: Vec<(ModeId, Vec<(u32, ExpectationSeries)>)> =
        modes.iter().map(|&m| Ok((m, d_series(cfg, m, state)?))).collect::<Result<_, CliError>>()?;

    let sweep_one = |a2: f64| -> Result<(Vec<SweepPoint>, Option<String>), CliError> {
        let alpha = a2.sqrt();
        let (session, warning) = if symbolic_only {
            (None, None)
        } else {
            match open_session(process, state, alpha, cfg) {
                Ok(s) => (Some(s), None),
                Err(e) => (None, Some(format!("|alpha|^2 = {a2}: oracle unavailable: {e}"))),
            }
        };
        let mut points = Vec::new();
        for &gt in &cfg.gt_grid {
            let point = state.point(alpha, gt);
            let psi = session.as_ref().map(|s| s.state_at(gt / cfg.g)).transpose()?;
            for (mode, ds) in &series {
                for (l, d) in ds {
                    points.push(SweepPoint {
                        alpha2: a2,
                        gt,
                        mode: mode.label(),
                        l: *l,
                        d_symbolic: d.evaluate(&point)?.re,
                        d_numeric: session
                            .as_ref()
                            .zip(psi.as_ref())
                            .map(|(s, psi)| s.observe(psi, *mode, hoa_core::oracle::Observable::HoaD(*l))),
                        classification: classify(d, &point)?,
                    });
                }
            }
        }
        Ok((points, warning))
    };
    let chunks: Vec<Result<_, CliError>> = pool(cfg.workers)?.install(|| alpha2.par_iter().map(|&a2| sweep_one(a2)).collect());
    let mut points = Vec::new();
    let mut warnings = Vec::new();
    for c in chunks {
        let (p, w) = c?;
        points.extend(p);
        warnings.extend(w);
    }

    let mut monotonicity = Vec::new();
    if alpha2.len() > 1 {
        for (mode, ds) in &series {
            for (l, _) in ds {
                for &gt in &cfg.gt_grid {
                    let line: Vec<&SweepPoint> = points
                        .iter()
                        .filter(|p| p.mode == mode.label() && p.l == *l && p.gt == gt)
                        .collect();
                    let sym: Vec<f64> = line.iter().map(|p| p.d_symbolic).collect();
                    let num: Option<Vec<f64>> = line.iter().map(|p| p.d_numeric).collect();
                    let scale = sym.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                    let tol = 1e-12 * scale;
                    monotonicity.push(Monotonicity {
                        mode: mode.label(),
                        l: *l,
                        gt,
                        symbolic: Trend::of(&sym, tol),
                        numeric: num.map(|n| Trend::of(&n, 1e-12 + 1e-9 * scale)),
                    });
                }
            }
        }
    }

    Ok(SweepReport {
        engine_version: ENGINE_VERSION.to_string(),
        process: process.name.clone(),
        state: state.ket(),
        points,
        monotonicity,
        warnings,
    })
}

impl SweepReport {
    pub fn to_csv(&self) -> Result<String, CliError> {
        csv_string(
            &CSV_HEADER,
            self.points.iter().map(|p| {
                vec![
                    fmt_float(p.alpha2),
                    fmt_float(p.gt),
                    p.mode.clone(),
                    p.l.to_string(),
                    fmt_float(p.d_symbolic),
                    p.d_numeric.map_or_else(String::new, fmt_float),
                    p.classification.to_string(),
                ]
            }),
        )
    }

    pub fn to_json(&self) -> Result<String, CliError> {
        json_string(self)
    }

    pub fn render(&self) -> String {
        let mut out = format!("{} {}: {} grid points\n", self.process, self.state, self.points.len());
        if self.points.len() <= 50 {
            for p in &self.points {
                out.push_str(&format!(
                    "|α|²={} gt={} mode {} d({}) symbolic {:+.6e} numeric {} {}\n",
                    p.alpha2,
                    p.gt,
                    p.mode,
                    p.l,
                    p.d_symbolic,
                    p.d_numeric.map_or_else(|| "n/a".to_string(), |v| format!("{v:+.6e}")),
                    p.classification
                ));
            }
        }
        for m in &self.monotonicity {
            out.push_str(&format!(
                "monotonicity mode {} d({}) gt={}: symbolic {}, numeric {}\n",
                m.mode,
                m.l,
                m.gt,
                m.symbolic.label(),
                m.numeric.map_or("n/a", Trend::label)
            ));
        }
        for w in &self.warnings {
            out.push_str(&format!("warning: {w}\n"));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trends() {
        assert_eq!(Trend::of(&[0.0, -1.0, -3.0], 0.0), Trend::Decreasing);
        assert_eq!(Trend::of(&[0.0, 1.0, 1.0], 0.0), Trend::Increasing);
        assert_eq!(Trend::of(&[1.0, 1.0], 0.0), Trend::Constant);
        assert_eq!(Trend::of(&[0.0, 1.0, 0.5], 0.0), Trend::NonMonotone);
    }
}
