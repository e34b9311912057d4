use hoa_core::algebra::ModeId;
use hoa_core::heisenberg::{interaction_hamiltonian, Preset};
use hoa_core::statistics::{factorial_moments, ExpectationSeries};
use rayon::prelude::*;
use serde::Serialize;

use crate::output::{compact, csv_string, json_string};
use crate::process::{Process, StateChoice};
use crate::reference::{self, exception};
use crate::{pool, CliError, ENGINE_VERSION};

pub const CSV_HEADER: [&str; 7] = ["process", "interaction", "mode", "state", "l", "coefficient_series", "note"];
pub const L_VALUES: [u32; 2] = [1, 2];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Cell {
    pub preset: Preset,
    pub mode: ModeId,
    pub state: StateChoice,
    pub l: u32,
}

/// Every (process, mode, state, l) cell, in table order.
pub fn cells() -> Vec<Cell> {
    let mut out = Vec::new();
    for preset in Preset::ALL {
        for mode in 0..3 {
            for state in StateChoice::ALL {
                for l in L_VALUES {
                    out.push(Cell { preset, mode: ModeId(mode), state, l });
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct TableRow {
    pub process: String,
    pub preset: String,
    pub interaction: String,
    pub mode: String,
    pub state: String,
    pub l: u32,
    pub coefficient_series: String,
    pub reference_series: String,
    pub matches_reference: bool,
    pub note: String,
    #[serde(skip)]
    pub cell: Cell,
    #[serde(skip)]
    pub d: ExpectationSeries,
}

#[derive(Clone, Debug, Serialize)]
pub struct Discrepancy {
    pub process: String,
    pub mode: String,
    pub state: String,
    pub l: u32,
    pub reference: String,
    pub engine: String,
    pub documented: bool,
    pub reason: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct MeanPhotonCheck {
    pub process: String,
    pub mode: String,
    pub state: String,
    pub reference: String,
    pub engine: String,
    pub note: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct TableReport {
    pub engine_version: String,
    pub rows: Vec<TableRow>,
    pub discrepancies: Vec<Discrepancy>,
    pub mean_photon: MeanPhotonCheck,
}

/// `d(1)` and `d(2)` of one mode under one state.
fn mode_rows(preset: Preset, mode: ModeId, state: StateChoice) -> Result<Vec<TableRow>, CliError> {
    let process = Process::from_preset(preset);
    let h = interaction_hamiltonian(&process.spec, 2);
    let moments = factorial_moments(&h, mode, 3, &state.product_state(process.mode_count()), 2)?;
    let mut rows = Vec::new();
    for l in L_VALUES {
        let d = moments[l as usize + 1].sub(&moments[1].pow(l + 1))?;
        let reference = reference::reference_d(preset, mode, state, l);
        let matches = d == reference;
        let mut notes = Vec::new();
        if !matches {
            notes.push(match exception(preset, mode, state, l) {
                Some(e) if e.engine_series() == d => format!(
                    "differs from reference value {}: {}; oracle check via `hoa verify`",
                    compact(&reference.pretty()),
                    e.reason
                ),
                _ => format!("UNDOCUMENTED difference from reference value {}", compact(&reference.pretty())),
            });
        }
        if preset == reference::SIGNAL_MEAN_PRESET
            && mode == reference::SIGNAL_MEAN_MODE
            && state == StateChoice::PumpCoherent
        {
            notes.push(reference::SIGNAL_MEAN_NOTE.to_string());
        }
        rows.push(TableRow {
            process: process.title.clone(),
            preset: process.name.clone(),
            interaction: process.interaction(),
            mode: mode.label(),
            state: state.ket(),
            l,
            coefficient_series: compact(&d.pretty()),
            reference_series: compact(&reference.pretty()),
            matches_reference: matches,
            note: notes.join("; "),
            cell: Cell { preset, mode, state, l },
            d,
        });
    }
    Ok(rows)
}

fn mean_photon_check() -> Result<MeanPhotonCheck, CliError> {
    let process = Process::from_preset(reference::SIGNAL_MEAN_PRESET);
    let h = interaction_hamiltonian(&process.spec, 2);
    let state = StateChoice::PumpCoherent;
    let n = factorial_moments(&h, reference::SIGNAL_MEAN_MODE, 1, &state.product_state(process.mode_count()), 2)?;
    Ok(MeanPhotonCheck {
        process: process.title,
        mode: reference::SIGNAL_MEAN_MODE.label(),
        state: state.ket(),
        reference: reference::SIGNAL_MEAN_REFERENCE.to_string(),
        engine: format!("⟨N_C(t)⟩_α = {}", compact(&n[1].pretty())),
        note: reference::SIGNAL_MEAN_NOTE.to_string(),
    })
}

/// Regenerates the full table symbolically.
pub fn build_table(workers: usize) -> Result<TableReport, CliError> {
    let groups: Vec<(Preset, ModeId, StateChoice)> = cells()
        .into_iter()
        .filter(|c| c.l == L_VALUES[0])
        .map(|c| (c.preset, c.mode, c.state))
        .collect();
    let chunks: Vec<Result<Vec<TableRow>, CliError>> =
        pool(workers)?.install(|| groups.par_iter().map(|&(p, m, s)| mode_rows(p, m, s)).collect());
    let mut rows = Vec::with_capacity(groups.len() * L_VALUES.len());
    for chunk in chunks {
        rows.extend(chunk?);
    }
    let discrepancies = rows
        .iter()
        .filter(|r| !r.matches_reference)
        .map(|r| {
            let e = exception(r.cell.preset, r.cell.mode, r.cell.state, r.cell.l);
            Discrepancy {
                process: r.preset.clone(),
                mode: r.mode.clone(),
                state: r.state.clone(),
                l: r.l,
                reference: r.reference_series.clone(),
                engine: r.coefficient_series.clone(),
                documented: e.is_some_and(|e| e.engine_series() == r.d),
                reason: e.map_or_else(String::new, |e| e.reason.to_string()),
            }
        })
        .collect();
    Ok(TableReport {
        engine_version: ENGINE_VERSION.to_string(),
        rows,
        discrepancies,
        mean_photon: mean_photon_check()?,
    })
}

impl TableReport {
    pub fn to_csv(&self) -> Result<String, CliError> {
        csv_string(
            &CSV_HEADER,
            self.rows.iter().map(|r| {
                vec![
                    r.process.clone(),
                    r.interaction.clone(),
                    r.mode.clone(),
                    r.state.clone(),
                    r.l.to_string(),
                    r.coefficient_series.clone(),
                    r.note.clone(),
                ]
            }),
        )
    }

    pub fn to_json(&self) -> Result<String, CliError> {
        json_string(self)
    }

    pub fn undocumented(&self) -> usize {
        self.discrepancies.iter().filter(|d| !d.documented).count()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let mut last = String::new();
        for r in &self.rows {
            if r.preset != last {
                out.push_str(&format!("\n{} ({}), {}\n", r.process, r.preset, r.interaction));
                last = r.preset.clone();
            }
            let flag = if r.matches_reference { ' ' } else { '*' };
            out.push_str(&format!(
                "{flag} mode {} {:<4} d({}) = {}\n",
                r.mode, r.state, r.l, r.coefficient_series
            ));
        }
        out.push_str(&format!(
            "\n{} cells, {} equal to the reference table, {} documented differences (*), {} undocumented\n",
            self.rows.len(),
            self.rows.iter().filter(|r| r.matches_reference).count(),
            self.discrepancies.len() - self.undocumented(),
            self.undocumented()
        ));
        for d in &self.discrepancies {
            out.push_str(&format!(
                "  {} mode {} {} d({}): reference {}, engine {}\n",
                d.process, d.mode, d.state, d.l, d.reference, d.engine
            ));
        }
        out.push_str(&format!(
            "mean photon number, {} mode {} {}: reference {}, engine {}\n  {}\n",
            self.mean_photon.process,
            self.mean_photon.mode,
            self.mean_photon.state,
            self.mean_photon.reference,
            self.mean_photon.engine,
            self.mean_photon.note
        ));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_size() {
        assert_eq!(cells().len(), 7 * 3 * 3 * 2);
    }

    #[test]
    fn sixwave_pump_rows() {
        let rows = mode_rows(Preset::SixWave321, ModeId(0), StateChoice::PumpCoherent).unwrap();
        assert_eq!(rows[0].coefficient_series, "−12(gt)²|α|⁶");
        assert_eq!(rows[1].coefficient_series, "−12(gt)²(|α|⁶+3|α|⁸)");
        assert!(rows.iter().all(|r| r.matches_reference && r.note.is_empty()));
    }

    #[test]
    fn signal_mode_rows_carry_the_mean_photon_note() {
        let rows = mode_rows(Preset::SixWave321, ModeId(2), StateChoice::PumpCoherent).unwrap();
        assert!(rows.iter().all(|r| r.coefficient_series == "0" && r.note.contains("⟨N_C(t)⟩_α = 0")));
        let check = mean_photon_check().unwrap();
        assert_eq!(check.engine, "⟨N_C(t)⟩_α = 2(gt)²|α|⁶");
    }

    #[test]
    fn fourwave_stokes_mode_is_zero() {
        let rows = mode_rows(Preset::FourWave211, ModeId(1), StateChoice::PumpCoherent).unwrap();
        assert!(rows.iter().all(|r| r.coefficient_series == "0" && r.note.is_empty()));
    }
}
