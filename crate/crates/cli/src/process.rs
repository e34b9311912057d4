use std::fmt;
use std::str::FromStr;

use hoa_core::algebra::ModeId;
use hoa_core::heisenberg::{InteractionSpec, ModeCoupling, Preset, Role};
use hoa_core::statistics::{amplitude_symbol, superscript, NumericPoint, ProductState};
use num_complex::Complex64;

use crate::CliError;

/// Processes are always analyzed on at least three modes so that the three
/// conventional initial states exist; missing modes are spectators.
pub const MIN_MODES: usize = 3;

/// An interaction together with its display names.
#[derive(Clone, Debug, PartialEq)]
pub struct Process {
    pub name: String,
    pub title: String,
    pub preset: Option<Preset>,
    pub spec: InteractionSpec,
}

impl Process {
    pub fn from_preset(preset: Preset) -> Self {
        Self {
            name: preset.name().to_string(),
            title: preset.title().to_string(),
            preset: Some(preset),
            spec: preset.spec().with_mode_count(MIN_MODES),
        }
    }

    pub fn inline(couplings: Vec<ModeCoupling>) -> Result<Self, CliError> {
        let spec = InteractionSpec::new(couplings).map_err(|e| CliError::Config(e.to_string()))?;
        let count = spec.mode_count().max(MIN_MODES);
        let spec = spec.with_mode_count(count);
        let term = interaction_label(&spec);
        Ok(Self { name: "custom".to_string(), title: format!("Custom process {term}"), preset: None, spec })
    }

    pub fn all_presets() -> Vec<Self> {
        Preset::ALL.into_iter().map(Self::from_preset).collect()
    }

    pub fn mode_count(&self) -> usize {
        self.spec.mode_count()
    }

    pub fn interaction(&self) -> String {
        interaction_label(&self.spec)
    }
}

/// Compact interaction term, e.g. `A†³B²C`.
pub fn interaction_label(spec: &InteractionSpec) -> String {
    let mut out = String::new();
    for (idx, c) in spec.couplings().iter().enumerate() {
        out.push_str(&ModeId(idx).label());
        if c.role == Role::Created {
            out.push('†');
        }
        if c.exponent != 1 {
            out.push_str(&superscript(c.exponent));
        }
    }
    out
}

pub fn parse_mode(label: &str, process: &Process) -> Result<ModeId, CliError> {
    let mode = ModeId::from_label(label.trim())
        .ok_or_else(|| CliError::Config(format!("unknown mode `{label}`")))?;
    if mode.0 >= process.mode_count() {
        return Err(CliError::Config(format!(
            "mode {} does not exist in {} ({} modes)",
            mode.label(),
            process.name,
            process.mode_count()
        )));
    }
    Ok(mode)
}

/// The three conventional initial states: coherent light in one mode, vacuum
/// in the others.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StateChoice {
    PumpCoherent,
    StokesCoherent,
    SignalCoherent,
}

impl StateChoice {
    pub const ALL: [StateChoice; 3] = [StateChoice::PumpCoherent, StateChoice::StokesCoherent, StateChoice::SignalCoherent];

    pub fn name(self) -> &'static str {
        match self {
            StateChoice::PumpCoherent => "pump-coherent",
            StateChoice::StokesCoherent => "stokes-coherent",
            StateChoice::SignalCoherent => "signal-coherent",
        }
    }

    pub fn coherent_mode(self) -> ModeId {
        ModeId(self as usize)
    }

    pub fn symbol(self) -> String {
        amplitude_symbol(self.coherent_mode())
    }

    /// Short ket, e.g. `|β⟩`.
    pub fn ket(self) -> String {
        format!("|{}⟩", self.symbol())
    }

    pub fn product_state(self, mode_count: usize) -> ProductState {
        ProductState::coherent_in(self.coherent_mode(), mode_count)
    }

    /// Numeric point with a real amplitude.
    pub fn point(self, amplitude: f64, gt: f64) -> NumericPoint {
        NumericPoint::new(gt).with(self.symbol(), Complex64::new(amplitude, 0.0))
    }
}

impl fmt::Display for StateChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StateChoice {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL.into_iter().find(|c| c.name() == s.trim()).ok_or_else(|| {
            CliError::Config(format!(
                "unknown state `{s}`; expected one of pump-coherent, stokes-coherent, signal-coherent"
            ))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels() {
        let p = Process::from_preset(Preset::SixWave321);
        assert_eq!(p.interaction(), "A†³B²C");
        let shg = Process::from_preset(Preset::Shg21);
        assert_eq!(shg.interaction(), "A†²B");
        assert_eq!(shg.mode_count(), 3);
        assert_eq!(StateChoice::StokesCoherent.ket(), "|β⟩");
    }

    #[test]
    fn states_parse() {
        assert_eq!("signal-coherent".parse::<StateChoice>().unwrap(), StateChoice::SignalCoherent);
        assert!("thermal".parse::<StateChoice>().is_err());
    }

    #[test]
    fn modes_checked_against_process() {
        let p = Process::from_preset(Preset::Trilinear111);
        assert_eq!(parse_mode("B", &p).unwrap(), ModeId(1));
        assert!(parse_mode("D", &p).is_err());
    }

    #[test]
    fn inline_processes_are_padded() {
        let p = Process::inline(vec![ModeCoupling::created(2), ModeCoupling::annihilated(1)]).unwrap();
        assert_eq!(p.mode_count(), 3);
        assert!(Process::inline(vec![ModeCoupling::created(2)]).is_err());
    }
}
