use std::fmt;

use crate::algebra::{GaussianRational, ModeId};

/// Amplitude of a coherent mode: a free symbol, or an exact complex value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Amplitude {
    Symbol(String),
    Exact(GaussianRational),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModeState {
    Vacuum,
    Coherent(Amplitude),
    Fock(u32),
}

/// Initial product state, one entry per mode.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductState {
    modes: Vec<ModeState>,
}

/// Conventional symbol for a coherent amplitude in the given mode.
pub fn amplitude_symbol(mode: ModeId) -> String {
    const GREEK: [&str; 6] = ["α", "β", "γ", "δ", "ε", "ζ"];
    GREEK.get(mode.0).map_or_else(|| format!("z{}", mode.0), |s| s.to_string())
}

impl ProductState {
    pub fn new(modes: Vec<ModeState>) -> Self {
        Self { modes }
    }

    pub fn vacuum(mode_count: usize) -> Self {
        Self { modes: vec![ModeState::Vacuum; mode_count] }
    }

    /// Coherent light in one mode (symbol from [`amplitude_symbol`]), vacuum elsewhere.
    pub fn coherent_in(mode: ModeId, mode_count: usize) -> Self {
        let mut s = Self::vacuum(mode_count);
        if let Some(slot) = s.modes.get_mut(mode.0) {
            *slot = ModeState::Coherent(Amplitude::Symbol(amplitude_symbol(mode)));
        }
        s
    }

    pub fn mode_count(&self) -> usize {
        self.modes.len()
    }

    pub fn modes(&self) -> &[ModeState] {
        &self.modes
    }

    pub fn mode(&self, mode: ModeId) -> Option<&ModeState> {
        self.modes.get(mode.0)
    }

    /// Distinct amplitude symbols in mode order.
    pub fn symbols(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for m in &self.modes {
            if let ModeState::Coherent(Amplitude::Symbol(s)) = m {
                if !out.contains(s) {
                    out.push(s.clone());
                }
            }
        }
        out
    }
}

/// Kets in mode order, e.g. `|α⟩|0⟩|0⟩`.
impl fmt::Display for ProductState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for m in &self.modes {
            match m {
                ModeState::Vacuum => f.write_str("|0⟩")?,
                ModeState::Coherent(Amplitude::Symbol(s)) => write!(f, "|{s}⟩")?,
                ModeState::Coherent(Amplitude::Exact(z)) => write!(f, "|{z}⟩")?,
                ModeState::Fock(n) => write!(f, "|n={n}⟩")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pump_coherent_display() {
        let s = ProductState::coherent_in(ModeId(0), 3);
        assert_eq!(s.to_string(), "|α⟩|0⟩|0⟩");
        assert_eq!(s.symbols(), vec!["α".to_string()]);
        assert_eq!(ProductState::coherent_in(ModeId(2), 3).to_string(), "|0⟩|0⟩|γ⟩");
    }
}
