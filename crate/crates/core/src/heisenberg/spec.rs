use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{AlgebraError, ModeId};

/// Relative tolerance of the frequency-matching check.
pub const RESONANCE_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    /// The mode enters `G` through creation operators.
    Created,
    /// The mode enters `G` through annihilation operators.
    Annihilated,
}

/// How one mode takes part in the interaction term `G`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModeCoupling {
    pub role: Role,
    pub exponent: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
}

impl ModeCoupling {
    pub fn created(exponent: u32) -> Self {
        Self { role: Role::Created, exponent, omega: None }
    }

    pub fn annihilated(exponent: u32) -> Self {
        Self { role: Role::Annihilated, exponent, omega: None }
    }

    pub fn with_omega(mut self, omega: f64) -> Self {
        self.omega = Some(omega);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InteractionError {
    #[error("interaction needs at least one created and one annihilated mode")]
    MissingRole,
    #[error("mode {0} has exponent 0; exponents must be positive")]
    ZeroExponent(ModeId),
    #[error("frequencies must be given for every coupled mode or for none")]
    PartialFrequencies,
    #[error("mode {mode} has non-positive frequency {omega}")]
    NonPositiveFrequency { mode: ModeId, omega: f64 },
    #[error(
        "off-resonant interaction: Σ e·ω over created modes = {created} but over annihilated modes = {annihilated}"
    )]
    OffResonant { created: f64, annihilated: f64 },
    #[error("mode {mode} is not part of this {mode_count}-mode interaction")]
    UnknownMode { mode: ModeId, mode_count: usize },
    #[error("unknown preset `{name}`; available presets: {available}")]
    UnknownPreset { name: String, available: String },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Exponent pattern of a single multiwave-mixing term. Mode `k` is the k-th
/// coupling; optional spectator modes follow and do not interact.
#[derive(Clone, Debug, PartialEq)]
pub struct InteractionSpec {
    couplings: Vec<ModeCoupling>,
    spectators: usize,
}

impl InteractionSpec {
    pub fn new(couplings: Vec<ModeCoupling>) -> Result<Self, InteractionError> {
        let has = |r| couplings.iter().any(|c| c.role == r);
        if !has(Role::Created) || !has(Role::Annihilated) {
            return Err(InteractionError::MissingRole);
        }
        for (idx, c) in couplings.iter().enumerate() {
            if c.exponent == 0 {
                return Err(InteractionError::ZeroExponent(ModeId(idx)));
            }
        }
        let with_omega = couplings.iter().filter(|c| c.omega.is_some()).count();
        if with_omega != 0 && with_omega != couplings.len() {
            return Err(InteractionError::PartialFrequencies);
        }
        if with_omega > 0 {
            let mut created = 0.0;
            let mut annihilated = 0.0;
            for (idx, c) in couplings.iter().enumerate() {
                let omega = c.omega.unwrap_or_default();
                if !(omega > 0.0 && omega.is_finite()) {
                    return Err(InteractionError::NonPositiveFrequency { mode: ModeId(idx), omega });
                }
                match c.role {
                    Role::Created => created += c.exponent as f64 * omega,
                    Role::Annihilated => annihilated += c.exponent as f64 * omega,
                }
            }
            if (created - annihilated).abs() > RESONANCE_TOLERANCE * created.max(annihilated) {
                return Err(InteractionError::OffResonant { created, annihilated });
            }
        }
        Ok(Self { couplings, spectators: 0 })
    }

    /// Pads with non-interacting modes up to `mode_count` modes in total.
    pub fn with_mode_count(mut self, mode_count: usize) -> Self {
        self.spectators = mode_count.saturating_sub(self.couplings.len());
        self
    }

    pub fn couplings(&self) -> &[ModeCoupling] {
        &self.couplings
    }

    pub fn mode_count(&self) -> usize {
        self.couplings.len() + self.spectators
    }

    pub fn coupled_modes(&self) -> usize {
        self.couplings.len()
    }

    pub fn coupling(&self, mode: ModeId) -> Option<&ModeCoupling> {
        self.couplings.get(mode.0)
    }

    /// Exponent of the mode in `G`; 0 for spectators.
    pub fn exponent(&self, mode: ModeId) -> u32 {
        self.coupling(mode).map_or(0, |c| c.exponent)
    }

    pub fn max_exponent(&self) -> u32 {
        self.couplings.iter().map(|c| c.exponent).max().unwrap_or(0)
    }

    pub fn check_mode(&self, mode: ModeId) -> Result<(), InteractionError> {
        if mode.0 >= self.mode_count() {
            return Err(InteractionError::UnknownMode { mode, mode_count: self.mode_count() });
        }
        Ok(())
    }

    /// Conserved weighted photon numbers `e_k N_j + e_j N_k`, one per
    /// (created j, annihilated k) pair, as `[(j, e_k), (k, e_j)]`.
    pub fn conserved_combinations(&self) -> Vec<[(ModeId, i64); 2]> {
        let mut out = Vec::new();
        for (j, cj) in self.couplings.iter().enumerate().filter(|(_, c)| c.role == Role::Created) {
            for (k, ck) in self.couplings.iter().enumerate().filter(|(_, c)| c.role == Role::Annihilated) {
                out.push([(ModeId(j), ck.exponent as i64), (ModeId(k), cj.exponent as i64)]);
            }
        }
        out
    }

    /// The interaction term `G`, e.g. `A†^3 B^2 C`.
    pub fn interaction_term(&self) -> String {
        let mut parts = Vec::new();
        for (idx, c) in self.couplings.iter().enumerate() {
            let mut s = ModeId(idx).label();
            if c.role == Role::Created {
                s.push('†');
            }
            if c.exponent != 1 {
                s.push_str(&format!("^{}", c.exponent));
            }
            parts.push(s);
        }
        parts.join(" ")
    }
}
