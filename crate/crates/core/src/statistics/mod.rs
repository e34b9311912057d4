//! Expectation values over product states and the antibunching criteria
//! built from factorial moments `⟨N^(k)⟩ = ⟨a†^k a^k⟩`:
//!
//! * `d(l) = ⟨N^(l+1)⟩ − ⟨N⟩^(l+1)` (symbolic),
//! * `R(l, m) = ⟨N^(l+1)⟩⟨N^(m−1)⟩ / (⟨N^(l)⟩⟨N^(m)⟩) − 1` (numeric),
//! * `A_l = ⟨N^(l+1)⟩ / (⟨N^(l)⟩⟨N⟩) − 1` (numeric).

mod series;
mod state;

pub use series::{superscript, ExpectationSeries, NumericPoint, SeriesKey};
pub use state::{amplitude_symbol, Amplitude, ModeState, ProductState};

use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{AlgebraError, GaussianRational, ModeId, OperatorPolynomial};
use crate::heisenberg::{evolve_with, factorial_moment_operator, interaction_hamiltonian, InteractionError, InteractionSpec};

/// Denominators smaller than this make `R` and `A` undefined.
pub const DEGENERATE_DENOMINATOR: f64 = 1e-300;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StatisticsError {
    #[error("operator has {operator} modes but the state has {state}")]
    ModeMismatch { operator: usize, state: usize },
    #[error("series over different amplitude symbols cannot be combined")]
    SymbolMismatch,
    #[error("no numeric value supplied for amplitude `{0}`")]
    MissingAmplitude(String),
    #[error("degenerate state: {0} vanishes (denominator below 1e-300)")]
    Degenerate(String),
    #[error("invalid criterion order: {0}")]
    InvalidOrder(String),
    #[error(transparent)]
    Interaction(#[from] InteractionError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// `⟨X⟩` over a product state. Normal order lets the expectation factor over
/// modes: a coherent mode contributes `(z*)^p z^q`, the vacuum `δ_{p0}δ_{q0}`,
/// and a Fock state `|n⟩` contributes `n!/(n−q)!` when `p = q ≤ n`.
pub fn expect(x: &OperatorPolynomial, state: &ProductState) -> Result<ExpectationSeries, StatisticsError> {
    if x.mode_count() != state.mode_count() {
        return Err(StatisticsError::ModeMismatch { operator: x.mode_count(), state: state.mode_count() });
    }
    let symbols = state.symbols();
    let mut out = ExpectationSeries::zero(symbols.clone(), x.max_order());
    'terms: for (key, coeff) in x.terms() {
        let mut c = coeff.clone();
        let mut powers = vec![(0u32, 0u32); symbols.len()];
        for (power, mode) in key.powers.iter().zip(state.modes()) {
            let (p, q) = (power.creation, power.annihilation);
            match mode {
                ModeState::Vacuum => {
                    if p != 0 || q != 0 {
                        continue 'terms;
                    }
                }
                ModeState::Fock(n) => {
                    if p != q || q > *n {
                        continue 'terms;
                    }
                    let falling: BigInt = ((n - q + 1)..=*n).map(BigInt::from).product();
                    c = &c * &GaussianRational::from_bigint(falling);
                }
                ModeState::Coherent(Amplitude::Exact(z)) => {
                    c = &(&c * &z.conj().pow(p)) * &z.pow(q);
                }
                ModeState::Coherent(Amplitude::Symbol(s)) => {
                    let idx = symbols.iter().position(|x| x == s).expect("symbol collected from state");
                    powers[idx].0 += p;
                    powers[idx].1 += q;
                }
            }
        }
        out.accumulate(SeriesKey { grade: key.grade, powers }, c);
    }
    Ok(out)
}

/// Factorial-moment series `⟨N^(k)(t)⟩` for `k = 0..=k_max` (entry 0 is 1).
pub fn factorial_moments(
    hamiltonian: &OperatorPolynomial,
    mode: ModeId,
    k_max: u32,
    state: &ProductState,
    order: u32,
) -> Result<Vec<ExpectationSeries>, StatisticsError> {
    let ev = evolve_with(hamiltonian, mode, order)?;
    let mut out = vec![ExpectationSeries::one(state.symbols(), order)];
    for k in 1..=k_max {
        out.push(expect(&factorial_moment_operator(&ev, k), state)?);
    }
    Ok(out)
}

fn check_spec_state(spec: &InteractionSpec, mode: ModeId, state: &ProductState) -> Result<(), StatisticsError> {
    spec.check_mode(mode)?;
    if state.mode_count() != spec.mode_count() {
        return Err(StatisticsError::ModeMismatch { operator: spec.mode_count(), state: state.mode_count() });
    }
    Ok(())
}

/// `d(l)` for an arbitrary grade-1 Hamiltonian.
pub fn hoa_d_with(
    hamiltonian: &OperatorPolynomial,
    mode: ModeId,
    l: u32,
    state: &ProductState,
    order: u32,
) -> Result<ExpectationSeries, StatisticsError> {
    if l == 0 {
        return Err(StatisticsError::InvalidOrder("l must be at least 1".into()));
    }
    let moments = factorial_moments(hamiltonian, mode, l + 1, state, order)?;
    moments[l as usize + 1].sub(&moments[1].pow(l + 1))
}

/// `d(l) = ⟨N^(l+1)⟩ − ⟨N⟩^(l+1)` as a truncated series.
pub fn hoa_d(
    spec: &InteractionSpec,
    mode: ModeId,
    l: u32,
    state: &ProductState,
    order: u32,
) -> Result<ExpectationSeries, StatisticsError> {
    check_spec_state(spec, mode, state)?;
    hoa_d_with(&interaction_hamiltonian(spec, order), mode, l, state, order)
}

fn moment_values(
    spec: &InteractionSpec,
    mode: ModeId,
    k_max: u32,
    state: &ProductState,
    point: &NumericPoint,
    order: u32,
) -> Result<Vec<f64>, StatisticsError> {
    check_spec_state(spec, mode, state)?;
    let h = interaction_hamiltonian(spec, order);
    factorial_moments(&h, mode, k_max, state, order)?
        .iter()
        .map(|m| m.evaluate(point).map(|v| v.re))
        .collect()
}

/// Lee's `R(l, m)`, from the truncated moment series evaluated at `point`.
#[allow(clippy::too_many_arguments)]
pub fn lee_r(
    spec: &InteractionSpec,
    mode: ModeId,
    l: u32,
    m: u32,
    state: &ProductState,
    point: &NumericPoint,
    order: u32,
) -> Result<f64, StatisticsError> {
    if !(l >= m && m >= 1) {
        return Err(StatisticsError::InvalidOrder(format!("need l ≥ m ≥ 1, got l = {l}, m = {m}")));
    }
    let mom = moment_values(spec, mode, l + 1, state, point, order)?;
    let den = mom[l as usize] * mom[m as usize];
    if den.abs() < DEGENERATE_DENOMINATOR {
        return Err(StatisticsError::Degenerate(format!("⟨N^({l})⟩⟨N^({m})⟩")));
    }
    Ok(mom[l as usize + 1] * mom[m as usize - 1] / den - 1.0)
}

/// Ba An's `A_l`, numeric like [`lee_r`].
pub fn ba_an_a(
    spec: &InteractionSpec,
    mode: ModeId,
    l: u32,
    state: &ProductState,
    point: &NumericPoint,
    order: u32,
) -> Result<f64, StatisticsError> {
    if l == 0 {
        return Err(StatisticsError::InvalidOrder("l must be at least 1".into()));
    }
    let mom = moment_values(spec, mode, l + 1, state, point, order)?;
    let den = mom[l as usize] * mom[1];
    if den.abs() < DEGENERATE_DENOMINATOR {
        return Err(StatisticsError::Degenerate(format!("⟨N^({l})⟩⟨N⟩")));
    }
    Ok(mom[l as usize + 1] / den - 1.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Classification {
    Antibunched,
    Coherent,
    Bunched,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::Antibunched => "Antibunched",
            Classification::Coherent => "Coherent",
            Classification::Bunched => "Bunched",
        })
    }
}

/// Relative size below which a substituted coefficient counts as cancelled.
const CANCELLATION_TOLERANCE: f64 = 1e-12;

/// Sign of the lowest-grade coefficient of `d` that survives substitution.
pub fn classify(d: &ExpectationSeries, point: &NumericPoint) -> Result<Classification, StatisticsError> {
    for grade in d.grades() {
        let v = d.coefficient_value(grade, point)?.re;
        let scale = d.coefficient_scale(grade, point)?;
        if v.abs() > CANCELLATION_TOLERANCE * scale {
            return Ok(if v < 0.0 { Classification::Antibunched } else { Classification::Bunched });
        }
    }
    Ok(Classification::Coherent)
}
