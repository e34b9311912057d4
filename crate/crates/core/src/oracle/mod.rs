//! Exact evolution in a truncated multimode Fock basis.
//!
//! This is the independent numerical check on the symbolic pipeline: the
//! interaction Hamiltonian is turned into a matrix, the initial product state
//! is propagated with `exp(−iHt)` (Schrödinger picture), and factorial moments
//! are read off the evolved state.

mod matrix;
mod propagate;
mod state;

pub use matrix::{ladder_matrix, materialize, FockOperator};
pub use propagate::{evolve, Propagator, HERMITIAN_TOLERANCE};
pub use state::{
    coherent_state, coherent_tail_mass, falling_factorial, fock_vector, InitialMode, StateVector, COHERENT_TAIL_LIMIT,
};

use thiserror::Error;

use crate::algebra::ModeId;
use crate::heisenberg::{interaction_hamiltonian, InteractionError, InteractionSpec};
use crate::statistics::{Amplitude, ModeState, NumericPoint, ProductState};

/// Default cap on the total tensor-product dimension.
pub const DEFAULT_DIMENSION_CAP: usize = 200_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("mode dimension {0} is below the minimum of 2")]
    DimensionTooSmall(usize),
    #[error("total dimension {total} exceeds the cap of {cap}")]
    DimensionCap { total: usize, cap: usize },
    #[error("size mismatch: {operator} vs {truncation}")]
    ModeMismatch { operator: usize, truncation: usize },
    #[error("truncation at {dim} levels discards probability {tail:.3e}; increase the dimension to at least {suggested}")]
    TruncationTooSmall { dim: usize, tail: f64, suggested: usize },
    #[error("operator is not Hermitian (max deviation {0:.3e})")]
    NotHermitian(f64),
    #[error("Hermitian eigendecomposition did not converge")]
    EigenFailure,
    #[error("short-time window too large: estimates {r1:.6e} and {r2:.6e} disagree")]
    WindowTooLarge { r1: f64, r2: f64 },
    #[error("invalid time window: need 0 < t1 < t2, got t1 = {t1}, t2 = {t2}")]
    InvalidWindow { t1: f64, t2: f64 },
    #[error("missing numeric amplitude for `{0}`")]
    MissingAmplitude(String),
    #[error(transparent)]
    Interaction(#[from] InteractionError),
}

/// Per-mode Fock-space dimensions (levels `0..d_k`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncationSpec {
    dims: Vec<usize>,
    cap: usize,
}

impl TruncationSpec {
    pub fn new(dims: Vec<usize>) -> Result<Self, OracleError> {
        Self::with_cap(dims, DEFAULT_DIMENSION_CAP)
    }

    pub fn with_cap(dims: Vec<usize>, cap: usize) -> Result<Self, OracleError> {
        if let Some(&d) = dims.iter().find(|&&d| d < 2) {
            return Err(OracleError::DimensionTooSmall(d));
        }
        let total = dims.iter().try_fold(1usize, |acc, &d| acc.checked_mul(d)).unwrap_or(usize::MAX);
        if total > cap {
            return Err(OracleError::DimensionCap { total, cap });
        }
        Ok(Self { dims, cap })
    }

    /// Default levels: a coherent mode gets `max(20, ⌈|α|² + 8|α| + l_max·Σe⌉)`,
    /// a vacuum mode `2e + 4` and a Fock mode `n + 2e + 4`, where `e` is the
    /// mode's interaction exponent and `Σe` the total interaction degree.
    pub fn default_for(spec: &InteractionSpec, state: &[InitialMode], l_max: u32) -> Result<Self, OracleError> {
        let degree: u32 = spec.couplings().iter().map(|c| c.exponent).sum();
        let dims = state
            .iter()
            .enumerate()
            .map(|(idx, mode)| {
                let e = spec.exponent(ModeId(idx)) as usize;
                match *mode {
                    InitialMode::Vacuum => 2 * e + 4,
                    InitialMode::Fock(n) => n + 2 * e + 4,
                    InitialMode::Coherent(z) => {
                        let mean = z.norm_sqr();
                        let want = (mean + 8.0 * mean.sqrt() + (l_max * degree) as f64).ceil() as usize;
                        want.max(20)
                    }
                }
            })
            .collect();
        Self::new(dims)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    /// Same truncation with one mode's dimension replaced.
    pub fn with_mode_dim(&self, mode: usize, dim: usize) -> Result<Self, OracleError> {
        let mut dims = self.dims.clone();
        dims[mode] = dim;
        Self::with_cap(dims, self.cap)
    }

    pub(crate) fn occupation_into(&self, mut index: usize, out: &mut [usize]) {
        for (slot, &d) in out.iter_mut().zip(&self.dims).rev() {
            *slot = index % d;
            index /= d;
        }
    }
}

/// Converts a symbolic product state into numeric initial conditions.
pub fn initial_modes(state: &ProductState, point: &NumericPoint) -> Result<Vec<InitialMode>, OracleError> {
    state
        .modes()
        .iter()
        .map(|m| match m {
            ModeState::Vacuum => Ok(InitialMode::Vacuum),
            ModeState::Fock(n) => Ok(InitialMode::Fock(*n as usize)),
            ModeState::Coherent(Amplitude::Exact(z)) => Ok(InitialMode::Coherent(z.to_complex64())),
            ModeState::Coherent(Amplitude::Symbol(s)) => point
                .amplitudes
                .get(s)
                .copied()
                .map(InitialMode::Coherent)
                .ok_or_else(|| OracleError::MissingAmplitude(s.clone())),
        })
        .collect()
}

/// Scalar read off the evolved state.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Observable {
    /// `d(l) = ⟨N^(l+1)⟩ − ⟨N⟩^(l+1)`.
    HoaD(u32),
    /// `⟨N^(k)⟩`.
    FactorialMoment(u32),
}

/// Pair of short times used to extrapolate the `(gt)²` coefficient, with the
/// agreement required between the two raw estimates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Window {
    pub gt1: f64,
    pub gt2: f64,
    pub rel_tol: f64,
    pub abs_tol: f64,
}

impl Default for Window {
    fn default() -> Self {
        Self { gt1: 5e-4, gt2: 1e-3, rel_tol: 0.01, abs_tol: 1e-3 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LeadingEstimate {
    /// Extrapolated `lim_{t→0} (Q(t) − Q(0)) / (gt)²`.
    pub coefficient: f64,
    /// Raw ratios at the two window points.
    pub r1: f64,
    pub r2: f64,
}

/// Prepared numerical problem: one interaction, one initial state, one
/// truncation. Holds the propagator so several times can be sampled cheaply.
pub struct OracleSession {
    coupling: f64,
    psi0: StateVector,
    propagator: Propagator,
    mode_count: usize,
}

impl OracleSession {
    pub fn new(
        spec: &InteractionSpec,
        state: &[InitialMode],
        trunc: &TruncationSpec,
        coupling: f64,
    ) -> Result<Self, OracleError> {
        let h = materialize(&interaction_hamiltonian(spec, 1), trunc, coupling)?;
        Ok(Self {
            coupling,
            psi0: StateVector::product(state, trunc)?,
            propagator: Propagator::new(&h)?,
            mode_count: spec.mode_count(),
        })
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    pub fn initial_state(&self) -> &StateVector {
        &self.psi0
    }

    pub fn propagator(&self) -> &Propagator {
        &self.propagator
    }

    pub fn state_at(&self, t: f64) -> Result<StateVector, OracleError> {
        self.propagator.evolve(&self.psi0, t)
    }

    fn check_mode(&self, mode: ModeId) -> Result<(), OracleError> {
        if mode.0 >= self.mode_count {
            return Err(InteractionError::UnknownMode { mode, mode_count: self.mode_count }.into());
        }
        Ok(())
    }

    pub fn observe(&self, psi: &StateVector, mode: ModeId, obs: Observable) -> f64 {
        match obs {
            Observable::FactorialMoment(k) => psi.factorial_moment(mode.0, k),
            Observable::HoaD(l) => psi.factorial_moment(mode.0, l + 1) - psi.factorial_moment(mode.0, 1).powi(l as i32 + 1),
        }
    }

    pub fn value_at(&self, mode: ModeId, obs: Observable, t: f64) -> Result<f64, OracleError> {
        self.check_mode(mode)?;
        Ok(self.observe(&self.state_at(t)?, mode, obs))
    }

    /// `d(l)` at time `t`.
    pub fn numeric_d(&self, mode: ModeId, l: u32, t: f64) -> Result<f64, OracleError> {
        self.value_at(mode, Observable::HoaD(l), t)
    }

    /// Richardson estimate of the `(gt)²` coefficient of `Q(t) − Q(0)` from the
    /// model `c·(gt)² + c4·(gt)⁴` at the two window points.
    pub fn leading_coefficient(&self, mode: ModeId, obs: Observable, window: &Window) -> Result<LeadingEstimate, OracleError> {
        if !(window.gt1 > 0.0 && window.gt2 > window.gt1) {
            return Err(OracleError::InvalidWindow { t1: window.gt1, t2: window.gt2 });
        }
        let q0 = self.value_at(mode, obs, 0.0)?;
        let (t1, t2) = (window.gt1 / self.coupling, window.gt2 / self.coupling);
        let r1 = (self.value_at(mode, obs, t1)? - q0) / window.gt1.powi(2);
        let r2 = (self.value_at(mode, obs, t2)? - q0) / window.gt2.powi(2);
        if (r1 - r2).abs() > window.rel_tol * r1.abs().max(r2.abs()) + window.abs_tol {
            return Err(OracleError::WindowTooLarge { r1, r2 });
        }
        let (s1, s2) = (window.gt1.powi(2), window.gt2.powi(2));
        let coefficient = (r1 * s2 - r2 * s1) / (s2 - s1);
        Ok(LeadingEstimate { coefficient, r1, r2 })
    }
}

/// One-shot `d(l)` at coupling `g` and time `t`.
pub fn numeric_d(
    spec: &InteractionSpec,
    mode: ModeId,
    l: u32,
    state: &[InitialMode],
    trunc: &TruncationSpec,
    g: f64,
    t: f64,
) -> Result<f64, OracleError> {
    OracleSession::new(spec, state, trunc, g)?.numeric_d(mode, l, t)
}

/// One-shot short-time coefficient of `d(l)`.
pub fn leading_coefficient(
    spec: &InteractionSpec,
    mode: ModeId,
    l: u32,
    state: &[InitialMode],
    trunc: &TruncationSpec,
    g: f64,
    window: &Window,
) -> Result<LeadingEstimate, OracleError> {
    OracleSession::new(spec, state, trunc, g)?.leading_coefficient(mode, Observable::HoaD(l), window)
}

#[cfg(test)]
mod tests {
    use num_complex::Complex64;

    use super::*;
    use crate::heisenberg::Preset;

    fn pump(alpha: f64) -> Vec<InitialMode> {
        vec![InitialMode::Coherent(Complex64::new(alpha, 0.0)), InitialMode::Vacuum, InitialMode::Vacuum]
    }

    #[test]
    fn truncation_validation() {
        assert!(matches!(TruncationSpec::new(vec![4, 1]), Err(OracleError::DimensionTooSmall(1))));
        assert!(matches!(
            TruncationSpec::with_cap(vec![100, 100, 100], 200_000),
            Err(OracleError::DimensionCap { total: 1_000_000, .. })
        ));
        let t = TruncationSpec::new(vec![3, 4, 5]).unwrap();
        let mut occ = [0; 3];
        t.occupation_into(20 + 2 * 5 + 3, &mut occ);
        assert_eq!(occ, [1, 2, 3]);
    }

    #[test]
    fn default_dims_for_sixwave_pump() {
        let t = TruncationSpec::default_for(&Preset::SixWave321.spec(), &pump(1.0), 2).unwrap();
        assert_eq!(t.dims(), &[21, 8, 6]);
    }

    #[test]
    fn zero_coupling_keeps_coherent_statistics() {
        let spec = Preset::SixWave321.spec();
        let trunc = TruncationSpec::new(vec![20, 8, 6]).unwrap();
        let d = numeric_d(&spec, ModeId(0), 1, &pump(1.0), &trunc, 0.0, 1.0).unwrap();
        assert!(d.abs() < 1e-12, "{d}");
    }

    #[test]
    fn sixwave_pump_d1_short_time() {
        let spec = Preset::SixWave321.spec();
        let trunc = TruncationSpec::new(vec![20, 8, 6]).unwrap();
        let d = numeric_d(&spec, ModeId(0), 1, &pump(1.0), &trunc, 1.0, 1e-3).unwrap();
        assert!((d / -1.2e-5 - 1.0).abs() < 0.01, "{d}");
        let d_b = numeric_d(&spec, ModeId(1), 1, &pump(1.0), &trunc, 1.0, 1e-3).unwrap();
        assert!((d_b / 4e-6 - 1.0).abs() < 0.01, "{d_b}");
    }

    #[test]
    fn leading_coefficients() {
        let spec = Preset::SixWave321.spec();
        let trunc = TruncationSpec::default_for(&spec, &pump(1.0), 2).unwrap();
        let s = OracleSession::new(&spec, &pump(1.0), &trunc, 1.0).unwrap();
        let w = Window::default();
        let c = s.leading_coefficient(ModeId(0), Observable::HoaD(1), &w).unwrap().coefficient;
        assert!((c / -12.0 - 1.0).abs() < 0.005, "{c}");
        let n_c = s.leading_coefficient(ModeId(2), Observable::FactorialMoment(1), &w).unwrap().coefficient;
        assert!((n_c / 2.0 - 1.0).abs() < 0.005, "{n_c}");

        let spec = Preset::FiveWave32.spec();
        let state = &pump(1.0)[..2];
        let trunc = TruncationSpec::default_for(&spec, state, 2).unwrap();
        let c = leading_coefficient(&spec, ModeId(0), 2, state, &trunc, 1.0, &w).unwrap().coefficient;
        assert!((c / -48.0 - 1.0).abs() < 0.005, "{c}");
    }

    #[test]
    fn invalid_window_rejected() {
        let spec = Preset::Shg21.spec();
        let state = [InitialMode::Coherent(Complex64::new(1.0, 0.0)), InitialMode::Vacuum];
        let trunc = TruncationSpec::default_for(&spec, &state, 1).unwrap();
        let s = OracleSession::new(&spec, &state, &trunc, 1.0).unwrap();
        let w = Window { gt1: 1e-3, gt2: 5e-4, ..Window::default() };
        assert!(matches!(s.leading_coefficient(ModeId(0), Observable::HoaD(1), &w), Err(OracleError::InvalidWindow { .. })));
        let big = Window { gt1: 0.2, gt2: 0.5, ..Window::default() };
        assert!(matches!(s.leading_coefficient(ModeId(0), Observable::HoaD(1), &big), Err(OracleError::WindowTooLarge { .. })));
    }

    #[test]
    fn diagonal_hamiltonian_rotates_phases() {
        let n = crate::algebra::OperatorPolynomial::parse("(1+0i)·A† A", 1, 2).unwrap();
        let trunc = TruncationSpec::new(vec![12]).unwrap();
        let h = materialize(&n, &trunc, 1.0).unwrap();
        let psi0 = StateVector::product(&[InitialMode::Coherent(Complex64::new(0.5, 0.0))], &trunc).unwrap();
        let psi = evolve(&h, &psi0, 0.7).unwrap();
        for (k, (a, b)) in psi.amplitudes().iter().zip(psi0.amplitudes()).enumerate() {
            assert!((a - b * Complex64::from_polar(1.0, -0.7 * k as f64)).norm() < 1e-14);
        }
        let same = evolve(&h, &psi0, 0.0).unwrap();
        assert_eq!(same.amplitudes(), psi0.amplitudes());
    }
}
