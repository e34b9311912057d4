//! Rotating-frame multiwave-mixing Hamiltonians and their short-time
//! Heisenberg-picture operator solutions.
//!
//! The interaction is `H = g (G + G†)` with
//! `G = Π_created a_k†^e_k · Π_annihilated a_k^e_k`. Since `g` only ever
//! appears together with `t`, the coupling is folded into the grade: `H`
//! lives at grade 1 and the k-th Taylor term of `X(t)` at grade k.

mod presets;
mod spec;

pub use presets::Preset;
pub use spec::{InteractionError, InteractionSpec, ModeCoupling, Role};

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::algebra::{AlgebraError, GaussianRational, ModeId, ModePower, NormalMonomial, OperatorPolynomial};

/// Highest order whose output has been checked against the published
/// second-order solutions.
pub const VALIDATED_ORDER: u32 = 2;

/// `G + G†` at grade 1. The free part `Σ ω a†a` is absent: in the rotating
/// frame its commutator is cancelled by the explicit time dependence.
pub fn interaction_hamiltonian(spec: &InteractionSpec, max_order: u32) -> OperatorPolynomial {
    let mut powers = vec![ModePower::default(); spec.mode_count()];
    for (idx, c) in spec.couplings().iter().enumerate() {
        powers[idx] = match c.role {
            Role::Created => ModePower::new(c.exponent, 0),
            Role::Annihilated => ModePower::new(0, c.exponent),
        };
    }
    let g = NormalMonomial::new(GaussianRational::one(), 1, powers);
    let g_dag = g.adjoint();
    OperatorPolynomial::from_monomials([g, g_dag], spec.mode_count(), max_order)
        .expect("monomials built for this mode count")
}

/// `Σ ω_k a_k†a_k` at grade 0 with the frequencies taken as exact rationals,
/// or `None` when the spec carries no frequencies.
pub fn free_hamiltonian(spec: &InteractionSpec, max_order: u32) -> Option<OperatorPolynomial> {
    let mut out = OperatorPolynomial::zero(spec.mode_count(), max_order);
    for (idx, c) in spec.couplings().iter().enumerate() {
        let omega = BigRational::from_float(c.omega?)?;
        let n = OperatorPolynomial::number(ModeId(idx), spec.mode_count(), max_order).ok()?;
        out = out.add(&n.scale_rational(&omega)).ok()?;
    }
    Some(out)
}

/// Rotating-frame Heisenberg derivative `i[H, X]`.
pub fn heisenberg_derivative(
    hamiltonian: &OperatorPolynomial,
    x: &OperatorPolynomial,
) -> Result<OperatorPolynomial, AlgebraError> {
    Ok(hamiltonian.commutator(x)?.scale(&GaussianRational::i()))
}

/// Short-time solution `X(t)` of one mode's annihilation operator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvolvedOperator {
    pub mode: ModeId,
    pub series: OperatorPolynomial,
    pub order: u32,
}

impl EvolvedOperator {
    pub fn is_beyond_validated_order(&self) -> bool {
        self.order > VALIDATED_ORDER
    }

    /// `X(t)† X(t)`.
    pub fn number_operator(&self) -> OperatorPolynomial {
        factorial_moment_operator(self, 1)
    }
}

/// `X(t) = Σ_{k≤order} D^k(a_mode) / k!` with `D = i[H, ·]`, for an arbitrary
/// grade-1 Hamiltonian (the zero polynomial gives the free evolution).
pub fn evolve_with(
    hamiltonian: &OperatorPolynomial,
    mode: ModeId,
    order: u32,
) -> Result<EvolvedOperator, AlgebraError> {
    let mode_count = hamiltonian.mode_count();
    let h = hamiltonian.with_max_order(order);
    let mut term = OperatorPolynomial::annihilator(mode, mode_count, order)?;
    let mut series = term.clone();
    let mut factorial = BigInt::from(1);
    for k in 1..=order {
        term = heisenberg_derivative(&h, &term)?;
        factorial *= k;
        let weight = BigRational::new(BigInt::from(1), factorial.clone());
        series = series.add(&term.scale_rational(&weight))?;
    }
    Ok(EvolvedOperator { mode, series, order })
}

pub fn evolve_mode(spec: &InteractionSpec, mode: ModeId, order: u32) -> Result<EvolvedOperator, InteractionError> {
    spec.check_mode(mode)?;
    Ok(evolve_with(&interaction_hamiltonian(spec, order), mode, order)?)
}

/// `(X†)^k X^k`, the operator whose expectation is the k-th factorial moment.
pub fn factorial_moment_operator(ev: &EvolvedOperator, k: u32) -> OperatorPolynomial {
    let x_k = ev.series.pow(k);
    x_k.adjoint().multiply(&x_k).expect("same mode set")
}

/// Weighted number operator `Σ w_k a_k†a_k`.
pub fn weighted_number(weights: &[(ModeId, i64)], mode_count: usize, max_order: u32) -> Result<OperatorPolynomial, AlgebraError> {
    let mut out = OperatorPolynomial::zero(mode_count, max_order);
    for &(mode, w) in weights {
        let n = OperatorPolynomial::number(mode, mode_count, max_order)?;
        out = out.add(&n.scale(&GaussianRational::from_int(w)))?;
    }
    Ok(out)
}
