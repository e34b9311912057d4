//! Exact algebra of multimode bosonic ladder operators.
//!
//! Every operator is kept as a sum of normal-ordered monomials with
//! Gaussian-rational coefficients. Each monomial also carries a grade, the
//! power of the small parameter `gt` it multiplies; products add grades and
//! drop anything above the polynomial's truncation order.

mod coeff;
mod monomial;
mod polynomial;

pub use coeff::GaussianRational;
pub use monomial::{ModeId, ModePower, MonomialKey, NormalMonomial};
pub use polynomial::{normal_order_product, OperatorPolynomial, DEFAULT_MAX_ORDER};

pub(crate) use coeff::fmt_rational;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("mode-set mismatch: {left} modes vs {right} modes")]
    ModeMismatch { left: usize, right: usize },
    #[error("truncation mismatch: max order {left} vs {right}")]
    TruncationMismatch { left: u32, right: u32 },
    #[error("mode {mode} out of range for a {mode_count}-mode polynomial")]
    ModeOutOfRange { mode: usize, mode_count: usize },
    #[error("parse error: {0}")]
    Parse(String),
}
