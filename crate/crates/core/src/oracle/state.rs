use num_complex::Complex64;

use super::{OracleError, TruncationSpec};

/// Largest Poisson tail mass a truncated coherent state may discard.
pub const COHERENT_TAIL_LIMIT: f64 = 1e-10;

/// Initial condition of one mode for the numerical evolution.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum InitialMode {
    Vacuum,
    Coherent(Complex64),
    Fock(usize),
}

/// Poisson mass `Σ_{n ≥ dim} e^{−|α|²} |α|^{2n} / n!`, summed directly.
pub fn coherent_tail_mass(alpha: Complex64, dim: usize) -> f64 {
    let mean = alpha.norm_sqr();
    if mean == 0.0 {
        return 0.0;
    }
    // log of the first tail term, then the ratio recursion
    let mut log_term = -mean + dim as f64 * mean.ln() - ln_factorial(dim);
    let mut total = 0.0;
    let mut n = dim;
    loop {
        let term = log_term.exp();
        total += term;
        n += 1;
        if (term < total * 1e-18 && n as f64 > mean) || n > dim + 10_000 {
            break;
        }
        log_term += mean.ln() - (n as f64).ln();
    }
    total
}

fn ln_factorial(n: usize) -> f64 {
    (1..=n).map(|k| (k as f64).ln()).sum()
}

/// Truncated coherent state `e^{−|α|²/2} Σ_{n<dim} α^n/√n! |n⟩`, renormalized.
pub fn coherent_state(alpha: Complex64, dim: usize) -> Result<Vec<Complex64>, OracleError> {
    if dim < 2 {
        return Err(OracleError::DimensionTooSmall(dim));
    }
    let tail = coherent_tail_mass(alpha, dim);
    if tail >= COHERENT_TAIL_LIMIT {
        let mut suggested = dim;
        while coherent_tail_mass(alpha, suggested) >= COHERENT_TAIL_LIMIT {
            suggested += 1;
        }
        return Err(OracleError::TruncationTooSmall { dim, tail, suggested });
    }
    let mut amps = Vec::with_capacity(dim);
    let mut a = Complex64::new((-alpha.norm_sqr() / 2.0).exp(), 0.0);
    for n in 0..dim {
        if n > 0 {
            a = a * alpha / (n as f64).sqrt();
        }
        amps.push(a);
    }
    let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    Ok(amps.into_iter().map(|z| z / norm).collect())
}

pub fn fock_vector(n: usize, dim: usize) -> Result<Vec<Complex64>, OracleError> {
    if n >= dim {
        return Err(OracleError::TruncationTooSmall { dim, tail: 1.0, suggested: n + 1 });
    }
    let mut v = vec![Complex64::default(); dim];
    v[n] = Complex64::new(1.0, 0.0);
    Ok(v)
}

/// State on the truncated tensor-product basis.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    trunc: TruncationSpec,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn from_amplitudes(trunc: TruncationSpec, amps: Vec<Complex64>) -> Result<Self, OracleError> {
        if amps.len() != trunc.total_dim() {
            return Err(OracleError::ModeMismatch { operator: amps.len(), truncation: trunc.total_dim() });
        }
        Ok(Self { trunc, amps })
    }

    /// Tensor product of per-mode initial conditions.
    pub fn product(modes: &[InitialMode], trunc: &TruncationSpec) -> Result<Self, OracleError> {
        if modes.len() != trunc.dims().len() {
            return Err(OracleError::ModeMismatch { operator: modes.len(), truncation: trunc.dims().len() });
        }
        let mut amps = vec![Complex64::new(1.0, 0.0)];
        for (mode, &d) in modes.iter().zip(trunc.dims()) {
            let local = match *mode {
                InitialMode::Vacuum => fock_vector(0, d)?,
                InitialMode::Fock(n) => fock_vector(n, d)?,
                InitialMode::Coherent(z) => coherent_state(z, d)?,
            };
            amps = amps.iter().flat_map(|a| local.iter().map(move |b| a * b)).collect();
        }
        Ok(Self { trunc: trunc.clone(), amps })
    }

    pub fn truncation(&self) -> &TruncationSpec {
        &self.trunc
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Diagonal expectation `Σ_i |ψ_i|² f(occupations of i)`.
    pub fn diagonal_expectation(&self, f: impl Fn(&[usize]) -> f64) -> f64 {
        let mut occ = vec![0; self.trunc.dims().len()];
        let mut acc = 0.0;
        for (i, z) in self.amps.iter().enumerate() {
            let w = z.norm_sqr();
            if w == 0.0 {
                continue;
            }
            self.trunc.occupation_into(i, &mut occ);
            acc += w * f(&occ);
        }
        acc
    }

    /// `⟨a†^k a^k⟩ = ⟨n(n−1)…(n−k+1)⟩` in one mode.
    pub fn factorial_moment(&self, mode: usize, k: u32) -> f64 {
        self.diagonal_expectation(|occ| falling_factorial(occ[mode], k))
    }

    /// `⟨a⟩` in one mode.
    pub fn mean_annihilation(&self, mode: usize) -> Complex64 {
        let dims = self.trunc.dims();
        let stride: usize = dims[mode + 1..].iter().product();
        let mut occ = vec![0; dims.len()];
        let mut acc = Complex64::default();
        for (i, z) in self.amps.iter().enumerate() {
            self.trunc.occupation_into(i, &mut occ);
            let n = occ[mode];
            if n == 0 {
                continue;
            }
            // a|n⟩ = √n |n−1⟩
            acc += self.amps[i - stride].conj() * z * (n as f64).sqrt();
        }
        acc
    }
}

pub fn falling_factorial(n: usize, k: u32) -> f64 {
    let k = k as usize;
    if k > n {
        return 0.0;
    }
    ((n - k + 1)..=n).map(|x| x as f64).product()
}
