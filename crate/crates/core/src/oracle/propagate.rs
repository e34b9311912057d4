use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use super::{FockOperator, OracleError, StateVector};

/// Hermiticity tolerance for operators handed to the propagator.
pub const HERMITIAN_TOLERANCE: f64 = 1e-12;

struct Block {
    indices: Vec<usize>,
    eigenvalues: DVector<f64>,
    eigenvectors: DMatrix<Complex64>,
}

/// `exp(−iHt)` through the eigendecomposition of each invariant block of `H`.
pub struct Propagator {
    dim: usize,
    blocks: Vec<Block>,
}

impl Propagator {
    pub fn new(h: &FockOperator) -> Result<Self, OracleError> {
        let deviation = h.hermiticity_deviation();
        if deviation > HERMITIAN_TOLERANCE {
            return Err(OracleError::NotHermitian(deviation));
        }
        let dense_entries: Vec<(usize, usize, Complex64)> = h.entries().collect();
        let mut position = vec![(0usize, 0usize); h.dim()];
        let blocks_idx = h.blocks();
        for (b, idx) in blocks_idx.iter().enumerate() {
            for (k, &i) in idx.iter().enumerate() {
                position[i] = (b, k);
            }
        }
        let mut mats: Vec<DMatrix<Complex64>> =
            blocks_idx.iter().map(|idx| DMatrix::zeros(idx.len(), idx.len())).collect();
        for (i, j, v) in dense_entries {
            let (b, ki) = position[i];
            let (_, kj) = position[j];
            mats[b][(ki, kj)] += v;
        }
        let mut blocks = Vec::with_capacity(mats.len());
        for (indices, mut m) in blocks_idx.into_iter().zip(mats) {
            // symmetrize away rounding-level asymmetry
            let adj = m.adjoint();
            m = (m + adj) * Complex64::new(0.5, 0.0);
            let eig = SymmetricEigen::try_new(m, f64::EPSILON, 100_000).ok_or(OracleError::EigenFailure)?;
            blocks.push(Block { indices, eigenvalues: eig.eigenvalues, eigenvectors: eig.eigenvectors });
        }
        Ok(Self { dim: h.dim(), blocks })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn largest_block(&self) -> usize {
        self.blocks.iter().map(|b| b.indices.len()).max().unwrap_or(0)
    }

    pub fn evolve(&self, psi0: &StateVector, t: f64) -> Result<StateVector, OracleError> {
        if psi0.amplitudes().len() != self.dim {
            return Err(OracleError::ModeMismatch { operator: self.dim, truncation: psi0.amplitudes().len() });
        }
        let mut out = psi0.clone();
        let src = psi0.amplitudes();
        let dst = out.amplitudes_mut();
        for block in &self.blocks {
            let local = DVector::from_iterator(block.indices.len(), block.indices.iter().map(|&i| src[i]));
            if local.iter().all(|z| *z == Complex64::default()) {
                continue;
            }
            let mut coeffs = block.eigenvectors.adjoint() * local;
            for (c, &lambda) in coeffs.iter_mut().zip(block.eigenvalues.iter()) {
                *c *= Complex64::from_polar(1.0, -lambda * t);
            }
            let evolved = &block.eigenvectors * coeffs;
            for (&i, z) in block.indices.iter().zip(evolved.iter()) {
                dst[i] = *z;
            }
        }
        Ok(out)
    }
}

/// `ψ(t) = exp(−iHt) ψ0`.
pub fn evolve(h: &FockOperator, psi0: &StateVector, t: f64) -> Result<StateVector, OracleError> {
    Propagator::new(h)?.evolve(psi0, t)
}
