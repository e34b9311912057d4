use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{OracleError, StateVector, TruncationSpec};
use crate::algebra::{ModePower, OperatorPolynomial};

/// Truncated single-mode ladder operators `(a, a†)`; `a` carries `√n` on the
/// superdiagonal.
pub fn ladder_matrix(dim: usize) -> Result<(DMatrix<Complex64>, DMatrix<Complex64>), OracleError> {
    if dim < 2 {
        return Err(OracleError::DimensionTooSmall(dim));
    }
    let mut a = DMatrix::zeros(dim, dim);
    for n in 1..dim {
        a[(n - 1, n)] = Complex64::new((n as f64).sqrt(), 0.0);
    }
    let a_dag = a.adjoint();
    Ok((a, a_dag))
}

/// Sparse operator on the truncated tensor-product basis (row-major over
/// modes, mode 0 slowest).
#[derive(Clone, Debug, PartialEq)]
pub struct FockOperator {
    dims: Vec<usize>,
    dim: usize,
    /// `columns[j]` holds the nonzero `(i, value)` entries of column `j`.
    columns: Vec<Vec<(usize, Complex64)>>,
}

impl FockOperator {
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(j, col)| col.iter().map(move |&(i, v)| (i, j, v)))
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for (i, j, v) in self.entries() {
            m[(i, j)] += v;
        }
        m
    }

    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        for col in &mut out.columns {
            for (_, v) in col.iter_mut() {
                *v *= factor;
            }
        }
        out
    }

    /// Largest `|H_ij − conj(H_ji)|`.
    pub fn hermiticity_deviation(&self) -> f64 {
        let lookup: BTreeMap<(usize, usize), Complex64> = self.entries().map(|(i, j, v)| ((i, j), v)).collect();
        lookup
            .iter()
            .map(|(&(i, j), v)| (v - lookup.get(&(j, i)).copied().unwrap_or_default().conj()).norm())
            .fold(0.0, f64::max)
    }

    pub fn apply(&self, psi: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::default(); self.dim];
        for (j, col) in self.columns.iter().enumerate() {
            if psi[j] == Complex64::default() {
                continue;
            }
            for &(i, v) in col {
                out[i] += v * psi[j];
            }
        }
        out
    }

    pub fn expectation(&self, psi: &StateVector) -> Complex64 {
        let h_psi = self.apply(psi.amplitudes());
        psi.amplitudes().iter().zip(&h_psi).map(|(a, b)| a.conj() * b).sum()
    }

    /// Connected components of the nonzero pattern; the operator is block
    /// diagonal over them.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut parent: Vec<usize> = (0..self.dim).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for (i, j, _) in self.entries() {
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
            if ri != rj {
                parent[ri.max(rj)] = ri.min(rj);
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for x in 0..self.dim {
            let r = find(&mut parent, x);
            groups.entry(r).or_default().push(x);
        }
        groups.into_values().collect()
    }
}

/// Action of `a†^p a^q` on `|n⟩` inside a `dim`-level truncation: the target
/// level and the matrix element, or `None` if it vanishes.
fn single_mode_action(power: ModePower, n: usize, dim: usize) -> Option<(usize, f64)> {
    let (p, q) = (power.creation as usize, power.annihilation as usize);
    if q > n {
        return None;
    }
    let m = n - q + p;
    if m >= dim {
        return None;
    }
    let mut amp = 1.0;
    for k in (n - q + 1)..=n {
        amp *= k as f64;
    }
    for k in (n - q + 1)..=m {
        amp *= k as f64;
    }
    Some((m, amp.sqrt()))
}

/// Matrix image of a polynomial: every ladder operator replaced by its
/// truncated matrix, `(gt)^grade` replaced by `param^grade`.
pub fn materialize(
    x: &OperatorPolynomial,
    trunc: &TruncationSpec,
    param: f64,
) -> Result<FockOperator, OracleError> {
    let dims = trunc.dims().to_vec();
    if x.mode_count() != dims.len() {
        return Err(OracleError::ModeMismatch { operator: x.mode_count(), truncation: dims.len() });
    }
    let dim = trunc.total_dim();
    let terms: Vec<(Vec<ModePower>, Complex64)> = x
        .terms()
        .map(|(k, c)| (k.powers.clone(), c.to_complex64() * param.powi(k.grade as i32)))
        .collect();
    let mut columns = Vec::with_capacity(dim);
    let mut occupation = vec![0usize; dims.len()];
    for j in 0..dim {
        trunc.occupation_into(j, &mut occupation);
        let mut col: BTreeMap<usize, Complex64> = BTreeMap::new();
        'terms: for (powers, c) in &terms {
            let mut amp = 1.0;
            let mut row = 0;
            for ((power, &n), &d) in powers.iter().zip(&occupation).zip(&dims) {
                match single_mode_action(*power, n, d) {
                    Some((m, a)) => {
                        amp *= a;
                        row = row * d + m;
                    }
                    None => continue 'terms,
                }
            }
            *col.entry(row).or_default() += c * amp;
        }
        columns.push(col.into_iter().filter(|(_, v)| *v != Complex64::default()).collect());
    }
    Ok(FockOperator { dims, dim, columns })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn ladder_superdiagonal() {
        let (a, a_dag) = ladder_matrix(4).unwrap();
        for n in 1..4 {
            assert_eq!(a[(n - 1, n)], c((n as f64).sqrt()));
        }
        let n_op = &a_dag * &a;
        for i in 0..4 {
            for j in 0..4 {
                let expected = if i == j { c(i as f64) } else { c(0.0) };
                assert!((n_op[(i, j)] - expected).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn ladder_commutator_truncation_defect() {
        let dim = 6;
        let (a, a_dag) = ladder_matrix(dim).unwrap();
        let comm = &a * &a_dag - &a_dag * &a;
        for i in 0..dim {
            let expected = if i == dim - 1 { -((dim - 1) as f64) } else { 1.0 };
            assert!((comm[(i, i)] - c(expected)).norm() < 1e-12);
        }
        assert!(matches!(ladder_matrix(1), Err(OracleError::DimensionTooSmall(1))));
    }

    #[test]
    fn number_operator_image() {
        let n = OperatorPolynomial::parse("(1+0i)·A† A", 1, 2).unwrap();
        let m = materialize(&n, &TruncationSpec::new(vec![4]).unwrap(), 1.0).unwrap().to_dense();
        assert_eq!(m, DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(0.0), c(1.0), c(2.0), c(3.0)])));
    }

    #[test]
    fn materialize_matches_matrix_powers() {
        let dim = 7;
        let (a, a_dag) = ladder_matrix(dim).unwrap();
        let x = OperatorPolynomial::parse("(2+1i)·A†^2 A^3", 1, 2).unwrap();
        let m = materialize(&x, &TruncationSpec::new(vec![dim]).unwrap(), 1.0).unwrap().to_dense();
        let expected = (&a_dag * &a_dag) * (&a * &a * &a) * Complex64::new(2.0, 1.0);
        assert!((m - expected).norm() < 1e-12);
    }

    #[test]
    fn blocks_of_diagonal_operator_are_singletons() {
        let n = OperatorPolynomial::parse("(1+0i)·A† A + (1+0i)·B† B", 2, 2).unwrap();
        let m = materialize(&n, &TruncationSpec::new(vec![3, 2]).unwrap(), 1.0).unwrap();
        assert_eq!(m.blocks().len(), 6);
    }
}
