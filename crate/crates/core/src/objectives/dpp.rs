use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::set::ElementSet;
use crate::setfn::{SetFunction, ValueOracle};

const SYMMETRY_TOL: f64 = 1e-9;
const PSD_TOL: f64 = -1e-8;

/// Symmetric positive semidefinite similarity matrix over `n` items.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelGramian {
    matrix: DMatrix<f64>,
    bandwidth: Option<f64>,
}

impl KernelGramian {
    /// Checks symmetry and positive semidefiniteness.
    pub fn from_matrix(matrix: DMatrix<f64>) -> Result<Self> {
        Self::checked(matrix, None)
    }

    fn checked(matrix: DMatrix<f64>, bandwidth: Option<f64>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::invalid("Gramian must be square"));
        }
        let n = matrix.nrows();
        for i in 0..n {
            for j in 0..i {
                if (matrix[(i, j)] - matrix[(j, i)]).abs() > SYMMETRY_TOL {
                    return Err(Error::invalid(format!("Gramian not symmetric at ({i}, {j})")));
                }
            }
        }
        if n > 0 {
            let min_eig = SymmetricEigen::new(matrix.clone()).eigenvalues.min();
            if min_eig < PSD_TOL {
                return Err(Error::invalid(format!(
                    "Gramian is not PSD: smallest eigenvalue {min_eig:e}"
                )));
            }
        }
        Ok(KernelGramian { matrix, bandwidth })
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// Gaussian bandwidth if this Gramian came from [`gaussian_gram`].
    pub fn bandwidth(&self) -> Option<f64> {
        self.bandwidth
    }

    pub fn len(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.matrix.nrows() == 0
    }

    /// `det(I + X_S)`.
    pub fn det_identity_plus(&self, s: &ElementSet) -> Result<f64> {
        s.check_range(self.len())?;
        if s.is_empty() {
            return Ok(1.0);
        }
        let idx = s.as_slice();
        let mut sub = self.matrix.select_rows(idx).select_columns(idx);
        for i in 0..idx.len() {
            sub[(i, i)] += 1.0;
        }
        Ok(match sub.clone().cholesky() {
            Some(ch) => ch.l().diagonal().iter().map(|d| d * d).product(),
            None => sub.lu().determinant(),
        })
    }
}

/// `X_ij = exp(-||v_i - v_j||² / (2 h²))`.
pub fn gaussian_gram(vectors: &[Vec<f64>], bandwidth: f64) -> Result<KernelGramian> {
    if !(bandwidth > 0.0 && bandwidth.is_finite()) {
        return Err(Error::invalid(format!(
            "bandwidth must be positive, got {bandwidth}"
        )));
    }
    if let Some(first) = vectors.first() {
        if let Some((i, v)) = vectors.iter().enumerate().find(|(_, v)| v.len() != first.len()) {
            return Err(Error::invalid(format!(
                "vector {i} has dimension {} but vector 0 has {}",
                v.len(),
                first.len()
            )));
        }
    }
    let n = vectors.len();
    let denom = 2.0 * bandwidth * bandwidth;
    let mut m = DMatrix::identity(n, n);
    for i in 0..n {
        for j in 0..i {
            let d2: f64 = vectors[i]
                .iter()
                .zip(&vectors[j])
                .map(|(a, b)| (a - b) * (a - b))
                .sum();
            let k = (-d2 / denom).exp();
            m[(i, j)] = k;
            m[(j, i)] = k;
        }
    }
    KernelGramian::checked(m, Some(bandwidth))
}

struct DppDeterminant {
    gram: KernelGramian,
    offset: f64,
}

impl SetFunction for DppDeterminant {
    fn ground_size(&self) -> usize {
        self.gram.len()
    }

    fn value(&self, s: &ElementSet) -> Result<f64> {
        Ok(self.gram.det_identity_plus(s)? - self.offset)
    }
}

/// `f(S) = det(I + X_S)`, with `f(∅) = 1`.
pub fn dpp_determinant(gram: KernelGramian) -> ValueOracle {
    ValueOracle::new(DppDeterminant { gram, offset: 0.0 })
}

/// `det(I + X_S) - 1`, which vanishes on the empty set.
pub fn dpp_determinant_normalized(gram: KernelGramian) -> ValueOracle {
    ValueOracle::new(DppDeterminant { gram, offset: 1.0 })
}
