//! Sparse linear regression: the normalized least-squares log-likelihood.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::set::ElementSet;
use crate::setfn::{SetFunction, ValueOracle};

/// Relative singular-value (and R-diagonal) cutoff for rank decisions.
pub const RANK_TOL: f64 = 1e-10;

/// `n × p` design matrix `X` and response `y`. Columns are the ground set.
#[derive(Debug, Clone, PartialEq)]
pub struct RegressionProblem {
    design: DMatrix<f64>,
    response: DVector<f64>,
}

/// Least-squares fit restricted to a support.
#[derive(Debug, Clone)]
pub struct LeastSquaresFit {
    /// Coefficients for the support members in ascending id order.
    pub coefficients: DVector<f64>,
    pub residual: DVector<f64>,
}

impl RegressionProblem {
    pub fn new(design: DMatrix<f64>, response: DVector<f64>) -> Result<Self> {
        if design.nrows() == 0 || design.ncols() == 0 {
            return Err(Error::invalid("design matrix must be at least 1x1"));
        }
        if design.nrows() != response.len() {
            return Err(Error::invalid(format!(
                "design has {} rows but response has {} entries",
                design.nrows(),
                response.len()
            )));
        }
        Ok(RegressionProblem { design, response })
    }

    pub fn design(&self) -> &DMatrix<f64> {
        &self.design
    }

    pub fn response(&self) -> &DVector<f64> {
        &self.response
    }

    pub fn num_samples(&self) -> usize {
        self.design.nrows()
    }

    pub fn num_features(&self) -> usize {
        self.design.ncols()
    }

    pub fn columns(&self, s: &ElementSet) -> Result<DMatrix<f64>> {
        s.check_range(self.num_features())?;
        Ok(self.design.select_columns(s.as_slice()))
    }

    /// `min_β ||y - X_S β||` by QR; rank-deficient supports fall back to the
    /// minimum-norm SVD solution.
    pub fn fit(&self, s: &ElementSet) -> Result<LeastSquaresFit> {
        let xs = self.columns(s)?;
        let y = &self.response;
        if s.is_empty() {
            return Ok(LeastSquaresFit {
                coefficients: DVector::zeros(0),
                residual: y.clone(),
            });
        }
        let coefficients = match full_rank_qr_solve(&xs, y) {
            Some(beta) => beta,
            None => {
                let svd = JacobiSvd::new(&xs);
                let cutoff = svd.cutoff();
                let mut beta = DVector::zeros(xs.ncols());
                for j in svd.kept(cutoff) {
                    let sigma = svd.sigma[j];
                    beta += svd.v.column(j) * (svd.w.column(j).dot(y) / (sigma * sigma));
                }
                beta
            }
        };
        let residual = y - &xs * &coefficients;
        Ok(LeastSquaresFit {
            coefficients,
            residual,
        })
    }

    /// `||y||² - min ||y - X_S β||²`.
    pub fn explained(&self, s: &ElementSet) -> Result<f64> {
        let fit = self.fit(s)?;
        Ok(self.response.norm_squared() - fit.residual.norm_squared())
    }

    /// Orthonormal basis of `span(X_S)`.
    fn column_basis(&self, xs: &DMatrix<f64>) -> DMatrix<f64> {
        if xs.ncols() == 0 {
            return DMatrix::zeros(xs.nrows(), 0);
        }
        if xs.ncols() <= xs.nrows() {
            let qr = xs.clone().qr();
            if r_is_well_conditioned(&qr.r()) {
                return qr.q();
            }
        }
        let svd = JacobiSvd::new(xs);
        let keep: Vec<usize> = svd.kept(svd.cutoff()).collect();
        let mut u = svd.w.select_columns(&keep);
        for (c, &j) in keep.iter().enumerate() {
            u.column_mut(c).unscale_mut(svd.sigma[j]);
        }
        u
    }
}

/// One-sided Jacobi SVD `A = W Vᵀ`, where `W` has orthogonal columns of
/// norm `sigma` and `V` is orthogonal. Accurate on exactly rank-deficient
/// inputs.
struct JacobiSvd {
    w: DMatrix<f64>,
    v: DMatrix<f64>,
    sigma: DVector<f64>,
}

impl JacobiSvd {
    const MAX_SWEEPS: usize = 100;

    fn new(a: &DMatrix<f64>) -> Self {
        let p = a.ncols();
        let mut w = a.clone();
        let mut v = DMatrix::identity(p, p);
        for _ in 0..Self::MAX_SWEEPS {
            let mut rotated = false;
            for i in 0..p {
                for j in i + 1..p {
                    let alpha = w.column(i).norm_squared();
                    let beta = w.column(j).norm_squared();
                    let gamma = w.column(i).dot(&w.column(j));
                    if gamma == 0.0 || gamma.abs() <= f64::EPSILON * (alpha * beta).sqrt() {
                        continue;
                    }
                    rotated = true;
                    let zeta = (beta - alpha) / (2.0 * gamma);
                    let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = c * t;
                    rotate(&mut w, i, j, c, s);
                    rotate(&mut v, i, j, c, s);
                }
            }
            if !rotated {
                break;
            }
        }
        let sigma = DVector::from_iterator(p, w.column_iter().map(|c| c.norm()));
        JacobiSvd { w, v, sigma }
    }

    fn cutoff(&self) -> f64 {
        RANK_TOL * self.sigma.max()
    }

    fn kept(&self, cutoff: f64) -> impl Iterator<Item = usize> + '_ {
        (0..self.sigma.len()).filter(move |&j| self.sigma[j] > cutoff)
    }
}

fn rotate(m: &mut DMatrix<f64>, i: usize, j: usize, c: f64, s: f64) {
    for r in 0..m.nrows() {
        let (a, b) = (m[(r, i)], m[(r, j)]);
        m[(r, i)] = c * a - s * b;
        m[(r, j)] = s * a + c * b;
    }
}

fn r_is_well_conditioned(r: &DMatrix<f64>) -> bool {
    let diag = r.diagonal().map(f64::abs);
    let max = diag.max();
    max > 0.0 && diag.min() > RANK_TOL * max
}

fn full_rank_qr_solve(xs: &DMatrix<f64>, y: &DVector<f64>) -> Option<DVector<f64>> {
    if xs.ncols() > xs.nrows() {
        return None;
    }
    let qr = xs.clone().qr();
    let r = qr.r();
    if !r_is_well_conditioned(&r) {
        return None;
    }
    let qty = qr.q().transpose() * y;
    r.solve_upper_triangular(&qty)
}

struct LeastSquaresLoglik {
    problem: RegressionProblem,
    response_norm2: f64,
}

impl SetFunction for LeastSquaresLoglik {
    fn ground_size(&self) -> usize {
        self.problem.num_features()
    }

    fn value(&self, s: &ElementSet) -> Result<f64> {
        let fit = self.problem.fit(s)?;
        Ok(self.response_norm2 - fit.residual.norm_squared())
    }

    /// Projects each candidate column off `span(X_base)` once and adds its
    /// rank-one gain, instead of refactoring `X_{base+u}` per candidate.
    fn extension_values(&self, base: &ElementSet, candidates: &[usize]) -> Result<Vec<f64>> {
        let p = self.problem.num_features();
        for &u in candidates {
            if u >= p {
                return Err(Error::ElementOutOfRange { element: u, size: p });
            }
        }
        let xs = self.problem.columns(base)?;
        let q = self.problem.column_basis(&xs);
        let y = &self.problem.response;
        let residual = y - &q * (q.transpose() * y);
        let base_value = self.response_norm2 - residual.norm_squared();
        Ok(candidates
            .iter()
            .map(|&u| {
                if base.contains(u) {
                    return base_value;
                }
                let x = self.problem.design.column(u).into_owned();
                let mut perp = &x - &q * (q.transpose() * &x);
                perp -= &q * (q.transpose() * &perp);
                let perp_norm2 = perp.norm_squared();
                if perp_norm2.sqrt() <= RANK_TOL * x.norm() || perp_norm2 == 0.0 {
                    base_value
                } else {
                    base_value + perp.dot(&residual).powi(2) / perp_norm2
                }
            })
            .collect())
    }
}

/// `f(S) = ||y||² - min_{supp β ⊆ S} ||y - Xβ||²`, so `f(∅) = 0`.
pub fn least_squares_loglik(problem: RegressionProblem) -> ValueOracle {
    let response_norm2 = problem.response.norm_squared();
    ValueOracle::new(LeastSquaresLoglik {
        problem,
        response_norm2,
    })
}
