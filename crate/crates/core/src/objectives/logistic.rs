//! Logistic regression without intercept, fitted per support by Newton's method.

use std::sync::atomic::{AtomicU64, Ordering};

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::set::ElementSet;
use crate::setfn::{SetFunction, ValueOracle};

/// Ridge weight that keeps the maximum finite under separable data.
pub const DEFAULT_RIDGE: f64 = 1e-6;
pub const GRADIENT_TOL: f64 = 1e-8;
pub const MAX_NEWTON_ITERS: usize = 100;

/// Binary features (one-hot dummies as columns) and binary labels.
#[derive(Debug, Clone, PartialEq)]
pub struct LogisticProblem {
    features: DMatrix<f64>,
    labels: DVector<f64>,
    ridge: f64,
}

#[derive(Debug, Clone)]
pub struct LogisticFit {
    /// Weights of the support members in ascending id order.
    pub weights: DVector<f64>,
    /// Penalized log-likelihood at `weights`.
    pub loglik: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// `log(1 + e^z)` without overflow.
fn softplus(z: f64) -> f64 {
    z.max(0.0) + (-z.abs()).exp().ln_1p()
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

impl LogisticProblem {
    pub fn new(features: DMatrix<f64>, labels: DVector<f64>, ridge: f64) -> Result<Self> {
        if features.nrows() != labels.len() {
            return Err(Error::invalid(format!(
                "{} feature rows but {} labels",
                features.nrows(),
                labels.len()
            )));
        }
        if features
            .iter()
            .chain(labels.iter())
            .any(|&x| x != 0.0 && x != 1.0)
        {
            return Err(Error::invalid("features and labels must be 0/1"));
        }
        if !(ridge >= 0.0 && ridge.is_finite()) {
            return Err(Error::invalid(format!("ridge must be non-negative, got {ridge}")));
        }
        Ok(LogisticProblem {
            features,
            labels,
            ridge,
        })
    }

    pub fn features(&self) -> &DMatrix<f64> {
        &self.features
    }

    pub fn labels(&self) -> &DVector<f64> {
        &self.labels
    }

    pub fn ridge(&self) -> f64 {
        self.ridge
    }

    pub fn num_samples(&self) -> usize {
        self.features.nrows()
    }

    pub fn num_features(&self) -> usize {
        self.features.ncols()
    }

    /// `Σ_j [y_j z_j - log(1 + e^{z_j})] - ridge ||w||²` with `z = X_S w`.
    pub fn loglik(&self, s: &ElementSet, w: &DVector<f64>) -> Result<f64> {
        s.check_range(self.num_features())?;
        if w.len() != s.len() {
            return Err(Error::invalid("weight vector length differs from support size"));
        }
        let xs = self.features.select_columns(s.as_slice());
        Ok(self.objective(&xs, w))
    }

    /// Gradient of [`LogisticProblem::loglik`] with respect to `w`.
    pub fn gradient(&self, s: &ElementSet, w: &DVector<f64>) -> Result<DVector<f64>> {
        s.check_range(self.num_features())?;
        let xs = self.features.select_columns(s.as_slice());
        Ok(self.grad(&xs, w))
    }

    fn objective(&self, xs: &DMatrix<f64>, w: &DVector<f64>) -> f64 {
        let z = xs * w;
        let data: f64 = z
            .iter()
            .zip(self.labels.iter())
            .map(|(&z, &y)| y * z - softplus(z))
            .sum();
        data - self.ridge * w.norm_squared()
    }

    fn grad(&self, xs: &DMatrix<f64>, w: &DVector<f64>) -> DVector<f64> {
        let z = xs * w;
        let resid = DVector::from_iterator(
            z.len(),
            z.iter().zip(self.labels.iter()).map(|(&z, &y)| y - sigmoid(z)),
        );
        xs.transpose() * resid - w * (2.0 * self.ridge)
    }

    /// Maximizes the penalized log-likelihood over weights supported on `s`.
    ///
    /// Newton steps with backtracking; stops when `||∇||∞ < 1e-8` or after 100
    /// iterations, returning the best iterate either way.
    pub fn fit(&self, s: &ElementSet) -> Result<LogisticFit> {
        s.check_range(self.num_features())?;
        let k = s.len();
        let xs = self.features.select_columns(s.as_slice());
        let mut w = DVector::zeros(k);
        let mut obj = self.objective(&xs, &w);
        for iter in 0..=MAX_NEWTON_ITERS {
            let g = self.grad(&xs, &w);
            if g.amax() < GRADIENT_TOL {
                return Ok(LogisticFit {
                    weights: w,
                    loglik: obj,
                    iterations: iter,
                    converged: true,
                });
            }
            if iter == MAX_NEWTON_ITERS {
                break;
            }
            let z = &xs * &w;
            let curv = z.map(|z| {
                let p = sigmoid(z);
                p * (1.0 - p)
            });
            let mut h = xs.transpose() * DMatrix::from_diagonal(&curv) * &xs;
            for i in 0..k {
                h[(i, i)] += 2.0 * self.ridge;
            }
            let step = match h.clone().cholesky() {
                Some(ch) => ch.solve(&g),
                None => {
                    let scale = h.diagonal().amax().max(1.0);
                    for i in 0..k {
                        h[(i, i)] += 1e-10 * scale;
                    }
                    match h.cholesky() {
                        Some(ch) => ch.solve(&g),
                        None => g.clone(),
                    }
                }
            };
            // Undamped step once the predicted ascent is below rounding noise.
            let predicted = g.dot(&step);
            if predicted <= 64.0 * f64::EPSILON * (1.0 + obj.abs()) {
                w += &step;
                obj = self.objective(&xs, &w);
                continue;
            }
            let mut t = 1.0;
            let mut accepted = false;
            for _ in 0..40 {
                let cand = &w + &step * t;
                let cand_obj = self.objective(&xs, &cand);
                if cand_obj >= obj {
                    w = cand;
                    obj = cand_obj;
                    accepted = true;
                    break;
                }
                t *= 0.5;
            }
            if !accepted {
                // No ascent possible at working precision.
                let converged = self.grad(&xs, &w).amax() < GRADIENT_TOL;
                return Ok(LogisticFit {
                    weights: w,
                    loglik: obj,
                    iterations: iter + 1,
                    converged,
                });
            }
        }
        Ok(LogisticFit {
            weights: w,
            loglik: obj,
            iterations: MAX_NEWTON_ITERS,
            converged: false,
        })
    }
}

struct LogisticLoglik {
    problem: LogisticProblem,
    empty_value: f64,
    unconverged: AtomicU64,
}

impl SetFunction for LogisticLoglik {
    fn ground_size(&self) -> usize {
        self.problem.num_features()
    }

    fn value(&self, s: &ElementSet) -> Result<f64> {
        let fit = self.problem.fit(s)?;
        if !fit.converged {
            self.unconverged.fetch_add(1, Ordering::Relaxed);
        }
        Ok(fit.loglik - self.empty_value)
    }

    fn solver_warnings(&self) -> u64 {
        self.unconverged.load(Ordering::Relaxed)
    }
}

/// `f(S) = g(S) - g(∅)` where `g(S)` is the maximum penalized log-likelihood
/// over weights supported on `S`, and `g(∅) = -m log 2`.
pub fn logistic_loglik(problem: LogisticProblem) -> ValueOracle {
    let empty_value = -(problem.num_samples() as f64) * std::f64::consts::LN_2;
    ValueOracle::new(LogisticLoglik {
        problem,
        empty_value,
        unconverged: AtomicU64::new(0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_support() {
        let x = DMatrix::from_row_slice(3, 1, &[1.0, 0.0, 1.0]);
        let y = DVector::from_vec(vec![1.0, 0.0, 0.0]);
        let p = LogisticProblem::new(x, y, DEFAULT_RIDGE).unwrap();
        let fit = p.fit(&ElementSet::new()).unwrap();
        assert!((fit.loglik + 3.0 * std::f64::consts::LN_2).abs() < 1e-15);
        assert_eq!(logistic_loglik(p).evaluate(&ElementSet::new()).unwrap(), 0.0);
    }

    #[test]
    fn balanced_single_feature_has_closed_form() {
        // Feature on for 4 rows with 3 positives: optimum w = log 3 (ridge 0).
        let x = DMatrix::from_row_slice(5, 1, &[1.0, 1.0, 1.0, 1.0, 0.0]);
        let y = DVector::from_vec(vec![1.0, 1.0, 1.0, 0.0, 1.0]);
        let p = LogisticProblem::new(x, y, 0.0).unwrap();
        let fit = p.fit(&ElementSet::from([0])).unwrap();
        assert!(fit.converged);
        assert!((fit.weights[0] - 3f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn separable_features_stay_finite_and_grow_as_ridge_shrinks() {
        let y = DVector::from_vec(vec![1.0, 0.0, 1.0, 1.0, 0.0, 0.0]);
        let mut x = DMatrix::zeros(6, 2);
        x.set_column(0, &y);
        x.set_column(1, &y.map(|v| 1.0 - v));
        let ln2 = std::f64::consts::LN_2;
        // No intercept: rows where the only selected column is 0 stay at z = 0.
        for (support, limit) in [
            (ElementSet::from([0]), 3.0 * ln2),
            (ElementSet::from([0, 1]), 6.0 * ln2),
        ] {
            let mut last = 0.0;
            for ridge in [1e-2, 1e-4, 1e-6] {
                let f = logistic_loglik(LogisticProblem::new(x.clone(), y.clone(), ridge).unwrap());
                let v = f.evaluate(&support).unwrap();
                assert!(v.is_finite() && v < limit);
                assert!(v > last);
                assert_eq!(f.solver_warnings(), 0);
                last = v;
            }
            assert!(limit - last < 1e-3, "{support}: {last} vs {limit}");
        }
    }

    #[test]
    fn rejects_non_binary() {
        let x = DMatrix::from_row_slice(2, 1, &[0.5, 1.0]);
        let y = DVector::from_vec(vec![1.0, 0.0]);
        assert!(LogisticProblem::new(x, y, 0.0).is_err());
    }

    #[test]
    fn softplus_is_stable() {
        assert_eq!(softplus(1000.0), 1000.0);
        assert!(softplus(-1000.0) >= 0.0);
        assert!((softplus(0.0) - std::f64::consts::LN_2).abs() < 1e-16);
    }
}
