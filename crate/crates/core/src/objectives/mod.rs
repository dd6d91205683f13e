//! Experiment objectives as value oracles.

mod coverage;
mod dpp;
mod least_squares;
mod logistic;

pub use coverage::{coverage_function, Coverage};
pub use dpp::{dpp_determinant, dpp_determinant_normalized, gaussian_gram, KernelGramian};
pub use least_squares::{least_squares_loglik, LeastSquaresFit, RegressionProblem, RANK_TOL};
pub use logistic::{
    logistic_loglik, LogisticFit, LogisticProblem, DEFAULT_RIDGE, GRADIENT_TOL, MAX_NEWTON_ITERS,
};
