//! Weakly submodular maximization under matroid constraints: matroid and
//! set-function oracles, experiment objectives, the residual random greedy
//! with its baselines, and seeded synthetic data.

pub mod algorithms;
pub mod datagen;
pub mod error;
pub mod io;
pub mod matroid;
pub mod objectives;
pub mod set;
pub mod setfn;

pub use error::{Error, Result};
pub use matroid::{Matroid, MatroidSpec};
pub use set::ElementSet;
pub use setfn::{SetFunction, ValueOracle};
