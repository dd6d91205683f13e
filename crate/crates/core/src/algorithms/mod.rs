//! Maximization algorithms and the name-keyed registry the benchmark uses to
//! select them at runtime.

mod analysis;
mod brute;
mod greedy;
mod padded;
mod random;
mod rrg;
mod trace;

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::RngCore;

use crate::error::{Error, Result};
use crate::matroid::Matroid;
use crate::setfn::ValueOracle;

pub use analysis::{rrg_with_analysis, AnalysisTrace};
pub use brute::{brute_force_opt, brute_force_opt_base, independent_sets};
pub use greedy::standard_greedy;
pub use padded::padded_variant;
pub use random::random_baseline;
pub use rrg::{residual_random_greedy, rrg_independence_queries, rrg_value_queries};
pub use trace::{IterationRecord, RunTrace};

/// A maximization strategy over a matroid constraint.
pub trait Algorithm: Send + Sync {
    fn name(&self) -> &str;

    /// Deterministic strategies ignore `rng`.
    fn run(&self, f: &ValueOracle, m: &dyn Matroid, rng: &mut dyn RngCore) -> Result<RunTrace>;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ResidualRandomGreedy;

impl Algorithm for ResidualRandomGreedy {
    fn name(&self) -> &str {
        "rrg"
    }

    fn run(&self, f: &ValueOracle, m: &dyn Matroid, rng: &mut dyn RngCore) -> Result<RunTrace> {
        residual_random_greedy(f, m, rng)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct StandardGreedy;

impl Algorithm for StandardGreedy {
    fn name(&self) -> &str {
        "greedy"
    }

    fn run(&self, f: &ValueOracle, m: &dyn Matroid, _rng: &mut dyn RngCore) -> Result<RunTrace> {
        standard_greedy(f, m)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct RandomBaseline;

impl Algorithm for RandomBaseline {
    fn name(&self) -> &str {
        "random"
    }

    fn run(&self, f: &ValueOracle, m: &dyn Matroid, rng: &mut dyn RngCore) -> Result<RunTrace> {
        random_baseline(f, m, rng)
    }
}

/// Residual random greedy with `extra` dummy elements.
#[derive(Debug, Clone, Copy)]
pub struct PaddedResidualRandomGreedy {
    pub extra: usize,
}

impl Algorithm for PaddedResidualRandomGreedy {
    fn name(&self) -> &str {
        "rrg-padded"
    }

    fn run(&self, f: &ValueOracle, m: &dyn Matroid, rng: &mut dyn RngCore) -> Result<RunTrace> {
        padded_variant(f, m, self.extra, rng)
    }
}

/// Algorithms by name.
#[derive(Clone, Default)]
pub struct AlgorithmRegistry {
    entries: BTreeMap<String, Arc<dyn Algorithm>>,
}

impl AlgorithmRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// `rrg`, `greedy`, `random`, and `rrg-padded` (three dummies).
    pub fn builtin() -> Self {
        let mut r = Self::new();
        r.register(Arc::new(ResidualRandomGreedy));
        r.register(Arc::new(StandardGreedy));
        r.register(Arc::new(RandomBaseline));
        r.register(Arc::new(PaddedResidualRandomGreedy { extra: 3 }));
        r
    }

    /// Replaces any algorithm already registered under the same name.
    pub fn register(&mut self, alg: Arc<dyn Algorithm>) -> Option<Arc<dyn Algorithm>> {
        self.entries.insert(alg.name().to_string(), alg)
    }

    pub fn get(&self, name: &str) -> Result<Arc<dyn Algorithm>> {
        self.entries.get(name).cloned().ok_or_else(|| {
            Error::InvalidInput(format!(
                "unknown algorithm '{name}' (known: {})",
                self.names().join(", ")
            ))
        })
    }

    pub fn names(&self) -> Vec<&str> {
        self.entries.keys().map(String::as_str).collect()
    }
}
