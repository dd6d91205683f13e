//! Set functions and the counted value oracle algorithms talk to.

mod gamma;
mod monotone;

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::set::ElementSet;

pub use gamma::{
    estimate_gamma, estimate_gamma_restricted, estimate_gamma_unrestricted, GammaEstimate, GammaOptions,
    DEFAULT_PAIR_CAP, POSITIVE_EPS,
};
pub use monotone::{check_monotone, MonotoneReport};

/// Absolute tolerance for comparing objective values.
pub const VALUE_TOL: f64 = 1e-9;

/// A real-valued function on subsets of `0..ground_size()`.
///
/// Implementations must be deterministic and must not depend on the order in
/// which a set's members are stored.
pub trait SetFunction: Send + Sync {
    fn ground_size(&self) -> usize;

    fn value(&self, s: &ElementSet) -> Result<f64>;

    /// `f(base + u)` for every `u` in `candidates`.
    ///
    /// Objectives with a cheap rank-one update override this; the result must
    /// agree with calling [`SetFunction::value`] on each extension.
    fn extension_values(&self, base: &ElementSet, candidates: &[usize]) -> Result<Vec<f64>> {
        candidates.iter().map(|&u| self.value(&base.with(u))).collect()
    }

    /// Number of evaluations so far whose inner solver stopped before converging.
    fn solver_warnings(&self) -> u64 {
        0
    }
}

/// A shared set function plus a query counter.
///
/// Clones share both the function and the counter, so wrappers built from a
/// clone keep charging queries to the original oracle.
#[derive(Clone)]
pub struct ValueOracle {
    func: Arc<dyn SetFunction>,
    queries: Arc<AtomicU64>,
}

impl fmt::Debug for ValueOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ValueOracle")
            .field("ground_size", &self.ground_size())
            .field("queries", &self.queries())
            .finish()
    }
}

impl ValueOracle {
    pub fn new(func: impl SetFunction + 'static) -> Self {
        Self::from_arc(Arc::new(func))
    }

    pub fn from_arc(func: Arc<dyn SetFunction>) -> Self {
        ValueOracle {
            func,
            queries: Arc::new(AtomicU64::new(0)),
        }
    }

    pub fn ground_size(&self) -> usize {
        self.func.ground_size()
    }

    /// One query.
    pub fn evaluate(&self, s: &ElementSet) -> Result<f64> {
        self.queries.fetch_add(1, Ordering::Relaxed);
        self.func.value(s)
    }

    /// One query per candidate.
    pub fn evaluate_extensions(&self, base: &ElementSet, candidates: &[usize]) -> Result<Vec<f64>> {
        self.queries.fetch_add(candidates.len() as u64, Ordering::Relaxed);
        self.func.extension_values(base, candidates)
    }

    /// `f(a + u) - f(a)`, two queries, no caching.
    pub fn marginal(&self, u: usize, a: &ElementSet) -> Result<f64> {
        if a.contains(u) {
            return Err(Error::precondition(format!(
                "marginal of {u} with respect to {a}, which contains it"
            )));
        }
        Ok(self.evaluate(&a.with(u))? - self.evaluate(a)?)
    }

    pub fn queries(&self) -> u64 {
        self.queries.load(Ordering::Relaxed)
    }

    pub fn solver_warnings(&self) -> u64 {
        self.func.solver_warnings()
    }
}

impl SetFunction for ValueOracle {
    fn ground_size(&self) -> usize {
        ValueOracle::ground_size(self)
    }

    fn value(&self, s: &ElementSet) -> Result<f64> {
        self.evaluate(s)
    }

    fn extension_values(&self, base: &ElementSet, candidates: &[usize]) -> Result<Vec<f64>> {
        self.evaluate_extensions(base, candidates)
    }

    fn solver_warnings(&self) -> u64 {
        ValueOracle::solver_warnings(self)
    }
}

struct Normalized {
    inner: ValueOracle,
    empty: OnceLock<f64>,
}

impl Normalized {
    fn offset(&self) -> Result<f64> {
        if let Some(&v) = self.empty.get() {
            return Ok(v);
        }
        let v = self.inner.evaluate(&ElementSet::new())?;
        Ok(*self.empty.get_or_init(|| v))
    }
}

impl SetFunction for Normalized {
    fn ground_size(&self) -> usize {
        self.inner.ground_size()
    }

    fn value(&self, s: &ElementSet) -> Result<f64> {
        let offset = self.offset()?;
        Ok(self.inner.evaluate(s)? - offset)
    }

    fn extension_values(&self, base: &ElementSet, candidates: &[usize]) -> Result<Vec<f64>> {
        let offset = self.offset()?;
        let mut vals = self.inner.evaluate_extensions(base, candidates)?;
        vals.iter_mut().for_each(|v| *v -= offset);
        Ok(vals)
    }

    fn solver_warnings(&self) -> u64 {
        self.inner.solver_warnings()
    }
}

/// `S -> f(S) - f(∅)`. The empty-set value is fetched once and cached.
pub fn normalize(f: &ValueOracle) -> ValueOracle {
    ValueOracle::new(Normalized {
        inner: f.clone(),
        empty: OnceLock::new(),
    })
}

/// `f(S \ N')` on the ground set extended by `extra` dummy elements.
pub(crate) struct PaddedFunction {
    inner: ValueOracle,
    extra: usize,
}

impl PaddedFunction {
    pub(crate) fn new(inner: ValueOracle, extra: usize) -> Self {
        PaddedFunction { inner, extra }
    }

    fn strip(&self, s: &ElementSet) -> ElementSet {
        let n = self.inner.ground_size();
        s.iter().filter(|&e| e < n).collect()
    }
}

impl SetFunction for PaddedFunction {
    fn ground_size(&self) -> usize {
        self.inner.ground_size() + self.extra
    }

    fn value(&self, s: &ElementSet) -> Result<f64> {
        s.check_range(self.ground_size())?;
        self.inner.evaluate(&self.strip(s))
    }

    fn solver_warnings(&self) -> u64 {
        self.inner.solver_warnings()
    }
}

/// `f(S) = Σ_{u∈S} w_u`.
#[derive(Debug, Clone)]
pub struct Modular {
    weights: Vec<f64>,
}

impl Modular {
    pub fn new(weights: Vec<f64>) -> Self {
        Modular { weights }
    }
}

impl SetFunction for Modular {
    fn ground_size(&self) -> usize {
        self.weights.len()
    }

    fn value(&self, s: &ElementSet) -> Result<f64> {
        s.check_range(self.weights.len())?;
        Ok(s.iter().map(|e| self.weights[e]).sum())
    }
}

/// Adapter for closures, mostly useful for tests and small fixtures.
pub struct FnSetFunction<F> {
    n: usize,
    f: F,
}

impl<F> FnSetFunction<F>
where
    F: Fn(&ElementSet) -> f64 + Send + Sync,
{
    pub fn new(n: usize, f: F) -> Self {
        FnSetFunction { n, f }
    }
}

impl<F> SetFunction for FnSetFunction<F>
where
    F: Fn(&ElementSet) -> f64 + Send + Sync,
{
    fn ground_size(&self) -> usize {
        self.n
    }

    fn value(&self, s: &ElementSet) -> Result<f64> {
        s.check_range(self.n)?;
        Ok((self.f)(s))
    }
}
