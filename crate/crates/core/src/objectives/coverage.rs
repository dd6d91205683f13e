use crate::error::{Error, Result};
use crate::set::ElementSet;
use crate::setfn::{SetFunction, ValueOracle};

/// Weighted coverage: `f(S) = w(∪_{e∈S} sets[e])`. Monotone and submodular.
#[derive(Debug, Clone)]
pub struct Coverage {
    sets: Vec<ElementSet>,
    weights: Vec<f64>,
}

impl Coverage {
    pub fn new(universe_size: usize, sets: Vec<ElementSet>, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != universe_size {
            return Err(Error::invalid(format!(
                "{} weights for a universe of {universe_size}",
                weights.len()
            )));
        }
        for s in &sets {
            s.check_range(universe_size)?;
        }
        Ok(Coverage { sets, weights })
    }
}

impl SetFunction for Coverage {
    fn ground_size(&self) -> usize {
        self.sets.len()
    }

    fn value(&self, s: &ElementSet) -> Result<f64> {
        s.check_range(self.sets.len())?;
        let mut covered = vec![false; self.weights.len()];
        for e in s {
            for x in &self.sets[e] {
                covered[x] = true;
            }
        }
        Ok(covered
            .iter()
            .zip(&self.weights)
            .filter(|(c, _)| **c)
            .map(|(_, w)| w)
            .sum())
    }
}

pub fn coverage_function(
    universe_size: usize,
    sets: Vec<ElementSet>,
    weights: Vec<f64>,
) -> Result<ValueOracle> {
    Coverage::new(universe_size, sets, weights).map(ValueOracle::new)
}
