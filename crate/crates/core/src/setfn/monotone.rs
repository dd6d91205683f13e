use serde::Serialize;

use super::{ValueOracle, VALUE_TOL};
use crate::error::{Error, Result};
use crate::set::ElementSet;

const MAX_GROUND: usize = 15;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonotoneReport {
    pub monotone: bool,
    /// First `(A, B)` with `A ⊆ B` and `f(A) > f(B) + 1e-9`.
    pub counterexample: Option<(ElementSet, ElementSet)>,
}

/// Exhaustive check of `f(A) <= f(B) + 1e-9` for every `A ⊆ B ⊆ 0..n`.
///
/// Pairs are visited with `B` in increasing bitmask order and, within each
/// `B`, `A` in increasing bitmask order.
pub fn check_monotone(f: &ValueOracle, n: usize) -> Result<MonotoneReport> {
    if n > MAX_GROUND {
        return Err(Error::TooLarge(format!(
            "monotonicity check over {n} elements exceeds {MAX_GROUND}"
        )));
    }
    let values = (0u64..1 << n)
        .map(|m| f.evaluate(&ElementSet::from_mask(m)))
        .collect::<Result<Vec<f64>>>()?;
    for b in 0u64..1 << n {
        // Ascending submasks of b.
        let mut a = 0u64;
        loop {
            if values[a as usize] > values[b as usize] + VALUE_TOL {
                return Ok(MonotoneReport {
                    monotone: false,
                    counterexample: Some((ElementSet::from_mask(a), ElementSet::from_mask(b))),
                });
            }
            if a == b {
                break;
            }
            a = (a.wrapping_sub(b)) & b;
        }
    }
    Ok(MonotoneReport {
        monotone: true,
        counterexample: None,
    })
}
