//! Brute-force submodularity-ratio estimation.
//!
//! The ratio is the largest `γ` with `Σ_{u∈B} f(u|A) >= γ · f(B|A)` over a
//! family of pairs `(A, B)`. The restricted family only asks for pairs whose
//! union is independent in a matroid; the unrestricted family takes all pairs.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::ValueOracle;
use crate::error::{Error, Result};
use crate::matroid::Matroid;
use crate::set::ElementSet;

/// Pairs with `f(B|A)` at or below this are skipped.
pub const POSITIVE_EPS: f64 = 1e-12;

pub const DEFAULT_PAIR_CAP: u64 = 20_000_000;

const MAX_GROUND: usize = 20;

#[derive(Debug, Clone, Copy)]
pub struct GammaOptions {
    /// Only pairs with `|A ∪ B| <= max_union_size` are considered.
    pub max_union_size: usize,
    /// Refuse instances with more qualifying pairs than this.
    pub max_pairs: u64,
}

impl GammaOptions {
    pub fn new(max_union_size: usize) -> Self {
        GammaOptions {
            max_union_size,
            max_pairs: DEFAULT_PAIR_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GammaEstimate {
    pub gamma: f64,
    /// Minimizing pair; empty sets if no pair had a positive denominator.
    pub witness_a: ElementSet,
    pub witness_b: ElementSet,
    /// Pairs whose ratio was evaluated (positive denominator).
    pub pairs_checked: u64,
}

pub fn estimate_gamma_restricted<M: Matroid + ?Sized>(
    f: &ValueOracle,
    m: &M,
    max_union_size: usize,
) -> Result<GammaEstimate> {
    estimate_gamma(f, Some(m), GammaOptions::new(max_union_size))
}

pub fn estimate_gamma_unrestricted(f: &ValueOracle, max_union_size: usize) -> Result<GammaEstimate> {
    estimate_gamma::<crate::matroid::MatroidSpec>(f, None, GammaOptions::new(max_union_size))
}

/// Exhaustive minimum of `Σ_{u∈B} f(u|A) / f(B|A)`, clamped to at most 1.
///
/// With a matroid, only unions independent in it are enumerated. Terms with
/// `u ∈ A` contribute `f(u|A) = 0`.
pub fn estimate_gamma<M: Matroid + ?Sized>(
    f: &ValueOracle,
    m: Option<&M>,
    opts: GammaOptions,
) -> Result<GammaEstimate> {
    let n = f.ground_size();
    if n > MAX_GROUND {
        return Err(Error::TooLarge(format!(
            "ratio estimation enumerates subsets; ground set of {n} exceeds {MAX_GROUND}"
        )));
    }
    if let Some(m) = m {
        if m.universe() != n {
            return Err(Error::invalid(format!(
                "matroid has {} elements, function has {n}",
                m.universe()
            )));
        }
    }

    let unions = enumerate_unions(n, m, opts.max_union_size)?;
    let total: u64 = unions.iter().map(|u| 3u64.pow(u.count_ones())).sum();
    if total > opts.max_pairs {
        return Err(Error::TooLarge(format!(
            "{total} candidate pairs exceed the cap of {}",
            opts.max_pairs
        )));
    }

    let mut cache: HashMap<u32, f64> = HashMap::new();
    let mut value = |mask: u32| -> Result<f64> {
        if let Some(&v) = cache.get(&mask) {
            return Ok(v);
        }
        let v = f.evaluate(&ElementSet::from_mask(mask as u64))?;
        cache.insert(mask, v);
        Ok(v)
    };

    let mut best: Option<(f64, u32, u32)> = None;
    let mut checked = 0u64;
    for &union in &unions {
        let f_union = value(union)?;
        // A ⊆ U, B = (U \ A) ∪ C with C ⊆ A.
        let mut a = union;
        loop {
            let f_a = value(a)?;
            let den = f_union - f_a;
            let rest = union & !a;
            if den > POSITIVE_EPS {
                let mut rest_sum = 0.0;
                for u in bits(rest) {
                    rest_sum += value(a | 1 << u)? - f_a;
                }
                // Elements of C lie in A and contribute nothing.
                let ratio = rest_sum / den;
                let mut c = a;
                loop {
                    checked += 1;
                    if best.is_none_or(|(r, _, _)| ratio < r) {
                        best = Some((ratio, a, rest | c));
                    }
                    if c == 0 {
                        break;
                    }
                    c = (c - 1) & a;
                }
            }
            if a == 0 {
                break;
            }
            a = (a - 1) & union;
        }
    }

    Ok(match best {
        Some((ratio, a, b)) => GammaEstimate {
            gamma: ratio.min(1.0),
            witness_a: ElementSet::from_mask(a as u64),
            witness_b: ElementSet::from_mask(b as u64),
            pairs_checked: checked,
        },
        None => GammaEstimate {
            gamma: 1.0,
            witness_a: ElementSet::new(),
            witness_b: ElementSet::new(),
            pairs_checked: 0,
        },
    })
}

fn bits(mask: u32) -> impl Iterator<Item = u32> {
    (0..32).filter(move |i| mask >> i & 1 == 1)
}

/// Candidate unions `A ∪ B`: independent sets (or all sets) of size at most `cap`.
fn enumerate_unions<M: Matroid + ?Sized>(n: usize, m: Option<&M>, cap: usize) -> Result<Vec<u32>> {
    let mut out = vec![0u32];
    let mut frontier = vec![0u32];
    for _ in 0..cap.min(n) {
        let mut next = Vec::new();
        for &s in &frontier {
            let top = if s == 0 {
                0
            } else {
                32 - s.leading_zeros() as usize
            };
            for e in top..n {
                let t = s | 1 << e;
                let ok = match m {
                    Some(m) => m.is_independent(&ElementSet::from_mask(t as u64))?,
                    None => true,
                };
                if ok {
                    next.push(t);
                }
            }
        }
        out.extend_from_slice(&next);
        frontier = next;
    }
    Ok(out)
}
