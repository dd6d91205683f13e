use crate::error::{Error, Result};
use crate::matroid::{is_base, Matroid};
use crate::set::ElementSet;
use crate::setfn::ValueOracle;

const MAX_GROUND: usize = 20;

/// Every independent set, by depth-first extension in ascending id order.
/// Dependent sets are never extended.
pub fn independent_sets<M: Matroid + ?Sized>(m: &M) -> Result<Vec<ElementSet>> {
    if m.universe() > MAX_GROUND {
        return Err(Error::TooLarge(format!(
            "enumeration over {} elements exceeds {MAX_GROUND}",
            m.universe()
        )));
    }
    let ground: Vec<usize> = m.ground_set().iter().collect();
    let mut out = Vec::new();
    let mut stack = vec![(ElementSet::new(), 0usize)];
    while let Some((s, from)) = stack.pop() {
        for (j, &e) in ground.iter().enumerate().skip(from).rev() {
            let t = s.with(e);
            if m.is_independent(&t)? {
                stack.push((t, j + 1));
            }
        }
        out.push(s);
    }
    Ok(out)
}

/// A maximizer of `f` over all independent sets; ties go to the set found first.
pub fn brute_force_opt<M: Matroid + ?Sized>(f: &ValueOracle, m: &M) -> Result<(ElementSet, f64)> {
    best_of(f, independent_sets(m)?)
}

/// A maximizer of `f` over the bases only. For monotone `f` this attains the
/// same value as [`brute_force_opt`].
pub fn brute_force_opt_base<M: Matroid + ?Sized>(f: &ValueOracle, m: &M) -> Result<(ElementSet, f64)> {
    let mut bases = Vec::new();
    for s in independent_sets(m)? {
        if is_base(m, &s)? {
            bases.push(s);
        }
    }
    best_of(f, bases)
}

fn best_of(f: &ValueOracle, sets: Vec<ElementSet>) -> Result<(ElementSet, f64)> {
    let mut best: Option<(ElementSet, f64)> = None;
    for s in sets {
        let v = f.evaluate(&s)?;
        if best.as_ref().is_none_or(|(_, b)| v > *b) {
            best = Some((s, v));
        }
    }
    best.ok_or_else(|| Error::Internal("matroid has no independent sets".into()))
}
