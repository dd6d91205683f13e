//! Residual random greedy.
//!
//! Round `i` weights every element outside `S_{i-1}` by its marginal
//! `f(u | S_{i-1})`, takes a maximum-weight base `M_i` of `M / S_{i-1}`, and adds
//! a uniformly random member of `M_i`.
//!
//! With `n` ground elements and rank `k >= 1` a run makes exactly
//! `1 + Σ_{i=1..k} (n - i + 1)` value queries (one for `f(∅)`, then one per
//! remaining element per round; `f(S_i)` is read off the batch) and
//! `Σ_{i=1..k} (n - i + 1)` independence queries (one per element scanned by
//! the matroid greedy).

use rand::RngCore;

use super::trace::{IterationRecord, RunTrace};
use crate::error::Result;
use crate::matroid::{max_weight_base, pick_index, Contracted, CountingMatroid, Matroid};
use crate::set::ElementSet;
use crate::setfn::ValueOracle;

/// Exact value-query count of a run with `n` elements and rank `k >= 1`.
pub fn rrg_value_queries(n: u64, k: u64) -> u64 {
    1 + rrg_independence_queries(n, k)
}

/// Exact independence-query count of a run with `n` elements and rank `k`.
pub fn rrg_independence_queries(n: u64, k: u64) -> u64 {
    n * k - k * k.saturating_sub(1) / 2
}

/// Hook into each round, between computing `M_i` and drawing `u_i`.
pub(crate) trait RoundObserver {
    fn before_draw(&mut self, solution: &ElementSet, candidates: &ElementSet) -> Result<()>;
    fn after_draw(&mut self, chosen: usize) -> Result<()>;
}

pub(crate) struct NoObserver;

impl RoundObserver for NoObserver {
    fn before_draw(&mut self, _: &ElementSet, _: &ElementSet) -> Result<()> {
        Ok(())
    }
    fn after_draw(&mut self, _: usize) -> Result<()> {
        Ok(())
    }
}

pub(crate) fn run_rrg<M: Matroid + ?Sized>(
    name: &str,
    f: &ValueOracle,
    m: &M,
    rng: &mut dyn RngCore,
    observer: &mut dyn RoundObserver,
) -> Result<RunTrace> {
    let counted = CountingMatroid::new(m);
    let q0 = f.queries();
    let w0 = f.solver_warnings();
    let mut solution = ElementSet::new();
    let mut current = f.evaluate(&solution)?;
    let mut trace = RunTrace::empty(name, current);
    let mut weights = vec![0.0; m.universe()];

    for i in 1.. {
        let residual = Contracted::new(&counted, solution.clone());
        let remaining: Vec<usize> = residual.ground_set().iter().collect();
        if remaining.is_empty() {
            break;
        }
        let extended = f.evaluate_extensions(&solution, &remaining)?;
        for (&u, &v) in remaining.iter().zip(&extended) {
            weights[u] = v - current;
        }
        let candidates = max_weight_base(&residual, &weights)?;
        if candidates.is_empty() {
            break;
        }
        observer.before_draw(&solution, &candidates)?;
        let chosen = candidates.as_slice()[pick_index(rng, candidates.len())];
        observer.after_draw(chosen)?;

        solution.insert(chosen);
        let pos = remaining
            .binary_search(&chosen)
            .expect("candidate from ground set");
        current = extended[pos];
        let done = candidates.len() == 1;
        trace.push(IterationRecord {
            i,
            candidate_base: candidates,
            chosen,
            solution: solution.clone(),
            value: current,
            value_queries_cum: f.queries() - q0,
            independence_queries_cum: counted.queries(),
        });
        if done {
            break;
        }
    }

    trace.value_queries = f.queries() - q0;
    trace.independence_queries = counted.queries();
    let warnings = f.solver_warnings() - w0;
    if warnings > 0 {
        trace
            .solver_flags
            .push(format!("{warnings} objective evaluations did not converge"));
    }
    Ok(trace)
}

/// Runs the residual random greedy for `rank(m)` rounds.
pub fn residual_random_greedy<M: Matroid + ?Sized>(
    f: &ValueOracle,
    m: &M,
    rng: &mut dyn RngCore,
) -> Result<RunTrace> {
    run_rrg("rrg", f, m, rng, &mut NoObserver)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::MatroidSpec;
    use crate::setfn::Modular;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn free_matroid_takes_everything() {
        let f = ValueOracle::new(Modular::new(vec![1.0, 0.5, 2.0, 0.0]));
        for seed in 0..20 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let t = residual_random_greedy(&f, &MatroidSpec::uniform(4, 4), &mut rng).unwrap();
            assert_eq!(t.final_set, ElementSet::full(4));
        }
    }

    #[test]
    fn candidate_sizes_shrink_by_one() {
        let f = ValueOracle::new(Modular::new(vec![4.0, 3.0, 2.0, 1.0, 0.5]));
        let m = MatroidSpec::uniform(5, 3);
        let t = residual_random_greedy(&f, &m, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        let sizes: Vec<usize> = t.iterations.iter().map(|r| r.candidate_base.len()).collect();
        assert_eq!(sizes, vec![3, 2, 1]);
        t.check_feasible(&m).unwrap();
        assert_eq!(t.value_queries, rrg_value_queries(5, 3));
        assert_eq!(t.independence_queries, rrg_independence_queries(5, 3));
    }

    #[test]
    fn modular_objective_reaches_the_top_weight_base() {
        let f = ValueOracle::new(Modular::new(vec![4.0, 3.0, 2.0, 1.0]));
        for seed in 0..50 {
            let t = residual_random_greedy(
                &f,
                &MatroidSpec::uniform(4, 2),
                &mut ChaCha8Rng::seed_from_u64(seed),
            )
            .unwrap();
            assert_eq!(t.final_value, 7.0);
        }
    }

    #[test]
    fn rank_zero_matroid_returns_empty_set() {
        let f = ValueOracle::new(Modular::new(vec![1.0, 1.0]));
        let m = MatroidSpec::uniform(2, 0);
        let t = residual_random_greedy(&f, &m, &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
        assert!(t.final_set.is_empty());
        assert!(t.iterations.is_empty());
    }
}
