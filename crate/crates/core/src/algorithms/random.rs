use rand::RngCore;

use super::trace::{IterationRecord, RunTrace};
use crate::error::Result;
use crate::matroid::{pick_index, CountingMatroid, Matroid};
use crate::set::ElementSet;
use crate::setfn::ValueOracle;

/// The objective-blind baseline: grows a base by uniformly random feasible
/// additions, evaluating `f` after every step (`k + 1` value queries).
///
/// The draws match [`crate::matroid::random_base`] for the same generator state.
pub fn random_baseline<M: Matroid + ?Sized>(
    f: &ValueOracle,
    m: &M,
    rng: &mut dyn RngCore,
) -> Result<RunTrace> {
    let counted = CountingMatroid::new(m);
    let ground = m.ground_set();
    let q0 = f.queries();
    let mut solution = ElementSet::new();
    let mut trace = RunTrace::empty("random", f.evaluate(&solution)?);

    for i in 1.. {
        let mut feasible = Vec::new();
        for u in ground.difference(&solution) {
            if counted.is_independent(&solution.with(u))? {
                feasible.push(u);
            }
        }
        if feasible.is_empty() {
            break;
        }
        let chosen = feasible[pick_index(rng, feasible.len())];
        solution.insert(chosen);
        let value = f.evaluate(&solution)?;
        trace.push(IterationRecord {
            i,
            candidate_base: feasible.into_iter().collect(),
            chosen,
            solution: solution.clone(),
            value,
            value_queries_cum: f.queries() - q0,
            independence_queries_cum: counted.queries(),
        });
    }
    trace.value_queries = f.queries() - q0;
    trace.independence_queries = counted.queries();
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::{random_base, MatroidSpec};
    use crate::setfn::Modular;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn trace_shape_and_query_count() {
        let f = ValueOracle::new(Modular::new(vec![1.0; 6]));
        let m = MatroidSpec::uniform(6, 4);
        let t = random_baseline(&f, &m, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        assert_eq!(t.iterations.len(), 4);
        assert_eq!(t.value_queries, 5);
        t.check_feasible(&m).unwrap();
    }

    #[test]
    fn agrees_with_random_base() {
        let f = ValueOracle::new(Modular::new(vec![1.0; 8]));
        let m = MatroidSpec::graphic(
            5,
            vec![(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2), (0, 4), (1, 3)],
        )
        .unwrap();
        for seed in 0..20 {
            let t = random_baseline(&f, &m, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
            let b = random_base(&m, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
            assert_eq!(t.final_set, b);
        }
    }
}
