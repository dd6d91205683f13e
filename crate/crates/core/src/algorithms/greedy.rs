use super::trace::{IterationRecord, RunTrace};
use crate::error::Result;
use crate::matroid::{CountingMatroid, Matroid};
use crate::set::ElementSet;
use crate::setfn::ValueOracle;

/// Repeatedly adds the feasible element with the largest marginal (ties to
/// the smallest id) until the solution is a base. Deterministic.
pub fn standard_greedy<M: Matroid + ?Sized>(f: &ValueOracle, m: &M) -> Result<RunTrace> {
    let counted = CountingMatroid::new(m);
    let ground = m.ground_set();
    let q0 = f.queries();
    let w0 = f.solver_warnings();
    let mut solution = ElementSet::new();
    let mut current = f.evaluate(&solution)?;
    let mut trace = RunTrace::empty("greedy", current);

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
        let values = f.evaluate_extensions(&solution, &feasible)?;
        let mut best = 0;
        for j in 1..feasible.len() {
            if values[j] > values[best] {
                best = j;
            }
        }
        let chosen = feasible[best];
        solution.insert(chosen);
        current = values[best];
        trace.push(IterationRecord {
            i,
            candidate_base: feasible.into_iter().collect(),
            chosen,
            solution: solution.clone(),
            value: current,
            value_queries_cum: f.queries() - q0,
            independence_queries_cum: counted.queries(),
        });
    }

    trace.value_queries = f.queries() - q0;
    trace.independence_queries = counted.queries();
    let warnings = f.solver_warnings() - w0;
    if warnings > 0 {
        trace
            .solver_flags
            .push(format!("{warnings} objective evaluations did not converge"));
    }
    debug_assert_eq!(trace.final_value, current);
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::MatroidSpec;
    use crate::objectives::coverage_function;
    use crate::setfn::Modular;

    #[test]
    fn modular_picks_top_k() {
        let f = ValueOracle::new(Modular::new(vec![1.0, 5.0, 3.0, 4.0, 2.0]));
        let t = standard_greedy(&f, &MatroidSpec::uniform(5, 3)).unwrap();
        assert_eq!(t.final_set, ElementSet::from([1, 2, 3]));
        assert_eq!(t.final_value, 12.0);
        assert_eq!(t.values(), vec![0.0, 5.0, 9.0, 12.0]);
    }

    #[test]
    fn coverage_triangle() {
        let f = coverage_function(
            3,
            vec![
                ElementSet::from([0, 1]),
                ElementSet::from([1, 2]),
                ElementSet::from([2]),
            ],
            vec![1.0; 3],
        )
        .unwrap();
        let t = standard_greedy(&f, &MatroidSpec::uniform(3, 2)).unwrap();
        assert_eq!(t.iterations[0].chosen, 0);
        assert_eq!(t.iterations[1].chosen, 1);
        assert_eq!(t.final_value, 3.0);
    }

    #[test]
    fn respects_partition_capacities() {
        let f = ValueOracle::new(Modular::new(vec![5.0, 4.0, 1.0, 0.5]));
        let m = MatroidSpec::partition(
            vec![ElementSet::from([0, 1]), ElementSet::from([2, 3])],
            vec![1, 1],
        )
        .unwrap();
        let t = standard_greedy(&f, &m).unwrap();
        assert_eq!(t.final_set, ElementSet::from([0, 2]));
        t.check_feasible(&m).unwrap();
    }
}
