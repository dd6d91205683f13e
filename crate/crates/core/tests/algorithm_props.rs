mod common;

use common::{mean_and_sem, random_coverage, random_least_squares, rng, seeded_matroid};
use rand::Rng;
use wsub_core::algorithms::{
    brute_force_opt, random_baseline, residual_random_greedy, rrg_independence_queries, rrg_value_queries,
    rrg_with_analysis, standard_greedy, AlgorithmRegistry,
};
use wsub_core::matroid::MatroidSpec;
use wsub_core::setfn::Modular;
use wsub_core::{Matroid, ValueOracle};

#[test]
fn every_algorithm_returns_a_base_with_monotone_trajectory() {
    let registry = AlgorithmRegistry::builtin();
    for seed in 0..60u64 {
        let n = 4 + (seed as usize % 9);
        let m = seeded_matroid(n, seed);
        let f = if seed % 2 == 0 {
            random_coverage(m.universe(), 12, 0.3, seed)
        } else {
            random_least_squares(15, m.universe(), seed)
        };
        for name in registry.names() {
            let trace = registry.get(name).unwrap().run(&f, &m, &mut rng(seed)).unwrap();
            assert!(m.is_independent(&trace.final_set).unwrap());
            assert_eq!(trace.final_set.len(), m.rank(), "{name} seed {seed}");
            if name != "rrg-padded" {
                trace.check_feasible(&m).unwrap();
            }
            let values = trace.values();
            assert!(
                values.windows(2).all(|w| w[1] >= w[0] - 1e-9),
                "{name} seed {seed}: {values:?}"
            );
        }
    }
}

#[test]
fn query_counts_are_exact() {
    for seed in 0..100u64 {
        let mut r = rng(seed);
        let n = r.random_range(1..=200);
        let k = r.random_range(1..=30.min(n));
        let f = ValueOracle::new(Modular::new((0..n).map(|_| r.random::<f64>()).collect()));
        let m = MatroidSpec::uniform(n, k);
        let t = residual_random_greedy(&f, &m, &mut r).unwrap();
        let (n, k) = (n as u64, k as u64);
        assert_eq!(t.value_queries, rrg_value_queries(n, k));
        assert_eq!(t.independence_queries, rrg_independence_queries(n, k));
        assert_eq!(f.queries(), rrg_value_queries(n, k));
        assert!(t.value_queries <= 2 * n * k + 2);
        assert!(t.independence_queries <= n * k);
    }
}

#[test]
fn runs_are_deterministic_per_seed() {
    let f = random_least_squares(20, 12, 3);
    let m = seeded_matroid(12, 5);
    for seed in 0..10 {
        let a = residual_random_greedy(&f, &m, &mut rng(seed)).unwrap();
        let b = residual_random_greedy(&f, &m, &mut rng(seed)).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
        let a = random_baseline(&f, &m, &mut rng(seed)).unwrap();
        let b = random_baseline(&f, &m, &mut rng(seed)).unwrap();
        assert_eq!(a, b);
    }
}

/// Exact expectation for a modular objective: each round's `M_i` is the
/// heaviest `k - i + 1` remaining elements, and one is drawn uniformly.
fn exact_modular_expectation(weights: &[f64], remaining: Vec<usize>, rounds: usize) -> f64 {
    if rounds == 0 {
        return 0.0;
    }
    let mut order = remaining.clone();
    order.sort_by(|&a, &b| weights[b].total_cmp(&weights[a]).then(a.cmp(&b)));
    let top = &order[..rounds];
    top.iter()
        .map(|&u| {
            let rest: Vec<usize> = remaining.iter().copied().filter(|&v| v != u).collect();
            weights[u] + exact_modular_expectation(weights, rest, rounds - 1)
        })
        .sum::<f64>()
        / rounds as f64
}

#[test]
fn modular_expectation_matches_branching_recursion() {
    let weights = [4.0, 3.0, 2.0, 1.0];
    let exact = exact_modular_expectation(&weights, vec![0, 1, 2, 3], 2);
    assert_eq!(exact, 7.0);
    let f = ValueOracle::new(Modular::new(weights.to_vec()));
    let runs: Vec<f64> = (0..500)
        .map(|s| {
            residual_random_greedy(&f, &MatroidSpec::uniform(4, 2), &mut rng(s))
                .unwrap()
                .final_value
        })
        .collect();
    let (mean, _) = mean_and_sem(&runs);
    assert_eq!(mean, exact);
}

#[test]
fn coverage_mean_clears_quarter_of_opt() {
    let f = random_coverage(8, 14, 0.3, 17);
    let m = MatroidSpec::uniform(8, 3);
    let (_, opt) = brute_force_opt(&f, &m).unwrap();
    let runs: Vec<f64> = (0..500)
        .map(|s| residual_random_greedy(&f, &m, &mut rng(s)).unwrap().final_value)
        .collect();
    let (mean, sem) = mean_and_sem(&runs);
    assert!(mean >= 0.25 * opt - 2.0 * sem, "{mean} vs {opt}");
}

#[test]
fn greedy_beats_random_mean_on_submodular_fixtures() {
    for seed in 0..50u64 {
        let m = seeded_matroid(6 + (seed as usize % 5), seed);
        let f = random_coverage(m.universe(), 10, 0.3, seed + 500);
        let greedy = standard_greedy(&f, &m).unwrap().final_value;
        let runs: Vec<f64> = (0..100)
            .map(|s| random_baseline(&f, &m, &mut rng(s)).unwrap().final_value)
            .collect();
        let (mean, _) = mean_and_sem(&runs);
        assert!(greedy >= mean - 1e-9, "seed {seed}: {greedy} < {mean}");
        let (_, opt) = brute_force_opt(&f, &m).unwrap();
        assert!(greedy <= opt + 1e-9);
    }
}

#[test]
fn analysis_mode_keeps_solution_plus_opt_a_base() {
    for seed in 0..40u64 {
        let m = seeded_matroid(4 + (seed as usize % 7), seed);
        let f = random_coverage(m.universe(), 10, 0.3, seed);
        let (opt, _) = wsub_core::algorithms::brute_force_opt_base(&f, &m).unwrap();
        let (run, an) = rrg_with_analysis(&f, &m, &opt, &mut rng(seed)).unwrap();
        assert_eq!(an.opt_sets.len(), run.iterations.len() + 1);
        assert!(an.opt_sets.last().unwrap().is_empty());
        for (i, rec) in run.iterations.iter().enumerate() {
            let union = rec.solution.union(&an.opt_sets[i + 1]);
            assert!(rec.solution.is_disjoint(&an.opt_sets[i + 1]));
            assert!(
                wsub_core::matroid::is_base(&m, &union).unwrap(),
                "seed {seed} round {}",
                i + 1
            );
        }
    }
}
