#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wsub_core::datagen::{random_graphic_matroid, random_partition_matroid};
use wsub_core::matroid::{random_base, MatroidSpec};
use wsub_core::{ElementSet, Matroid};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// One matroid of each variant on `n` elements, chosen by `seed % 4`.
pub fn seeded_matroid(n: usize, seed: u64) -> MatroidSpec {
    let mut r = rng(seed);
    match seed % 4 {
        0 => MatroidSpec::uniform(n, r.random_range(0..=n)),
        1 => random_partition_matroid(n, r.random_range(1..=4), &mut r).unwrap(),
        2 => random_graphic_matroid(r.random_range(2..=6), n, &mut r).unwrap(),
        _ => {
            let base = match seed % 3 {
                0 => random_graphic_matroid(r.random_range(3..=7), n, &mut r).unwrap(),
                1 => random_partition_matroid(n, 3, &mut r).unwrap(),
                _ => MatroidSpec::uniform(n, n / 2),
            };
            let b = random_base(&base, &mut r).unwrap();
            let keep = b.iter().filter(|_| r.random::<bool>()).collect::<ElementSet>();
            base.contract(&keep).unwrap()
        }
    }
}

/// Every subset of `0..n` as a sorted set, in mask order.
pub fn all_subsets(n: usize) -> Vec<ElementSet> {
    (0u64..1 << n).map(ElementSet::from_mask).collect()
}

/// Independent sets by exhaustive unpruned enumeration.
pub fn independent_by_enumeration<M: Matroid + ?Sized>(m: &M) -> Vec<ElementSet> {
    let ground = m.ground_set();
    all_subsets(m.universe())
        .into_iter()
        .filter(|s| s.is_subset(&ground) && m.is_independent(s).unwrap())
        .collect()
}

pub fn mean_and_sem(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

pub fn mask(s: &ElementSet) -> u64 {
    s.to_mask().expect("small test sets fit in a mask")
}

/// Weighted coverage on `n` sets over a universe of `universe` items, each
/// item in each set with probability `density`.
pub fn random_coverage(n: usize, universe: usize, density: f64, seed: u64) -> wsub_core::ValueOracle {
    let mut r = rng(seed);
    let sets = (0..n)
        .map(|_| (0..universe).filter(|_| r.random::<f64>() < density).collect())
        .collect();
    let weights = (0..universe).map(|_| r.random_range(0.1..2.0)).collect();
    wsub_core::objectives::coverage_function(universe, sets, weights).unwrap()
}

/// Least-squares objective on a random `rows × n` Gaussian design.
pub fn random_least_squares(rows: usize, n: usize, seed: u64) -> wsub_core::ValueOracle {
    use rand_distr::{Distribution, StandardNormal};
    let mut r = rng(seed);
    let x = nalgebra::DMatrix::from_fn(rows, n, |_, _| StandardNormal.sample(&mut r));
    let y = nalgebra::DVector::from_fn(rows, |_, _| StandardNormal.sample(&mut r));
    wsub_core::objectives::least_squares_loglik(wsub_core::objectives::RegressionProblem::new(x, y).unwrap())
}
