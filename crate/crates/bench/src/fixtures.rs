//! Small instances with brute-forced optima for checking the approximation
//! guarantee by Monte Carlo.

use std::fmt;

use anyhow::Result;
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;
use wsub_core::algorithms::{brute_force_opt, residual_random_greedy, standard_greedy};
use wsub_core::datagen::{random_graphic_matroid, random_partition_matroid};
use wsub_core::matroid::MatroidSpec;
use wsub_core::objectives::{coverage_function, least_squares_loglik, RegressionProblem};
use wsub_core::setfn::{estimate_gamma_restricted, GammaEstimate, Modular};
use wsub_core::{ElementSet, ValueOracle};

use crate::config::trial_seed;
use crate::results::mean_std;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FixtureFamily {
    Coverage,
    Modular,
    LeastSquares,
}

pub struct Fixture {
    pub name: String,
    pub family: FixtureFamily,
    pub objective: ValueOracle,
    pub matroid: MatroidSpec,
}

fn coverage(n: usize, universe: usize, seed: u64) -> ValueOracle {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    let sets = (0..n)
        .map(|_| (0..universe).filter(|_| r.random::<f64>() < 0.3).collect())
        .collect();
    let weights = (0..universe).map(|_| r.random_range(0.5..2.0)).collect();
    coverage_function(universe, sets, weights).expect("valid coverage fixture")
}

fn modular(n: usize, seed: u64) -> ValueOracle {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    ValueOracle::new(Modular::new((0..n).map(|_| r.random_range(0.0..10.0)).collect()))
}

fn least_squares(rows: usize, n: usize, seed: u64) -> ValueOracle {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    let x = DMatrix::from_fn(rows, n, |_, j| {
        let z: f64 = StandardNormal.sample(&mut r);
        z + if j % 3 == 0 {
            0.0
        } else {
            0.6 * j as f64 / n as f64
        }
    });
    let y = DVector::from_fn(rows, |_, _| StandardNormal.sample(&mut r));
    least_squares_loglik(RegressionProblem::new(x, y).expect("valid regression fixture"))
}

fn partition(n: usize, blocks: usize, cap: usize) -> MatroidSpec {
    let assignment: Vec<usize> = (0..n).map(|e| e % blocks).collect();
    MatroidSpec::Partition(
        wsub_core::matroid::PartitionMatroid::from_assignment(&assignment, vec![cap; blocks])
            .expect("valid partition fixture"),
    )
}

fn graphic_with_rank(n: usize, rank: usize, seed: u64) -> MatroidSpec {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let m = random_graphic_matroid(rank + 1, n, &mut r).expect("two or more vertices");
        if m.rank() == rank {
            return m;
        }
    }
}

fn partition_with_rank(n: usize, lo: usize, hi: usize, seed: u64) -> MatroidSpec {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let m = random_partition_matroid(n, 3, &mut r).expect("at least one block");
        if (lo..=hi).contains(&m.rank()) {
            return m;
        }
    }
}

/// Coverage, modular and least-squares objectives on uniform, partition and
/// graphic matroids with `n <= 12` and rank 2 to 4.
pub fn standard_fixtures() -> Vec<Fixture> {
    use FixtureFamily::*;
    let mut out = Vec::new();
    let mut add = |name: &str, family, objective, matroid| {
        out.push(Fixture {
            name: name.to_string(),
            family,
            objective,
            matroid,
        })
    };
    add(
        "coverage-uniform-8-3",
        Coverage,
        coverage(8, 12, 1),
        MatroidSpec::uniform(8, 3),
    );
    add(
        "coverage-partition-10",
        Coverage,
        coverage(10, 14, 2),
        partition(10, 2, 2),
    );
    add(
        "coverage-graphic-12",
        Coverage,
        coverage(12, 16, 3),
        graphic_with_rank(12, 4, 3),
    );
    add(
        "coverage-uniform-12-4",
        Coverage,
        coverage(12, 10, 4),
        MatroidSpec::uniform(12, 4),
    );
    add(
        "modular-uniform-9-3",
        Modular,
        modular(9, 5),
        MatroidSpec::uniform(9, 3),
    );
    add(
        "modular-partition-12",
        Modular,
        modular(12, 6),
        partition(12, 4, 1),
    );
    add(
        "modular-graphic-10",
        Modular,
        modular(10, 7),
        graphic_with_rank(10, 3, 7),
    );
    add(
        "least-squares-uniform-8-2",
        LeastSquares,
        least_squares(10, 8, 8),
        MatroidSpec::uniform(8, 2),
    );
    add(
        "least-squares-uniform-10-4",
        LeastSquares,
        least_squares(12, 10, 9),
        MatroidSpec::uniform(10, 4),
    );
    add(
        "least-squares-partition-12",
        LeastSquares,
        least_squares(14, 12, 10),
        partition_with_rank(12, 2, 4, 10),
    );
    add(
        "least-squares-graphic-11",
        LeastSquares,
        least_squares(12, 11, 11),
        graphic_with_rank(11, 4, 11),
    );
    add(
        "least-squares-partition-9",
        LeastSquares,
        least_squares(9, 9, 12),
        partition(9, 3, 1),
    );
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct FixtureResult {
    pub name: String,
    pub family: FixtureFamily,
    pub n: usize,
    pub rank: usize,
    pub opt: f64,
    pub opt_set: ElementSet,
    pub gamma: GammaEstimate,
    /// `(1 + 1/γ)^{-2}`.
    pub ratio_bound: f64,
    pub seeds: usize,
    pub mean: f64,
    pub std_error: f64,
    pub greedy: f64,
    pub passed: bool,
}

impl FixtureResult {
    pub fn mean_ratio(&self) -> f64 {
        if self.opt > 0.0 {
            self.mean / self.opt
        } else {
            1.0
        }
    }
}

impl fmt::Display for FixtureResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {:<28} n={:<2} k={} opt={:.6} gamma={:.6} bound={:.4} mean_ratio={:.4} sem={:.2e} greedy={:.6} pairs_checked={} witness=({}, {})",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.n,
            self.rank,
            self.opt,
            self.gamma.gamma,
            self.ratio_bound,
            self.mean_ratio(),
            self.std_error,
            self.greedy,
            self.gamma.pairs_checked,
            self.gamma.witness_a,
            self.gamma.witness_b,
        )
    }
}

/// Brute-force OPT, restricted γ and `seeds` RRG runs. Passes when the mean
/// is at least `(1 + 1/γ)^{-2} OPT` minus three standard errors, and for
/// modular objectives greedy also hits OPT exactly.
pub fn verify_fixture(fixture: &Fixture, seeds: usize, master_seed: u64) -> Result<FixtureResult> {
    let f = &fixture.objective;
    let m = &fixture.matroid;
    let (opt_set, opt) = brute_force_opt(f, m)?;
    let gamma = estimate_gamma_restricted(f, m, m.rank())?;
    let ratio_bound = if gamma.gamma > 0.0 {
        (1.0 + 1.0 / gamma.gamma).powi(-2)
    } else {
        0.0
    };
    let values = (0..seeds)
        .map(|s| {
            let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(master_seed, s as u64));
            Ok(residual_random_greedy(f, m, &mut rng)?.final_value)
        })
        .collect::<Result<Vec<f64>>>()?;
    let (mean, std) = mean_std(&values);
    let std_error = std / (seeds as f64).sqrt();
    let greedy = standard_greedy(f, m)?.final_value;
    let mut passed = mean >= ratio_bound * opt - 3.0 * std_error;
    if fixture.family == FixtureFamily::Modular {
        passed &= (greedy - opt).abs() <= 1e-9 * opt.abs().max(1.0);
    }
    Ok(FixtureResult {
        name: fixture.name.clone(),
        family: fixture.family,
        n: m.num_elements(),
        rank: m.rank(),
        opt,
        opt_set,
        gamma,
        ratio_bound,
        seeds,
        mean,
        std_error,
        greedy,
        passed,
    })
}

pub struct FixtureReport {
    pub results: Vec<FixtureResult>,
}

impl FixtureReport {
    pub fn all_passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }
}

impl fmt::Display for FixtureReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.results {
            writeln!(f, "{r}")?;
        }
        let passed = self.results.iter().filter(|r| r.passed).count();
        write!(f, "{passed}/{} fixtures passed", self.results.len())
    }
}

pub fn verify_fixtures(seeds: usize, master_seed: u64) -> Result<FixtureReport> {
    let results = standard_fixtures()
        .iter()
        .map(|fx| verify_fixture(fx, seeds, master_seed))
        .collect::<Result<_>>()?;
    Ok(FixtureReport { results })
}
