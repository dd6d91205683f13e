//! Seeded synthetic instances: AR design matrices, sparse regressions, random
//! graphic/partition matroids, DPP feature vectors and one-hot logistic data.

use std::fs;
use std::path::Path;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, RngCore};
use rand_distr::{Binomial, Distribution, Exp1, Normal, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::{read_matrix_csv, read_vector_csv, write_json, write_matrix_csv, write_vector_csv};
use crate::matroid::{random_base, MatroidSpec, PartitionMatroid};
use crate::objectives::{least_squares_loglik, LogisticProblem, RegressionProblem};
use crate::set::ElementSet;

pub const AR_ALPHA: f64 = 0.5;
pub const AR_SIGMA2: f64 = 10.0;
pub const CAPACITY_PROB: f64 = 0.25;
/// Categories per one-hot encoded variable.
pub const ONE_HOT_ARITY: usize = 4;

/// `n × p` matrix whose rows are independent AR(1) sequences
/// `x_1 = ε_1`, `x_j = α x_{j-1} + ε_j`, `ε_j ~ N(0, σ²)`.
pub fn ar_matrix(n: usize, p: usize, alpha: f64, sigma2: f64, rng: &mut dyn RngCore) -> Result<DMatrix<f64>> {
    if alpha.is_nan() || alpha.abs() >= 1.0 {
        return Err(Error::invalid(format!(
            "AR coefficient must satisfy |alpha| < 1, got {alpha}"
        )));
    }
    if !(sigma2 >= 0.0 && sigma2.is_finite()) {
        return Err(Error::invalid(format!(
            "noise variance must be non-negative, got {sigma2}"
        )));
    }
    let noise = Normal::new(0.0, sigma2.sqrt()).map_err(|e| Error::invalid(e.to_string()))?;
    let mut x = DMatrix::zeros(n, p);
    for i in 0..n {
        let mut prev = 0.0;
        for j in 0..p {
            let v = alpha * prev + noise.sample(rng);
            x[(i, j)] = v;
            prev = v;
        }
    }
    Ok(x)
}

/// `num_edges` independent uniformly random edges between distinct vertices.
pub fn random_graphic_matroid(
    num_vertices: usize,
    num_edges: usize,
    rng: &mut dyn RngCore,
) -> Result<MatroidSpec> {
    if num_vertices < 2 {
        return Err(Error::invalid("a random graph needs at least two vertices"));
    }
    let edges = (0..num_edges)
        .map(|_| {
            let a = rng.random_range(0..num_vertices);
            let mut b = rng.random_range(0..num_vertices - 1);
            if b >= a {
                b += 1;
            }
            (a.min(b), a.max(b))
        })
        .collect();
    MatroidSpec::graphic(num_vertices, edges)
}

/// Uniform point of the `(len - 1)`-simplex via normalized exponentials.
fn simplex_point(len: usize, rng: &mut dyn RngCore) -> Vec<f64> {
    let draws: Vec<f64> = (0..len).map(|_| Exp1.sample(rng)).collect();
    let total: f64 = draws.iter().sum();
    draws.into_iter().map(|d| d / total).collect()
}

fn sample_categorical(probs: &[f64], rng: &mut dyn RngCore) -> usize {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for (i, &q) in probs.iter().enumerate() {
        acc += q;
        if u < acc {
            return i;
        }
    }
    probs.len() - 1
}

/// Blocks drawn i.i.d. from a uniformly random block distribution, capacities
/// `Binomial(|B_i|, 0.25)`.
pub fn random_partition_matroid(p: usize, num_blocks: usize, rng: &mut dyn RngCore) -> Result<MatroidSpec> {
    if num_blocks == 0 {
        return Err(Error::invalid("need at least one block"));
    }
    let probs = simplex_point(num_blocks, rng);
    let assignment: Vec<usize> = (0..p).map(|_| sample_categorical(&probs, rng)).collect();
    let mut sizes = vec![0u64; num_blocks];
    for &b in &assignment {
        sizes[b] += 1;
    }
    let capacities = sizes
        .iter()
        .map(|&s| {
            let d = Binomial::new(s, CAPACITY_PROB).map_err(|e| Error::Internal(e.to_string()))?;
            Ok(d.sample(rng) as usize)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MatroidSpec::Partition(PartitionMatroid::from_assignment(
        &assignment,
        capacities,
    )?))
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinRegInstance {
    pub problem: RegressionProblem,
    pub beta_true: DVector<f64>,
    pub matroid: MatroidSpec,
    pub seed: u64,
    /// Normalized log-likelihood of `supp(beta_true)`.
    pub ground_truth_value: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct InstanceMeta {
    seed: u64,
    n: usize,
    p: usize,
    ar_alpha: f64,
    ar_sigma2: f64,
    noise_scale: f64,
    support: ElementSet,
    ground_truth_value: f64,
}

impl LinRegInstance {
    pub fn support(&self) -> ElementSet {
        self.beta_true
            .iter()
            .enumerate()
            .filter(|(_, &b)| b != 0.0)
            .map(|(i, _)| i)
            .collect()
    }

    /// Writes `X.csv`, `y.csv`, `beta.csv`, `matroid.json` and `meta.json`.
    pub fn save(&self, dir: &Path, noise_scale: f64) -> Result<()> {
        fs::create_dir_all(dir)?;
        let x = self.problem.design();
        let header: Vec<String> = (0..x.ncols()).map(|j| format!("x{j}")).collect();
        write_matrix_csv(&dir.join("X.csv"), x, Some(&header))?;
        write_vector_csv(&dir.join("y.csv"), "y", self.problem.response())?;
        write_vector_csv(&dir.join("beta.csv"), "beta", &self.beta_true)?;
        fs::write(dir.join("matroid.json"), self.matroid.to_json()?)?;
        let meta = InstanceMeta {
            seed: self.seed,
            n: x.nrows(),
            p: x.ncols(),
            ar_alpha: AR_ALPHA,
            ar_sigma2: AR_SIGMA2,
            noise_scale,
            support: self.support(),
            ground_truth_value: self.ground_truth_value,
        };
        write_json(&dir.join("meta.json"), &meta)
    }

    pub fn load(dir: &Path) -> Result<Self> {
        let x = read_matrix_csv(&dir.join("X.csv"), true)?;
        let y = read_vector_csv(&dir.join("y.csv"))?;
        let beta_true = read_vector_csv(&dir.join("beta.csv"))?;
        let matroid = MatroidSpec::from_json(&fs::read_to_string(dir.join("matroid.json"))?)?;
        let meta: InstanceMeta = serde_json::from_str(&fs::read_to_string(dir.join("meta.json"))?)?;
        Ok(LinRegInstance {
            problem: RegressionProblem::new(x, y)?,
            beta_true,
            matroid,
            seed: meta.seed,
            ground_truth_value: meta.ground_truth_value,
        })
    }
}

/// Sparse regression instance: AR(1) design, `supp(β)` a random base of
/// `matroid` with ±1 entries, and `y = Xβ + ε` with standard normal noise.
pub fn make_linreg_instance(
    n: usize,
    p: usize,
    matroid: MatroidSpec,
    seed: u64,
    rng: &mut dyn RngCore,
) -> Result<LinRegInstance> {
    make_linreg_instance_with_noise(n, p, matroid, seed, 1.0, rng)
}

/// As [`make_linreg_instance`] with `ε` scaled by `noise_scale`.
pub fn make_linreg_instance_with_noise(
    n: usize,
    p: usize,
    matroid: MatroidSpec,
    seed: u64,
    noise_scale: f64,
    rng: &mut dyn RngCore,
) -> Result<LinRegInstance> {
    if matroid.num_elements() != p {
        return Err(Error::invalid(format!(
            "matroid has {} elements but the design has {p} columns",
            matroid.num_elements()
        )));
    }
    if n == 0 || p == 0 {
        return Err(Error::invalid("need at least one sample and one feature"));
    }
    let x = ar_matrix(n, p, AR_ALPHA, AR_SIGMA2, rng)?;
    let support = random_base(&matroid, rng)?;
    let mut beta = DVector::zeros(p);
    for &j in support.as_slice() {
        beta[j] = if rng.random::<bool>() { 1.0 } else { -1.0 };
    }
    let mut y = &x * &beta;
    for v in y.iter_mut() {
        let e: f64 = StandardNormal.sample(rng);
        *v += noise_scale * e;
    }
    let problem = RegressionProblem::new(x, y)?;
    let ground_truth_value = least_squares_loglik(problem.clone()).evaluate(&support)?;
    Ok(LinRegInstance {
        problem,
        beta_true: beta,
        matroid,
        seed,
        ground_truth_value,
    })
}

/// `count` vectors with i.i.d. standard normal coordinates.
pub fn random_feature_vectors(count: usize, dim: usize, rng: &mut dyn RngCore) -> Vec<Vec<f64>> {
    (0..count)
        .map(|_| (0..dim).map(|_| StandardNormal.sample(rng)).collect())
        .collect()
}

/// Synthetic one-hot classification data plus the matching constraint.
#[derive(Debug, Clone)]
pub struct OneHotInstance {
    pub problem: LogisticProblem,
    /// One block per categorical variable, capacity 1.
    pub matroid: MatroidSpec,
}

/// `samples` rows of `variables` categorical variables, each uniform over
/// four categories and one-hot encoded into four columns. Labels follow a
/// logistic model with standard normal weights on the dummies.
pub fn make_onehot_instance(
    samples: usize,
    variables: usize,
    ridge: f64,
    rng: &mut dyn RngCore,
) -> Result<OneHotInstance> {
    if samples == 0 || variables == 0 {
        return Err(Error::invalid("need at least one sample and one variable"));
    }
    let d = variables * ONE_HOT_ARITY;
    let weights: Vec<f64> = (0..d).map(|_| StandardNormal.sample(rng)).collect();
    let mut features = DMatrix::zeros(samples, d);
    let mut labels = DVector::zeros(samples);
    for r in 0..samples {
        let mut z = 0.0;
        for v in 0..variables {
            let c = v * ONE_HOT_ARITY + rng.random_range(0..ONE_HOT_ARITY);
            features[(r, c)] = 1.0;
            z += weights[c];
        }
        let prob = 1.0 / (1.0 + (-z).exp());
        labels[r] = if rng.random::<f64>() < prob { 1.0 } else { 0.0 };
    }
    let assignment: Vec<usize> = (0..d).map(|j| j / ONE_HOT_ARITY).collect();
    let matroid = MatroidSpec::Partition(PartitionMatroid::from_assignment(
        &assignment,
        vec![1; variables],
    )?);
    Ok(OneHotInstance {
        problem: LogisticProblem::new(features, labels, ridge)?,
        matroid,
    })
}
