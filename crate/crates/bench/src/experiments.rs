//! Instance builders, one per experiment, selected by name.

use std::collections::BTreeMap;
use std::sync::Arc;

use anyhow::{anyhow, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wsub_core::datagen::{
    make_linreg_instance, make_onehot_instance, random_feature_vectors, random_graphic_matroid,
    random_partition_matroid,
};
use wsub_core::matroid::MatroidSpec;
use wsub_core::objectives::{
    dpp_determinant, gaussian_gram, least_squares_loglik, logistic_loglik, DEFAULT_RIDGE,
};
use wsub_core::ValueOracle;

use crate::config::{ExperimentConfig, ExperimentKind};

/// One trial's objective and constraint.
pub struct Instance {
    pub objective: ValueOracle,
    pub matroid: MatroidSpec,
    /// `f(supp β)` for the planted regression vector.
    pub ground_truth: Option<(usize, f64)>,
}

pub trait Experiment: Send + Sync {
    fn kind(&self) -> ExperimentKind;

    fn build(&self, config: &ExperimentConfig, seed: u64) -> Result<Instance>;
}

struct LinRegGraphic;

impl Experiment for LinRegGraphic {
    fn kind(&self) -> ExperimentKind {
        ExperimentKind::LinregGraphic
    }

    fn build(&self, c: &ExperimentConfig, seed: u64) -> Result<Instance> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let matroid = random_graphic_matroid(c.n, c.p, &mut rng)?;
        linreg(c, matroid, seed, &mut rng)
    }
}

struct LinRegPartition;

impl Experiment for LinRegPartition {
    fn kind(&self) -> ExperimentKind {
        ExperimentKind::LinregPartition
    }

    fn build(&self, c: &ExperimentConfig, seed: u64) -> Result<Instance> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let matroid = random_partition_matroid(c.p, c.num_blocks, &mut rng)?;
        linreg(c, matroid, seed, &mut rng)
    }
}

fn linreg(c: &ExperimentConfig, matroid: MatroidSpec, seed: u64, rng: &mut ChaCha8Rng) -> Result<Instance> {
    let inst = make_linreg_instance(c.n, c.p, matroid, seed, rng)?;
    let support = inst.support().len();
    Ok(Instance {
        objective: least_squares_loglik(inst.problem),
        matroid: inst.matroid,
        ground_truth: Some((support, inst.ground_truth_value)),
    })
}

struct DppInterval;

impl Experiment for DppInterval {
    fn kind(&self) -> ExperimentKind {
        ExperimentKind::DppInterval
    }

    fn build(&self, c: &ExperimentConfig, seed: u64) -> Result<Instance> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let vectors = random_feature_vectors(c.p, c.n, &mut rng);
        let gram = gaussian_gram(&vectors, c.bandwidth)?;
        Ok(Instance {
            objective: dpp_determinant(gram),
            matroid: MatroidSpec::intervals(c.p, c.interval, 1)?,
            ground_truth: None,
        })
    }
}

struct LogisticOneHot;

impl Experiment for LogisticOneHot {
    fn kind(&self) -> ExperimentKind {
        ExperimentKind::LogisticOnehot
    }

    fn build(&self, c: &ExperimentConfig, seed: u64) -> Result<Instance> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let variables = c.p / wsub_core::datagen::ONE_HOT_ARITY;
        let inst = make_onehot_instance(c.n, variables, DEFAULT_RIDGE, &mut rng)?;
        Ok(Instance {
            objective: logistic_loglik(inst.problem),
            matroid: inst.matroid,
            ground_truth: None,
        })
    }
}

/// Experiments by kind.
#[derive(Clone, Default)]
pub struct ExperimentRegistry {
    entries: BTreeMap<ExperimentKind, Arc<dyn Experiment>>,
}

impl ExperimentRegistry {
    pub fn builtin() -> Self {
        let mut r = Self::default();
        r.register(Arc::new(LinRegGraphic));
        r.register(Arc::new(LinRegPartition));
        r.register(Arc::new(DppInterval));
        r.register(Arc::new(LogisticOneHot));
        r
    }

    pub fn register(&mut self, e: Arc<dyn Experiment>) {
        self.entries.insert(e.kind(), e);
    }

    pub fn get(&self, kind: ExperimentKind) -> Result<Arc<dyn Experiment>> {
        self.entries
            .get(&kind)
            .cloned()
            .ok_or_else(|| anyhow!("experiment '{kind}' does not produce trajectories"))
    }
}
