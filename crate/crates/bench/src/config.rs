//! Experiment configuration: JSON file values overridden by CLI flags.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

pub const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 output function.
pub fn splitmix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of trial `t`, independent of the order trials run in.
pub fn trial_seed(master: u64, t: u64) -> u64 {
    splitmix64(master.wrapping_add(t.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)))
}

/// Seed of the `stream`-th generator derived from `seed`.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    splitmix64(seed ^ splitmix64(stream.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    LinregGraphic,
    LinregPartition,
    DppInterval,
    LogisticOnehot,
    FixtureVerify,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 5] = [
        ExperimentKind::LinregGraphic,
        ExperimentKind::LinregPartition,
        ExperimentKind::DppInterval,
        ExperimentKind::LogisticOnehot,
        ExperimentKind::FixtureVerify,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::LinregGraphic => "linreg-graphic",
            ExperimentKind::LinregPartition => "linreg-partition",
            ExperimentKind::DppInterval => "dpp-interval",
            ExperimentKind::LogisticOnehot => "logistic-onehot",
            ExperimentKind::FixtureVerify => "fixture-verify",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match Self::ALL.into_iter().find(|k| k.name() == s) {
            Some(k) => Ok(k),
            None => bail!(
                "unknown experiment '{s}' (expected one of: {})",
                Self::ALL.map(|k| k.name()).join(", ")
            ),
        }
    }

    pub fn is_linreg(self) -> bool {
        matches!(
            self,
            ExperimentKind::LinregGraphic | ExperimentKind::LinregPartition
        )
    }
}

impl std::fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Size parameters mean, per experiment:
///
/// * linreg: `n` samples, `p` features, `num_blocks` partition blocks.
/// * dpp-interval: `p` items with `n`-dimensional feature vectors, one item
///   per `interval` consecutive items.
/// * logistic-onehot: `n` samples, `p` one-hot columns (four per variable).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub trials: usize,
    pub master_seed: u64,
    pub n: usize,
    pub p: usize,
    pub num_blocks: usize,
    pub bandwidth: f64,
    pub interval: usize,
    pub output_dir: PathBuf,
    /// Also write `summary.dat` for gnuplot.
    pub plot_data: bool,
    /// Monte Carlo seeds per fixture in fixture-verify.
    pub fixture_seeds: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            experiment: ExperimentKind::LinregGraphic,
            trials: 1,
            master_seed: 0,
            n: 100,
            p: 200,
            num_blocks: 10,
            bandwidth: 1.0,
            interval: 25,
            output_dir: PathBuf::from("results"),
            plot_data: false,
            fixture_seeds: 500,
        }
    }
}

/// Largest number of items a DPP solution may hold.
pub const MAX_DPP_RANK: usize = 64;

impl ExperimentConfig {
    pub fn new(experiment: ExperimentKind) -> Self {
        let mut c = ExperimentConfig {
            experiment,
            ..Default::default()
        };
        match experiment {
            ExperimentKind::DppInterval => {
                c.n = 10;
                c.p = 450;
            }
            ExperimentKind::LogisticOnehot => {
                c.n = 200;
                c.p = 28;
            }
            _ => {}
        }
        c
    }

    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    pub fn trial_seed(&self, t: usize) -> u64 {
        trial_seed(self.master_seed, t as u64)
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            bail!("trials must be at least 1");
        }
        let c = self;
        match c.experiment {
            ExperimentKind::LinregGraphic | ExperimentKind::LinregPartition => {
                if c.n == 0 || c.p == 0 {
                    bail!("n and p must be positive");
                }
                if c.experiment == ExperimentKind::LinregGraphic && c.n < 2 {
                    bail!("the random graph needs n >= 2 vertices");
                }
                if c.experiment == ExperimentKind::LinregPartition && c.num_blocks == 0 {
                    bail!("blocks must be at least 1");
                }
            }
            ExperimentKind::DppInterval => {
                if c.n == 0 || c.p == 0 {
                    bail!("n (feature dimension) and p (items) must be positive");
                }
                if c.interval == 0 {
                    bail!("interval must be at least 1");
                }
                if !(c.bandwidth > 0.0 && c.bandwidth.is_finite()) {
                    bail!("bandwidth must be positive, got {}", c.bandwidth);
                }
                let rank = c.p.div_ceil(c.interval);
                if rank > MAX_DPP_RANK {
                    bail!("p / interval gives {rank} picks, more than the {MAX_DPP_RANK} allowed");
                }
            }
            ExperimentKind::LogisticOnehot => {
                if c.n == 0 || c.p == 0 || !c.p.is_multiple_of(wsub_core::datagen::ONE_HOT_ARITY) {
                    bail!(
                        "logistic-onehot needs n >= 1 and p a positive multiple of {}",
                        wsub_core::datagen::ONE_HOT_ARITY
                    );
                }
            }
            ExperimentKind::FixtureVerify => {
                if c.fixture_seeds < 2 {
                    bail!("fixture-verify needs at least two Monte Carlo seeds");
                }
            }
        }
        Ok(())
    }
}
