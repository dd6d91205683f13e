//! Multi-trial execution on a worker pool.

use std::path::Path;

use anyhow::{Context, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use wsub_core::algorithms::{AlgorithmRegistry, RunTrace};

use crate::config::{derive_seed, ExperimentConfig};
use crate::experiments::ExperimentRegistry;
use crate::results::{RawRow, ResultTable, ALGORITHMS, GROUND_TRUTH};

pub const THREADS_ENV: &str = "WSUB_THREADS";

/// Worker count: `WSUB_THREADS` if set, else rayon's default.
pub fn worker_count() -> Result<usize> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => {
            let n: usize = v
                .trim()
                .parse()
                .with_context(|| format!("{THREADS_ENV}='{v}' is not a count"))?;
            Ok(n.max(1))
        }
        Err(_) => Ok(rayon::current_num_threads()),
    }
}

struct TrialOutput {
    rows: Vec<RawRow>,
    flags: Vec<(String, Vec<String>)>,
}

fn run_trial(
    config: &ExperimentConfig,
    experiments: &ExperimentRegistry,
    algorithms: &AlgorithmRegistry,
    trial: usize,
) -> Result<TrialOutput> {
    let seed = config.trial_seed(trial);
    let experiment = experiments.get(config.experiment)?;
    let instance = experiment
        .build(config, seed)
        .with_context(|| format!("building trial {trial}"))?;
    let name = config.experiment.name().to_string();
    let mut rows = Vec::new();
    let mut flags = Vec::new();
    for (j, alg_name) in ALGORITHMS.iter().enumerate() {
        let alg = algorithms.get(alg_name)?;
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, j as u64));
        let trace: RunTrace = alg
            .run(&instance.objective, &instance.matroid, &mut rng)
            .with_context(|| format!("running {alg_name} on trial {trial}"))?;
        rows.extend(trace.values().into_iter().enumerate().map(|(i, value)| RawRow {
            experiment: name.clone(),
            algorithm: alg_name.to_string(),
            trial,
            iteration: i,
            value,
        }));
        if !trace.solver_flags.is_empty() {
            flags.push((alg_name.to_string(), trace.solver_flags));
        }
    }
    if let Some((size, value)) = instance.ground_truth {
        rows.push(RawRow {
            experiment: name,
            algorithm: GROUND_TRUTH.to_string(),
            trial,
            iteration: size,
            value,
        });
    }
    Ok(TrialOutput { rows, flags })
}

/// Runs every trial of `config` and aggregates the trajectories. Results do
/// not depend on the worker count.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ResultTable> {
    config.validate()?;
    let experiments = ExperimentRegistry::builtin();
    let algorithms = AlgorithmRegistry::builtin();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(worker_count()?)
        .build()
        .context("starting worker pool")?;
    let outputs: Vec<TrialOutput> = pool.install(|| {
        (0..config.trials)
            .into_par_iter()
            .map(|t| run_trial(config, &experiments, &algorithms, t))
            .collect::<Result<_>>()
    })?;
    let mut rows = Vec::new();
    let mut all_flags: std::collections::BTreeMap<String, Vec<String>> = Default::default();
    for (trial, out) in outputs.into_iter().enumerate() {
        rows.extend(out.rows);
        for (alg, flags) in out.flags {
            all_flags
                .entry(alg)
                .or_default()
                .extend(flags.into_iter().map(|f| format!("trial {trial}: {f}")));
        }
    }
    let mut table = ResultTable::from_rows(rows);
    table.solver_flags = all_flags;
    Ok(table)
}

/// Writes `raw.csv`, `summary.csv` and optionally `summary.dat` under `dir`.
pub fn write_outputs(table: &ResultTable, dir: &Path, plot_data: bool) -> Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    table.write_raw(&dir.join("raw.csv"))?;
    table.write_summary(&dir.join("summary.csv"))?;
    if plot_data {
        table.write_dat(&dir.join("summary.dat"))?;
    }
    Ok(())
}
