//! Raw trajectories, per-iteration summaries and their CSV forms.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use wsub_core::io::fmt_f64;

pub const GROUND_TRUTH: &str = "ground_truth";
pub const ALGORITHMS: [&str; 3] = ["rrg", "greedy", "random"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawRow {
    pub experiment: String,
    pub algorithm: String,
    pub trial: usize,
    pub iteration: usize,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub algorithm: String,
    pub iteration: usize,
    pub mean: f64,
    /// Sample standard deviation; 0 for a single trial.
    pub std: f64,
    pub trials: usize,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ResultTable {
    pub rows: Vec<RawRow>,
    pub summary: Vec<SummaryRow>,
    /// Objective warnings raised per algorithm, summed over trials.
    pub solver_flags: BTreeMap<String, Vec<String>>,
}

fn algorithm_rank(name: &str) -> usize {
    ALGORITHMS
        .iter()
        .position(|&a| a == name)
        .unwrap_or(if name == GROUND_TRUTH {
            ALGORITHMS.len()
        } else {
            ALGORITHMS.len() + 1
        })
}

/// Mean and sample standard deviation.
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

impl ResultTable {
    /// Sorts rows canonically and recomputes the summary.
    pub fn from_rows(mut rows: Vec<RawRow>) -> Self {
        rows.sort_by(|a, b| {
            (algorithm_rank(&a.algorithm), &a.algorithm, a.trial, a.iteration).cmp(&(
                algorithm_rank(&b.algorithm),
                &b.algorithm,
                b.trial,
                b.iteration,
            ))
        });
        let summary = summarize(&rows);
        ResultTable {
            rows,
            summary,
            solver_flags: BTreeMap::new(),
        }
    }

    /// Final value of each `(algorithm, trial)` trajectory.
    pub fn terminal_values(&self, algorithm: &str) -> Vec<f64> {
        let mut last: BTreeMap<usize, (usize, f64)> = BTreeMap::new();
        for r in self.rows.iter().filter(|r| r.algorithm == algorithm) {
            let e = last.entry(r.trial).or_insert((r.iteration, r.value));
            if r.iteration >= e.0 {
                *e = (r.iteration, r.value);
            }
        }
        last.into_values().map(|(_, v)| v).collect()
    }

    pub fn write_raw(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
        w.write_record(["experiment", "algorithm", "trial", "iteration", "value"])?;
        for r in &self.rows {
            w.write_record([
                r.experiment.clone(),
                r.algorithm.clone(),
                r.trial.to_string(),
                r.iteration.to_string(),
                fmt_f64(r.value),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_summary(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
        w.write_record(["algorithm", "iteration", "mean", "std", "trials"])?;
        for s in &self.summary {
            w.write_record([
                s.algorithm.clone(),
                s.iteration.to_string(),
                fmt_f64(s.mean),
                fmt_f64(s.std),
                s.trials.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    /// gnuplot data: one indexed block per algorithm, `iteration mean std`.
    pub fn write_dat(&self, path: &Path) -> Result<()> {
        let mut w =
            BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?);
        let mut current: Option<&str> = None;
        for s in &self.summary {
            if current != Some(s.algorithm.as_str()) {
                if current.is_some() {
                    writeln!(w, "\n")?;
                }
                writeln!(w, "# {}\n# iteration mean std trials", s.algorithm)?;
                current = Some(&s.algorithm);
            }
            writeln!(
                w,
                "{} {} {} {}",
                s.iteration,
                fmt_f64(s.mean),
                fmt_f64(s.std),
                s.trials
            )?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_raw(path: &Path) -> Result<Vec<RawRow>> {
        let mut r = csv::Reader::from_path(path).with_context(|| format!("opening {}", path.display()))?;
        Ok(r.deserialize().collect::<std::result::Result<_, _>>()?)
    }

    pub fn read_summary(path: &Path) -> Result<Vec<SummaryRow>> {
        let mut r = csv::Reader::from_path(path).with_context(|| format!("opening {}", path.display()))?;
        Ok(r.deserialize().collect::<std::result::Result<_, _>>()?)
    }
}

/// Groups rows by `(algorithm, iteration)` in canonical order.
pub fn summarize(rows: &[RawRow]) -> Vec<SummaryRow> {
    let mut groups: BTreeMap<(usize, &str, usize), Vec<f64>> = BTreeMap::new();
    for r in rows {
        groups
            .entry((algorithm_rank(&r.algorithm), &r.algorithm, r.iteration))
            .or_default()
            .push(r.value);
    }
    groups
        .into_iter()
        .map(|((_, alg, iteration), values)| {
            let (mean, std) = mean_std(&values);
            SummaryRow {
                algorithm: alg.to_string(),
                iteration,
                mean,
                std,
                trials: values.len(),
            }
        })
        .collect()
}
