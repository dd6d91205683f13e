use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matroid::{is_base, Matroid};
use crate::set::ElementSet;

/// One round of a greedy-style run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    /// 1-based round index.
    pub i: usize,
    /// The set the round drew from: `M_i` for the residual random greedy,
    /// the feasible extensions for the baselines.
    pub candidate_base: ElementSet,
    pub chosen: usize,
    pub solution: ElementSet,
    pub value: f64,
    pub value_queries_cum: u64,
    pub independence_queries_cum: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunTrace {
    pub algorithm: String,
    /// `f(∅)`.
    pub initial_value: f64,
    pub iterations: Vec<IterationRecord>,
    pub final_set: ElementSet,
    pub final_value: f64,
    pub value_queries: u64,
    pub independence_queries: u64,
    pub solver_flags: Vec<String>,
}

impl RunTrace {
    pub(crate) fn empty(algorithm: &str, initial_value: f64) -> Self {
        RunTrace {
            algorithm: algorithm.to_string(),
            initial_value,
            iterations: Vec::new(),
            final_set: ElementSet::new(),
            final_value: initial_value,
            value_queries: 0,
            independence_queries: 0,
            solver_flags: Vec::new(),
        }
    }

    pub(crate) fn push(&mut self, rec: IterationRecord) {
        self.final_set = rec.solution.clone();
        self.final_value = rec.value;
        self.iterations.push(rec);
    }

    /// `f(S_0), f(S_1), …, f(S_k)`.
    pub fn values(&self) -> Vec<f64> {
        std::iter::once(self.initial_value)
            .chain(self.iterations.iter().map(|r| r.value))
            .collect()
    }

    /// Nested independent solutions ending in a base.
    pub fn check_feasible<M: Matroid + ?Sized>(&self, m: &M) -> Result<()> {
        let mut prev = ElementSet::new();
        for rec in &self.iterations {
            if !prev.is_subset(&rec.solution) || rec.solution.len() != prev.len() + 1 {
                return Err(Error::Internal(format!(
                    "round {} does not extend the solution by one",
                    rec.i
                )));
            }
            if !rec.solution.contains(rec.chosen) || !rec.candidate_base.contains(rec.chosen) {
                return Err(Error::Internal(format!(
                    "round {} chose outside its candidates",
                    rec.i
                )));
            }
            if !m.is_independent(&rec.solution)? {
                return Err(Error::Internal(format!("round {} solution is dependent", rec.i)));
            }
            prev = rec.solution.clone();
        }
        if !is_base(m, &self.final_set)? {
            return Err(Error::Internal(format!(
                "final set {} is not a base",
                self.final_set
            )));
        }
        Ok(())
    }

    /// One JSON object per round.
    pub fn write_json_lines<W: Write>(&self, mut w: W) -> Result<()> {
        for rec in &self.iterations {
            serde_json::to_writer(&mut w, rec)?;
            writeln!(w)?;
        }
        Ok(())
    }

    /// `iteration,chosen,value,value_queries_cum,independence_queries_cum`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record([
            "iteration",
            "chosen",
            "value",
            "value_queries_cum",
            "independence_queries_cum",
        ])?;
        for rec in &self.iterations {
            out.write_record([
                rec.i.to_string(),
                rec.chosen.to_string(),
                crate::io::fmt_f64(rec.value),
                rec.value_queries_cum.to_string(),
                rec.independence_queries_cum.to_string(),
            ])?;
        }
        out.flush()?;
        Ok(())
    }
}
