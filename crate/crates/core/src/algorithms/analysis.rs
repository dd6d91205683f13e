//! Residual random greedy instrumented with the shrinking optimum `OPT_i`.
//!
//! Before `u_i` is drawn, an exchange bijection `g_i` from `M_i` to
//! `OPT_{i-1}` is fixed on `M / S_{i-1}` (identity on `M_i ∩ OPT_{i-1}`).
//! After the draw, `OPT_i = OPT_{i-1} - g_i(u_i)`, which keeps
//! `S_i ∪ OPT_i` a base.

use rand::RngCore;
use serde::{Deserialize, Serialize};

use super::rrg::{run_rrg, RoundObserver};
use super::trace::RunTrace;
use crate::error::{Error, Result};
use crate::matroid::{exchange_map, is_base, Contracted, ExchangeMap, Matroid};
use crate::set::ElementSet;
use crate::setfn::ValueOracle;

const MAX_GROUND: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisTrace {
    /// `OPT_0 ⊇ OPT_1 ⊇ … ⊇ OPT_k = ∅`.
    pub opt_sets: Vec<ElementSet>,
    /// `g_i(u_i)` per round.
    pub removed: Vec<usize>,
    /// `g_i` restricted to `M_i \ OPT_{i-1}`.
    pub exchange_maps: Vec<ExchangeMap>,
}

struct OptTracker<'a, M: ?Sized> {
    m: &'a M,
    pending: Option<(ElementSet, ExchangeMap)>,
    trace: AnalysisTrace,
}

impl<M: Matroid + ?Sized> OptTracker<'_, M> {
    fn current(&self) -> &ElementSet {
        self.trace.opt_sets.last().expect("OPT_0 is always present")
    }
}

impl<M: Matroid + ?Sized> RoundObserver for OptTracker<'_, M> {
    fn before_draw(&mut self, solution: &ElementSet, candidates: &ElementSet) -> Result<()> {
        let residual = Contracted::new(self.m, solution.clone());
        let g = exchange_map(&residual, candidates, self.current()).map_err(|e| {
            Error::Internal(format!(
                "no exchange bijection in round {}: {e}",
                self.trace.removed.len() + 1
            ))
        })?;
        self.pending = Some((candidates.clone(), g));
        Ok(())
    }

    fn after_draw(&mut self, chosen: usize) -> Result<()> {
        let (candidates, g) = self.pending.take().expect("before_draw runs first");
        debug_assert!(candidates.contains(chosen));
        let removed = g.get(chosen).unwrap_or(chosen);
        let next = self.current().without(removed);
        self.trace.opt_sets.push(next);
        self.trace.removed.push(removed);
        self.trace.exchange_maps.push(g);
        Ok(())
    }
}

/// Residual random greedy that also tracks `OPT_i`. `opt` must be a base.
pub fn rrg_with_analysis<M: Matroid + ?Sized>(
    f: &ValueOracle,
    m: &M,
    opt: &ElementSet,
    rng: &mut dyn RngCore,
) -> Result<(RunTrace, AnalysisTrace)> {
    if m.universe() > MAX_GROUND {
        return Err(Error::TooLarge(format!(
            "analysis mode is limited to {MAX_GROUND} elements, got {}",
            m.universe()
        )));
    }
    if !is_base(m, opt)? {
        return Err(Error::precondition(format!("OPT = {opt} is not a base")));
    }
    let mut tracker = OptTracker {
        m,
        pending: None,
        trace: AnalysisTrace {
            opt_sets: vec![opt.clone()],
            removed: Vec::new(),
            exchange_maps: Vec::new(),
        },
    };
    let run = run_rrg("rrg", f, m, rng, &mut tracker)?;
    Ok((run, tracker.trace))
}
