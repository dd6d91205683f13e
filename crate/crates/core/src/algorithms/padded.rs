use rand::RngCore;

use super::rrg::{run_rrg, NoObserver};
use super::trace::RunTrace;
use crate::error::Result;
use crate::matroid::{Matroid, Padded};
use crate::setfn::{PaddedFunction, ValueOracle};

/// Residual random greedy on the instance extended by `k_prime` dummy
/// elements that every set may contain and that never change `f`.
///
/// Runs `k + k_prime` rounds; `final_set` has the dummies stripped. The
/// iteration records keep the extended ids (`>= n`) so the wasted rounds stay
/// visible. Value queries are charged to `f`.
pub fn padded_variant<M: Matroid + ?Sized>(
    f: &ValueOracle,
    m: &M,
    k_prime: usize,
    rng: &mut dyn RngCore,
) -> Result<RunTrace> {
    let padded = Padded::new(m, k_prime);
    let padded_f = ValueOracle::new(PaddedFunction::new(f.clone(), k_prime));
    let mut trace = run_rrg("rrg-padded", &padded_f, &padded, rng, &mut NoObserver)?;
    trace.final_set = padded.strip(&trace.final_set);
    Ok(trace)
}
