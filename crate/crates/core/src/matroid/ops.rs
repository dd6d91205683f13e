use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use super::Matroid;
use crate::error::{Error, Result};
use crate::set::ElementSet;

/// Size of a maximal independent subset of `s`, found greedily in ascending id order.
pub fn rank_of<M: Matroid + ?Sized>(m: &M, s: &ElementSet) -> Result<usize> {
    let mut acc = ElementSet::new();
    for e in s {
        let next = acc.with(e);
        if m.is_independent(&next)? {
            acc = next;
        }
    }
    Ok(acc.len())
}

/// `s` is independent and no ground element extends it.
pub fn is_base<M: Matroid + ?Sized>(m: &M, s: &ElementSet) -> Result<bool> {
    if !s.is_subset(&m.ground_set()) || !m.is_independent(s)? {
        return Ok(false);
    }
    for e in m.ground_set().difference(s) {
        if m.is_independent(&s.with(e))? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Maximum-weight base by the matroid greedy algorithm.
///
/// `weights` is indexed by element id and must cover every ground element.
/// Elements are scanned by non-increasing weight (ties by ascending id) and
/// kept whenever they preserve independence, so negative weights still enter
/// when needed to complete a base. Uses exactly one independence query per
/// ground element.
pub fn max_weight_base<M: Matroid + ?Sized>(m: &M, weights: &[f64]) -> Result<ElementSet> {
    let mut order: Vec<usize> = m.ground_set().iter().collect();
    for &e in &order {
        match weights.get(e) {
            Some(w) if !w.is_nan() => {}
            _ => return Err(Error::invalid(format!("no weight for element {e}"))),
        }
    }
    order.sort_by(|&a, &b| weights[b].total_cmp(&weights[a]).then(a.cmp(&b)));
    let mut base = ElementSet::new();
    for e in order {
        let next = base.with(e);
        if m.is_independent(&next)? {
            base = next;
        }
    }
    Ok(base)
}

/// Grows a base by repeatedly adding a uniformly random element among those
/// that keep the set independent.
///
/// This is not a uniform sampler over bases for general matroids; the
/// distribution is that of the sequential process.
pub fn random_base<M: Matroid + ?Sized>(m: &M, rng: &mut dyn RngCore) -> Result<ElementSet> {
    let mut s = ElementSet::new();
    let ground = m.ground_set();
    loop {
        let mut options = Vec::new();
        for e in ground.difference(&s) {
            if m.is_independent(&s.with(e))? {
                options.push(e);
            }
        }
        if options.is_empty() {
            return Ok(s);
        }
        s.insert(options[pick_index(rng, options.len())]);
    }
}

/// `floor(U * len)` for `U` uniform on `[0, 1)`.
pub(crate) fn pick_index(rng: &mut dyn RngCore, len: usize) -> usize {
    let u: f64 = rng.random();
    ((u * len as f64) as usize).min(len - 1)
}

/// Bijection `g: A \ B -> B \ A` with `(B + u) - g(u)` independent for all `u`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExchangeMap {
    pub pairs: Vec<(usize, usize)>,
}

impl ExchangeMap {
    pub fn get(&self, u: usize) -> Option<usize> {
        self.pairs.iter().find(|&&(a, _)| a == u).map(|&(_, b)| b)
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Checks domain, codomain, injectivity and the exchange property.
    pub fn validate<M: Matroid + ?Sized>(&self, m: &M, a: &ElementSet, b: &ElementSet) -> Result<()> {
        let domain: ElementSet = self.pairs.iter().map(|p| p.0).collect();
        let image: ElementSet = self.pairs.iter().map(|p| p.1).collect();
        if domain.len() != self.pairs.len() || image.len() != self.pairs.len() {
            return Err(Error::Internal("exchange map is not injective".into()));
        }
        if domain != a.difference(b) || image != b.difference(a) {
            return Err(Error::Internal(
                "exchange map domain/codomain differ from the base differences".into(),
            ));
        }
        for &(u, v) in &self.pairs {
            if !m.is_independent(&b.with(u).without(v))? {
                return Err(Error::Internal(format!("(B + {u}) - {v} is dependent")));
            }
        }
        Ok(())
    }
}

/// Exchange bijection between two bases, found as a perfect matching in the
/// exchange graph (`u -- v` iff `(B + u) - v` is independent) by augmenting
/// paths tried in ascending id order.
pub fn exchange_map<M: Matroid + ?Sized>(m: &M, a: &ElementSet, b: &ElementSet) -> Result<ExchangeMap> {
    for (name, s) in [("A", a), ("B", b)] {
        if !is_base(m, s)? {
            return Err(Error::precondition(format!("{name} = {s} is not a base")));
        }
    }
    let left: Vec<usize> = a.difference(b).iter().collect();
    let right: Vec<usize> = b.difference(a).iter().collect();
    let mut adj = vec![Vec::new(); left.len()];
    for (i, &u) in left.iter().enumerate() {
        let with_u = b.with(u);
        for (j, &v) in right.iter().enumerate() {
            if m.is_independent(&with_u.without(v))? {
                adj[i].push(j);
            }
        }
    }

    let mut match_right: Vec<Option<usize>> = vec![None; right.len()];
    for i in 0..left.len() {
        let mut seen = vec![false; right.len()];
        if !augment(i, &adj, &mut seen, &mut match_right) {
            return Err(Error::Internal(format!(
                "exchange graph has no perfect matching between {a} and {b}"
            )));
        }
    }
    let mut pairs: Vec<(usize, usize)> = match_right
        .iter()
        .enumerate()
        .map(|(j, i)| (left[i.expect("perfect matching covers right side")], right[j]))
        .collect();
    pairs.sort_unstable();
    Ok(ExchangeMap { pairs })
}

fn augment(i: usize, adj: &[Vec<usize>], seen: &mut [bool], match_right: &mut [Option<usize>]) -> bool {
    for &j in &adj[i] {
        if seen[j] {
            continue;
        }
        seen[j] = true;
        if match_right[j].is_none_or(|k| augment(k, adj, seen, match_right)) {
            match_right[j] = Some(i);
            return true;
        }
    }
    false
}
