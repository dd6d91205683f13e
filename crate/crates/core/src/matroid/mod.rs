//! Matroids given by independence oracles.
//!
//! [`MatroidSpec`] is the declarative, serializable description (uniform,
//! partition, graphic, or a contraction of another spec). Algorithms are written
//! against the [`Matroid`] trait so they also run on the borrowed views in this
//! module: [`Contracted`], [`Padded`] and [`CountingMatroid`].

mod ops;
mod union_find;

use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::set::ElementSet;

pub(crate) use ops::pick_index;
pub use ops::{exchange_map, is_base, max_weight_base, random_base, rank_of, ExchangeMap};
pub(crate) use union_find::UnionFind;

/// Independence-oracle access to a matroid.
///
/// Element ids live in `0..universe()`. The ground set may be a strict subset
/// of that range (for contractions, the contracted elements are excluded).
pub trait Matroid: Send + Sync {
    fn universe(&self) -> usize;

    fn ground_set(&self) -> ElementSet;

    /// Errors only on ids `>= universe()`.
    fn is_independent(&self, s: &ElementSet) -> Result<bool>;
}

impl<M: Matroid + ?Sized> Matroid for &M {
    fn universe(&self) -> usize {
        (**self).universe()
    }
    fn ground_set(&self) -> ElementSet {
        (**self).ground_set()
    }
    fn is_independent(&self, s: &ElementSet) -> Result<bool> {
        (**self).is_independent(s)
    }
}

/// Partition matroid: `|S ∩ B_i| <= capacity_i` for every block.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PartitionRepr", into = "PartitionRepr")]
pub struct PartitionMatroid {
    blocks: Vec<ElementSet>,
    capacities: Vec<usize>,
    block_of: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct PartitionRepr {
    blocks: Vec<ElementSet>,
    capacities: Vec<usize>,
}

impl TryFrom<PartitionRepr> for PartitionMatroid {
    type Error = Error;
    fn try_from(r: PartitionRepr) -> Result<Self> {
        PartitionMatroid::new(r.blocks, r.capacities)
    }
}

impl From<PartitionMatroid> for PartitionRepr {
    fn from(p: PartitionMatroid) -> Self {
        PartitionRepr {
            blocks: p.blocks,
            capacities: p.capacities,
        }
    }
}

impl PartitionMatroid {
    /// Blocks must be pairwise disjoint and cover `0..n` exactly.
    pub fn new(blocks: Vec<ElementSet>, capacities: Vec<usize>) -> Result<Self> {
        if blocks.len() != capacities.len() {
            return Err(Error::invalid(format!(
                "{} blocks but {} capacities",
                blocks.len(),
                capacities.len()
            )));
        }
        let n: usize = blocks.iter().map(ElementSet::len).sum();
        let mut block_of = vec![usize::MAX; n];
        for (i, block) in blocks.iter().enumerate() {
            for e in block {
                if e >= n {
                    return Err(Error::invalid(format!(
                        "partition blocks do not cover 0..{n}: found element {e}"
                    )));
                }
                if block_of[e] != usize::MAX {
                    return Err(Error::invalid(format!("element {e} appears in two blocks")));
                }
                block_of[e] = i;
            }
        }
        Ok(PartitionMatroid {
            blocks,
            capacities,
            block_of,
        })
    }

    /// Builds blocks from a block index per element.
    pub fn from_assignment(assignment: &[usize], capacities: Vec<usize>) -> Result<Self> {
        let mut blocks = vec![Vec::new(); capacities.len()];
        for (e, &b) in assignment.iter().enumerate() {
            blocks
                .get_mut(b)
                .ok_or_else(|| Error::invalid(format!("block index {b} has no capacity")))?
                .push(e);
        }
        Self::new(blocks.into_iter().map(ElementSet::from).collect(), capacities)
    }

    pub fn blocks(&self) -> &[ElementSet] {
        &self.blocks
    }

    pub fn capacities(&self) -> &[usize] {
        &self.capacities
    }

    pub fn block_of(&self, e: usize) -> usize {
        self.block_of[e]
    }

    pub fn len(&self) -> usize {
        self.block_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.block_of.is_empty()
    }
}

/// Graphic matroid: elements are edges, independent sets are forests.
/// Parallel edges are allowed; a self-loop is a dependent singleton.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GraphicRepr", into = "GraphicRepr")]
pub struct GraphicMatroid {
    num_vertices: usize,
    edges: Vec<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct GraphicRepr {
    num_vertices: usize,
    edges: Vec<(usize, usize)>,
}

impl TryFrom<GraphicRepr> for GraphicMatroid {
    type Error = Error;
    fn try_from(r: GraphicRepr) -> Result<Self> {
        GraphicMatroid::new(r.num_vertices, r.edges)
    }
}

impl From<GraphicMatroid> for GraphicRepr {
    fn from(g: GraphicMatroid) -> Self {
        GraphicRepr {
            num_vertices: g.num_vertices,
            edges: g.edges,
        }
    }
}

impl GraphicMatroid {
    pub fn new(num_vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if let Some(&(u, v)) = edges
            .iter()
            .find(|&&(u, v)| u >= num_vertices || v >= num_vertices)
        {
            return Err(Error::invalid(format!(
                "edge ({u}, {v}) references a vertex outside 0..{num_vertices}"
            )));
        }
        Ok(GraphicMatroid { num_vertices, edges })
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    fn is_forest<'a>(&self, edge_ids: impl IntoIterator<Item = &'a usize>) -> bool {
        let mut uf = UnionFind::new(self.num_vertices);
        edge_ids.into_iter().all(|&e| {
            let (u, v) = self.edges[e];
            uf.union(u, v)
        })
    }
}

/// Declarative matroid description.
///
/// Contractions are runtime-only and refuse to serialize.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "lowercase")]
pub enum MatroidSpec {
    /// Sets of size at most `k` over `0..n`.
    Uniform {
        n: usize,
        k: usize,
    },
    Partition(PartitionMatroid),
    Graphic(GraphicMatroid),
    #[serde(skip)]
    Contraction {
        base: Box<MatroidSpec>,
        contracted: ElementSet,
    },
}

impl MatroidSpec {
    pub fn uniform(n: usize, k: usize) -> Self {
        MatroidSpec::Uniform { n, k }
    }

    pub fn partition(blocks: Vec<ElementSet>, capacities: Vec<usize>) -> Result<Self> {
        PartitionMatroid::new(blocks, capacities).map(MatroidSpec::Partition)
    }

    pub fn graphic(num_vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        GraphicMatroid::new(num_vertices, edges).map(MatroidSpec::Graphic)
    }

    /// Consecutive intervals of `len` elements over `0..n`, at most `capacity` per interval.
    pub fn intervals(n: usize, len: usize, capacity: usize) -> Result<Self> {
        if len == 0 {
            return Err(Error::invalid("interval length must be positive"));
        }
        let blocks: Vec<ElementSet> = (0..n)
            .step_by(len)
            .map(|start| (start..(start + len).min(n)).collect())
            .collect();
        let caps = vec![capacity; blocks.len()];
        Self::partition(blocks, caps)
    }

    /// Number of element ids, including contracted ones.
    pub fn num_elements(&self) -> usize {
        match self {
            MatroidSpec::Uniform { n, .. } => *n,
            MatroidSpec::Partition(p) => p.len(),
            MatroidSpec::Graphic(g) => g.edges.len(),
            MatroidSpec::Contraction { base, .. } => base.num_elements(),
        }
    }

    /// Size of every base, from the closed form of each variant.
    pub fn rank(&self) -> usize {
        match self {
            MatroidSpec::Uniform { n, k } => (*n).min(*k),
            MatroidSpec::Partition(p) => p
                .blocks
                .iter()
                .zip(&p.capacities)
                .map(|(b, &c)| b.len().min(c))
                .sum(),
            MatroidSpec::Graphic(g) => {
                let mut uf = UnionFind::new(g.num_vertices);
                g.edges.iter().filter(|&&(u, v)| uf.union(u, v)).count()
            }
            MatroidSpec::Contraction { base, contracted } => base.rank() - contracted.len(),
        }
    }

    /// `M / s`. Contracting a contraction merges the contracted sets.
    pub fn contract(&self, s: &ElementSet) -> Result<MatroidSpec> {
        if !self.is_independent(s)? {
            return Err(Error::precondition(format!("cannot contract dependent set {s}")));
        }
        Ok(match self {
            MatroidSpec::Contraction { base, contracted } => MatroidSpec::Contraction {
                base: base.clone(),
                contracted: contracted.union(s),
            },
            other => MatroidSpec::Contraction {
                base: Box::new(other.clone()),
                contracted: s.clone(),
            },
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

impl Matroid for MatroidSpec {
    fn universe(&self) -> usize {
        self.num_elements()
    }

    fn ground_set(&self) -> ElementSet {
        match self {
            MatroidSpec::Contraction { base, contracted } => base.ground_set().difference(contracted),
            other => ElementSet::full(other.num_elements()),
        }
    }

    fn is_independent(&self, s: &ElementSet) -> Result<bool> {
        s.check_range(self.num_elements())?;
        Ok(match self {
            MatroidSpec::Uniform { k, .. } => s.len() <= *k,
            MatroidSpec::Partition(p) => {
                let mut used = vec![0usize; p.capacities.len()];
                s.iter().all(|e| {
                    let b = p.block_of[e];
                    used[b] += 1;
                    used[b] <= p.capacities[b]
                })
            }
            MatroidSpec::Graphic(g) => g.is_forest(s.as_slice()),
            MatroidSpec::Contraction { base, contracted } => {
                s.is_disjoint(contracted) && base.is_independent(&s.union(contracted))?
            }
        })
    }
}

/// Borrowed, lazily evaluated contraction `M / contracted`.
#[derive(Debug, Clone)]
pub struct Contracted<'a, M: ?Sized> {
    base: &'a M,
    contracted: ElementSet,
}

impl<'a, M: Matroid + ?Sized> Contracted<'a, M> {
    /// The caller guarantees `contracted` is independent in `base`.
    pub fn new(base: &'a M, contracted: ElementSet) -> Self {
        Contracted { base, contracted }
    }

    pub fn contracted(&self) -> &ElementSet {
        &self.contracted
    }
}

impl<M: Matroid + ?Sized> Matroid for Contracted<'_, M> {
    fn universe(&self) -> usize {
        self.base.universe()
    }

    fn ground_set(&self) -> ElementSet {
        self.base.ground_set().difference(&self.contracted)
    }

    fn is_independent(&self, s: &ElementSet) -> Result<bool> {
        s.check_range(self.universe())?;
        Ok(s.is_disjoint(&self.contracted) && self.base.is_independent(&s.union(&self.contracted))?)
    }
}

/// `M` extended by `extra` free elements with ids `universe..universe + extra`.
/// A set is independent iff its original part is.
#[derive(Debug, Clone)]
pub struct Padded<'a, M: ?Sized> {
    base: &'a M,
    extra: usize,
}

impl<'a, M: Matroid + ?Sized> Padded<'a, M> {
    pub fn new(base: &'a M, extra: usize) -> Self {
        Padded { base, extra }
    }

    pub fn original_universe(&self) -> usize {
        self.base.universe()
    }

    /// Drops the padding elements from `s`.
    pub fn strip(&self, s: &ElementSet) -> ElementSet {
        let n = self.base.universe();
        s.iter().filter(|&e| e < n).collect()
    }
}

impl<M: Matroid + ?Sized> Matroid for Padded<'_, M> {
    fn universe(&self) -> usize {
        self.base.universe() + self.extra
    }

    fn ground_set(&self) -> ElementSet {
        let n = self.base.universe();
        self.base.ground_set().union(&(n..n + self.extra).collect())
    }

    fn is_independent(&self, s: &ElementSet) -> Result<bool> {
        s.check_range(self.universe())?;
        self.base.is_independent(&self.strip(s))
    }
}

/// Wraps a matroid and counts independence queries.
#[derive(Debug)]
pub struct CountingMatroid<M> {
    inner: M,
    queries: AtomicU64,
}

impl<M: Matroid> CountingMatroid<M> {
    pub fn new(inner: M) -> Self {
        CountingMatroid {
            inner,
            queries: AtomicU64::new(0),
        }
    }

    pub fn queries(&self) -> u64 {
        self.queries.load(Ordering::Relaxed)
    }

    pub fn inner(&self) -> &M {
        &self.inner
    }
}

impl<M: Matroid> Matroid for CountingMatroid<M> {
    fn universe(&self) -> usize {
        self.inner.universe()
    }

    fn ground_set(&self) -> ElementSet {
        self.inner.ground_set()
    }

    fn is_independent(&self, s: &ElementSet) -> Result<bool> {
        self.queries.fetch_add(1, Ordering::Relaxed);
        self.inner.is_independent(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> MatroidSpec {
        MatroidSpec::graphic(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    fn set<const N: usize>(v: [usize; N]) -> ElementSet {
        ElementSet::from(v)
    }

    #[test]
    fn partition_capacities() {
        let m = MatroidSpec::partition(vec![set([0, 1]), set([2, 3])], vec![1, 1]).unwrap();
        assert!(m.is_independent(&set([0, 2])).unwrap());
        assert!(!m.is_independent(&set([0, 1])).unwrap());
    }

    #[test]
    fn graphic_cycles() {
        let m = triangle();
        assert!(!m.is_independent(&set([0, 1, 2])).unwrap());
        assert!(m.is_independent(&set([0, 1])).unwrap());
    }

    #[test]
    fn self_loop_is_dependent_and_parallel_edges_allowed() {
        let m = MatroidSpec::graphic(2, vec![(0, 0), (0, 1), (1, 0)]).unwrap();
        assert!(!m.is_independent(&set([0])).unwrap());
        assert!(m.is_independent(&set([1])).unwrap());
        assert!(!m.is_independent(&set([1, 2])).unwrap());
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn contraction_of_uniform() {
        let m = MatroidSpec::uniform(4, 2).contract(&set([0])).unwrap();
        assert!(m.is_independent(&set([1])).unwrap());
        assert!(!m.is_independent(&set([1, 2])).unwrap());
        // Touching the contracted set is dependent, not an error.
        assert!(!m.is_independent(&set([0])).unwrap());
        assert_eq!(m.ground_set(), set([1, 2, 3]));
    }

    #[test]
    fn out_of_range_is_an_error() {
        let m = MatroidSpec::uniform(3, 2);
        assert!(matches!(
            m.is_independent(&set([3])),
            Err(Error::ElementOutOfRange { .. })
        ));
    }

    #[test]
    fn ranks() {
        assert_eq!(MatroidSpec::uniform(5, 3).rank(), 3);
        let path = MatroidSpec::graphic(4, vec![(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(path.rank(), 3);
        assert_eq!(rank_of(&triangle(), &set([0, 1, 2])).unwrap(), 2);
        assert_eq!(MatroidSpec::uniform(4, 2).contract(&set([3])).unwrap().rank(), 1);
    }

    #[test]
    fn contracting_an_edge_makes_the_others_parallel() {
        let m = triangle().contract(&set([0])).unwrap();
        assert!(m.is_independent(&set([1])).unwrap());
        assert!(m.is_independent(&set([2])).unwrap());
        assert!(!m.is_independent(&set([1, 2])).unwrap());
    }

    #[test]
    fn contracting_dependent_set_fails() {
        assert!(matches!(
            triangle().contract(&set([0, 1, 2])),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn contracting_empty_set_is_identity() {
        let m = triangle();
        let c = m.contract(&ElementSet::new()).unwrap();
        for mask in 0..8u64 {
            let s = ElementSet::from_mask(mask);
            assert_eq!(m.is_independent(&s).unwrap(), c.is_independent(&s).unwrap());
        }
        assert_eq!(c.rank(), m.rank());
    }

    #[test]
    fn nested_contraction_flattens() {
        let m = MatroidSpec::uniform(5, 3);
        let c = m.contract(&set([0])).unwrap().contract(&set([1])).unwrap();
        match &c {
            MatroidSpec::Contraction { contracted, .. } => assert_eq!(contracted, &set([0, 1])),
            _ => panic!("expected contraction"),
        }
        assert_eq!(c.rank(), 1);
    }

    #[test]
    fn invalid_partitions_rejected() {
        assert!(MatroidSpec::partition(vec![set([0, 1]), set([1, 2])], vec![1, 1]).is_err());
        assert!(MatroidSpec::partition(vec![set([0, 2])], vec![1]).is_err());
        assert!(MatroidSpec::partition(vec![set([0, 1])], vec![1, 1]).is_err());
    }

    #[test]
    fn json_round_trip_and_shape() {
        let specs = [
            MatroidSpec::uniform(4, 2),
            MatroidSpec::partition(vec![set([0, 2]), set([1])], vec![1, 0]).unwrap(),
            triangle(),
        ];
        for m in specs {
            let text = m.to_json().unwrap();
            assert_eq!(MatroidSpec::from_json(&text).unwrap(), m);
        }
        let v: serde_json::Value =
            serde_json::from_str(&MatroidSpec::uniform(4, 2).to_json().unwrap()).unwrap();
        assert_eq!(v["variant"], "uniform");
        let bad = r#"{"variant":"partition","blocks":[[0,1],[1]],"capacities":[1,1]}"#;
        assert!(MatroidSpec::from_json(bad).is_err());
        let contraction = MatroidSpec::uniform(3, 2).contract(&set([0])).unwrap();
        assert!(contraction.to_json().is_err());
    }

    #[test]
    fn intervals_follow_the_frame_constraint() {
        let m = MatroidSpec::intervals(60, 25, 1).unwrap();
        match &m {
            MatroidSpec::Partition(p) => {
                assert_eq!(p.blocks().len(), 3);
                assert_eq!(p.blocks()[2].len(), 10);
            }
            _ => unreachable!(),
        }
        assert_eq!(m.rank(), 3);
        assert!(m.is_independent(&set([0, 25, 59])).unwrap());
        assert!(!m.is_independent(&set([0, 24])).unwrap());
    }

    #[test]
    fn padded_adds_free_elements() {
        let m = MatroidSpec::uniform(3, 1);
        let p = Padded::new(&m, 2);
        assert_eq!(p.universe(), 5);
        assert_eq!(rank_of(&p, &p.ground_set()).unwrap(), 3);
        assert!(p.is_independent(&set([0, 3, 4])).unwrap());
        assert!(!p.is_independent(&set([0, 1, 3])).unwrap());
        assert_eq!(p.strip(&set([1, 3, 4])), set([1]));
    }

    #[test]
    fn counting_counts() {
        let m = CountingMatroid::new(MatroidSpec::uniform(3, 1));
        for e in 0..3 {
            m.is_independent(&set([e])).unwrap();
        }
        assert_eq!(m.queries(), 3);
    }
}
