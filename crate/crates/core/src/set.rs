//! Sorted, duplicate-free sets of ground-set element ids.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};

/// A set of element ids kept in ascending order without duplicates.
///
/// Iteration, equality and serialization are all in ascending id order, so two
/// sets built from the same members in different orders are indistinguishable.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct ElementSet(Vec<usize>);

impl ElementSet {
    pub fn new() -> Self {
        ElementSet(Vec::new())
    }

    /// The full ground set `0..n`.
    pub fn full(n: usize) -> Self {
        ElementSet((0..n).collect())
    }

    /// Builds a set from a bitmask over `0..64`.
    pub fn from_mask(mask: u64) -> Self {
        ElementSet((0..64).filter(|i| mask >> i & 1 == 1).collect())
    }

    /// Bitmask of the members; `None` if any member is `>= 64`.
    pub fn to_mask(&self) -> Option<u64> {
        self.0.iter().try_fold(0u64, |m, &e| (e < 64).then(|| m | 1 << e))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, e: usize) -> bool {
        self.0.binary_search(&e).is_ok()
    }

    /// Inserts `e`; returns `false` if it was already present.
    pub fn insert(&mut self, e: usize) -> bool {
        match self.0.binary_search(&e) {
            Ok(_) => false,
            Err(pos) => {
                self.0.insert(pos, e);
                true
            }
        }
    }

    /// Removes `e`; returns `false` if it was absent.
    pub fn remove(&mut self, e: usize) -> bool {
        match self.0.binary_search(&e) {
            Ok(pos) => {
                self.0.remove(pos);
                true
            }
            Err(_) => false,
        }
    }

    /// `self + e` as a new set.
    pub fn with(&self, e: usize) -> Self {
        let mut s = self.clone();
        s.insert(e);
        s
    }

    /// `self - e` as a new set.
    pub fn without(&self, e: usize) -> Self {
        let mut s = self.clone();
        s.remove(e);
        s
    }

    pub fn union(&self, other: &ElementSet) -> Self {
        let mut out = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                std::cmp::Ordering::Less => {
                    out.push(self.0[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(other.0[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push(self.0[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        ElementSet(out)
    }

    pub fn intersection(&self, other: &ElementSet) -> Self {
        ElementSet(self.0.iter().copied().filter(|&e| other.contains(e)).collect())
    }

    pub fn difference(&self, other: &ElementSet) -> Self {
        ElementSet(self.0.iter().copied().filter(|&e| !other.contains(e)).collect())
    }

    pub fn is_disjoint(&self, other: &ElementSet) -> bool {
        self.0.iter().all(|&e| !other.contains(e))
    }

    pub fn is_subset(&self, other: &ElementSet) -> bool {
        self.0.iter().all(|&e| other.contains(e))
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = usize> + ExactSizeIterator + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn max(&self) -> Option<usize> {
        self.0.last().copied()
    }

    /// Fails if any member is `>= n`.
    pub fn check_range(&self, n: usize) -> Result<()> {
        match self.max() {
            Some(e) if e >= n => Err(Error::ElementOutOfRange { element: e, size: n }),
            _ => Ok(()),
        }
    }
}

impl FromIterator<usize> for ElementSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut v: Vec<usize> = iter.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        ElementSet(v)
    }
}

impl IntoIterator for ElementSet {
    type Item = usize;
    type IntoIter = std::vec::IntoIter<usize>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.into_iter()
    }
}

impl<'a> IntoIterator for &'a ElementSet {
    type Item = usize;
    type IntoIter = std::iter::Copied<std::slice::Iter<'a, usize>>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter().copied()
    }
}

impl From<Vec<usize>> for ElementSet {
    fn from(v: Vec<usize>) -> Self {
        v.into_iter().collect()
    }
}

impl<const N: usize> From<[usize; N]> for ElementSet {
    fn from(v: [usize; N]) -> Self {
        v.into_iter().collect()
    }
}

impl<'de> Deserialize<'de> for ElementSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Vec::<usize>::deserialize(d).map(ElementSet::from)
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.0.iter()).finish()
    }
}

impl fmt::Display for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn construction_sorts_and_dedups() {
        let s = ElementSet::from([3, 1, 3, 2]);
        assert_eq!(s.as_slice(), &[1, 2, 3]);
        assert_eq!(s.to_string(), "{1 2 3}");
    }

    #[test]
    fn range_check() {
        assert!(ElementSet::from([0, 4]).check_range(5).is_ok());
        assert!(matches!(
            ElementSet::from([0, 5]).check_range(5),
            Err(Error::ElementOutOfRange { element: 5, size: 5 })
        ));
    }

    proptest! {
        #[test]
        fn set_algebra_matches_masks(a in 0u64..1 << 16, b in 0u64..1 << 16) {
            let (sa, sb) = (ElementSet::from_mask(a), ElementSet::from_mask(b));
            prop_assert_eq!(sa.union(&sb).to_mask(), Some(a | b));
            prop_assert_eq!(sa.intersection(&sb).to_mask(), Some(a & b));
            prop_assert_eq!(sa.difference(&sb).to_mask(), Some(a & !b));
            prop_assert_eq!(sa.is_disjoint(&sb), a & b == 0);
            prop_assert_eq!(sa.is_subset(&sb), a & !b == 0);
        }
    }
}
