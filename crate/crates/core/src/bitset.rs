//! Fixed-universe vertex sets.

use std::cmp::Ordering;
use std::fmt;

use fixedbitset::FixedBitSet;

/// A set of vertex indices drawn from `0..universe`.
///
/// Ordering is lexicographic over the ascending member list, so `{0,1,2} < {0,1,3} < {0,2}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    bits: FixedBitSet,
}

impl VertexSet {
    pub fn empty(universe: usize) -> Self {
        VertexSet {
            bits: FixedBitSet::with_capacity(universe),
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(universe);
        bits.insert_range(..);
        VertexSet { bits }
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(universe: usize, indices: I) -> Self {
        let mut set = VertexSet::empty(universe);
        for i in indices {
            set.insert(i);
        }
        set
    }

    pub fn universe(&self) -> usize {
        self.bits.len()
    }

    pub fn insert(&mut self, v: usize) {
        self.bits.insert(v);
    }

    pub fn remove(&mut self, v: usize) {
        self.bits.set(v, false);
    }

    pub fn contains(&self, v: usize) -> bool {
        self.bits.contains(v)
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.bits.is_disjoint(&other.bits)
    }

    pub fn intersect_with(&mut self, other: &VertexSet) {
        self.bits.intersect_with(&other.bits);
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        self.bits.union_with(&other.bits);
    }

    pub fn difference_with(&mut self, other: &VertexSet) {
        self.bits.difference_with(&other.bits);
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        let mut out = self.clone();
        out.intersect_with(other);
        out
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        let mut out = self.clone();
        out.difference_with(other);
        out
    }

    /// `|self ∩ other|` without allocating.
    pub fn intersection_len(&self, other: &VertexSet) -> usize {
        self.bits.intersection_count(&other.bits)
    }

    /// `|self \ other|` without allocating.
    pub fn difference_len(&self, other: &VertexSet) -> usize {
        self.bits.difference_count(&other.bits)
    }

    pub fn jaccard(&self, other: &VertexSet) -> f64 {
        let union = self.bits.union_count(&other.bits);
        if union == 0 {
            return 1.0;
        }
        self.intersection_len(other) as f64 / union as f64
    }
}

impl Ord for VertexSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl PartialOrd for VertexSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lexicographic_order() {
        let a = VertexSet::from_indices(8, [0, 1, 2]);
        let b = VertexSet::from_indices(8, [0, 1, 3]);
        let c = VertexSet::from_indices(8, [0, 2]);
        let d = VertexSet::from_indices(8, [0, 1]);
        assert!(a < b);
        assert!(b < c);
        assert!(d < a);
    }

    #[test]
    fn counts_match_materialized_sets() {
        let a = VertexSet::from_indices(130, [0, 5, 64, 99, 129]);
        let b = VertexSet::from_indices(130, [5, 6, 99, 100]);
        assert_eq!(a.intersection_len(&b), a.intersection(&b).len());
        assert_eq!(a.difference_len(&b), a.difference(&b).len());
        assert_eq!(a.difference(&b).to_vec(), vec![0, 64, 129]);
        assert!((a.jaccard(&b) - 2.0 / 7.0).abs() < 1e-15);
    }

    #[test]
    fn full_set() {
        let f = VertexSet::full(70);
        assert_eq!(f.len(), 70);
        assert!(VertexSet::from_indices(70, [3, 69]).is_subset(&f));
    }
}
