//! Single-word bitsets over dense vertex ids 0..64.

use std::fmt;
use std::ops::{BitAnd, BitAndAssign, BitOr, BitOrAssign, BitXor, Sub, SubAssign};

/// Maximum number of vertices supported by the word-sized set.
pub const MAX_VERTICES: usize = 64;

/// A set of vertices with ids below 64, stored as one machine word.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct VertexSet(pub u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    /// The set {0, 1, ..., n-1}.
    pub fn full(n: usize) -> VertexSet {
        debug_assert!(n <= MAX_VERTICES);
        if n == 64 {
            VertexSet(u64::MAX)
        } else {
            VertexSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(v: usize) -> VertexSet {
        debug_assert!(v < MAX_VERTICES);
        VertexSet(1u64 << v)
    }

    pub fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> VertexSet {
        let mut s = VertexSet::EMPTY;
        for v in iter {
            s.insert(v);
        }
        s
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, v: usize) -> bool {
        v < MAX_VERTICES && self.0 & (1u64 << v) != 0
    }

    pub fn insert(&mut self, v: usize) {
        debug_assert!(v < MAX_VERTICES);
        self.0 |= 1u64 << v;
    }

    pub fn remove(&mut self, v: usize) {
        debug_assert!(v < MAX_VERTICES);
        self.0 &= !(1u64 << v);
    }

    pub fn without(self, v: usize) -> VertexSet {
        VertexSet(self.0 & !(1u64 << v))
    }

    pub fn with(self, v: usize) -> VertexSet {
        VertexSet(self.0 | (1u64 << v))
    }

    pub fn is_subset_of(self, other: VertexSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersects(self, other: VertexSet) -> bool {
        self.0 & other.0 != 0
    }

    /// Smallest vertex id in the set, if any.
    pub fn min(self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as usize)
        }
    }

    /// Vertices in ascending id order.
    pub fn iter(self) -> SetIter {
        SetIter(self.0)
    }

    /// All subsets of the set, in ascending order of their word value.
    /// The empty set comes first and the set itself last.
    pub fn subsets(self) -> SubsetIter {
        SubsetIter { mask: self.0, cur: 0, done: false }
    }

    /// All subsets ordered by size, smallest first; within one size by
    /// ascending word value. Deterministic, so searches that stop at the
    /// first hit return canonical minimum-size witnesses.
    pub fn subsets_by_size(self) -> SizeOrderedSubsets {
        SizeOrderedSubsets { positions: self.to_vec(), size: 0, cur: Some(0) }
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl BitOr for VertexSet {
    type Output = VertexSet;
    fn bitor(self, rhs: VertexSet) -> VertexSet {
        VertexSet(self.0 | rhs.0)
    }
}

impl BitOrAssign for VertexSet {
    fn bitor_assign(&mut self, rhs: VertexSet) {
        self.0 |= rhs.0;
    }
}

impl BitAnd for VertexSet {
    type Output = VertexSet;
    fn bitand(self, rhs: VertexSet) -> VertexSet {
        VertexSet(self.0 & rhs.0)
    }
}

impl BitAndAssign for VertexSet {
    fn bitand_assign(&mut self, rhs: VertexSet) {
        self.0 &= rhs.0;
    }
}

impl BitXor for VertexSet {
    type Output = VertexSet;
    fn bitxor(self, rhs: VertexSet) -> VertexSet {
        VertexSet(self.0 ^ rhs.0)
    }
}

impl Sub for VertexSet {
    type Output = VertexSet;
    fn sub(self, rhs: VertexSet) -> VertexSet {
        VertexSet(self.0 & !rhs.0)
    }
}

impl SubAssign for VertexSet {
    fn sub_assign(&mut self, rhs: VertexSet) {
        self.0 &= !rhs.0;
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> VertexSet {
        VertexSet::from_iter(iter)
    }
}

pub struct SetIter(u64);

impl Iterator for SetIter {
    type Item = usize;
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            let v = self.0.trailing_zeros() as usize;
            self.0 &= self.0 - 1;
            Some(v)
        }
    }
}

pub struct SubsetIter {
    mask: u64,
    cur: u64,
    done: bool,
}

impl Iterator for SubsetIter {
    type Item = VertexSet;
    fn next(&mut self) -> Option<VertexSet> {
        if self.done {
            return None;
        }
        let out = VertexSet(self.cur);
        if self.cur == self.mask {
            self.done = true;
        } else {
            // Standard submask enumeration: step to the next subset of mask.
            self.cur = (self.cur.wrapping_sub(self.mask)) & self.mask;
        }
        Some(out)
    }
}

/// See [`VertexSet::subsets_by_size`]. Internally enumerates compact masks
/// over the member positions with Gosper's hack and expands them.
pub struct SizeOrderedSubsets {
    positions: Vec<usize>,
    size: usize,
    cur: Option<u64>,
}

impl Iterator for SizeOrderedSubsets {
    type Item = VertexSet;
    fn next(&mut self) -> Option<VertexSet> {
        let mask = self.cur?;
        let mut out = VertexSet::EMPTY;
        for (i, &p) in self.positions.iter().enumerate() {
            if mask >> i & 1 == 1 {
                out.insert(p);
            }
        }
        self.cur = self.advance(mask);
        Some(out)
    }
}

impl SizeOrderedSubsets {
    fn advance(&mut self, mask: u64) -> Option<u64> {
        let m = self.positions.len();
        if let Some(next) = next_same_popcount(mask) {
            if (next as u128) < (1u128 << m) {
                return Some(next);
            }
        }
        self.size += 1;
        if self.size > m {
            return None;
        }
        Some(if self.size == 64 { u64::MAX } else { (1u64 << self.size) - 1 })
    }
}

/// Gosper's hack; None once the popcount class is exhausted in the word.
fn next_same_popcount(v: u64) -> Option<u64> {
    if v == 0 {
        return None;
    }
    let c = v & v.wrapping_neg();
    let r = v.checked_add(c)?;
    Some((((r ^ v) >> 2) / c) | r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_ops() {
        let mut s = VertexSet::EMPTY;
        assert!(s.is_empty());
        s.insert(3);
        s.insert(0);
        s.insert(63);
        assert_eq!(s.len(), 3);
        assert!(s.contains(3) && s.contains(0) && s.contains(63));
        assert!(!s.contains(1));
        assert_eq!(s.to_vec(), vec![0, 3, 63]);
        s.remove(3);
        assert_eq!(s.to_vec(), vec![0, 63]);
        assert_eq!(VertexSet::full(3).to_vec(), vec![0, 1, 2]);
        assert_eq!(VertexSet::full(64).len(), 64);
    }

    #[test]
    fn subset_enumeration_covers_powerset() {
        let s = VertexSet::from_iter([1, 4, 6]);
        let subs: Vec<VertexSet> = s.subsets().collect();
        assert_eq!(subs.len(), 8);
        assert_eq!(subs[0], VertexSet::EMPTY);
        assert_eq!(*subs.last().unwrap(), s);
        for sub in &subs {
            assert!(sub.is_subset_of(s));
        }
        let empty_subs: Vec<VertexSet> = VertexSet::EMPTY.subsets().collect();
        assert_eq!(empty_subs, vec![VertexSet::EMPTY]);
    }

    #[test]
    fn set_algebra() {
        let a = VertexSet::from_iter([0, 1, 2]);
        let b = VertexSet::from_iter([2, 3]);
        assert_eq!((a | b).to_vec(), vec![0, 1, 2, 3]);
        assert_eq!((a & b).to_vec(), vec![2]);
        assert_eq!((a - b).to_vec(), vec![0, 1]);
        assert!(VertexSet::from_iter([0, 1]).is_subset_of(a));
        assert!(!a.is_subset_of(b));
    }

    #[test]
    fn size_ordered_subsets_are_sorted_and_complete() {
        let s = VertexSet::from_iter([1, 3, 4, 7]);
        let subs: Vec<VertexSet> = s.subsets_by_size().collect();
        assert_eq!(subs.len(), 16);
        assert_eq!(subs[0], VertexSet::EMPTY);
        assert_eq!(*subs.last().unwrap(), s);
        for w in subs.windows(2) {
            assert!((w[0].len(), w[0].0) < (w[1].len(), w[1].0));
        }
        let mut sorted = subs.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 16);

        let small: Vec<Vec<usize>> = VertexSet::from_iter([2, 5])
            .subsets_by_size()
            .map(|s| s.to_vec())
            .collect();
        assert_eq!(small, vec![vec![], vec![2], vec![5], vec![2, 5]]);
        assert_eq!(VertexSet::EMPTY.subsets_by_size().count(), 1);
    }
}
