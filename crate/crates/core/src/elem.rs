use std::fmt;

use serde::{Deserialize, Serialize};

/// Largest carrier this crate accepts; element sets are 64-bit masks.
pub const MAX_CARRIER: usize = 64;

/// Index of an element in the carrier of a [`crate::Tgs`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Elem(u8);

impl Elem {
    pub fn from_index(index: usize) -> Elem {
        assert!(
            index < MAX_CARRIER,
            "element index {index} exceeds carrier limit"
        );
        Elem(index as u8)
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// A subset of the carrier, stored as a bitmask over element indices.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ElemSet(u64);

impl ElemSet {
    pub const EMPTY: ElemSet = ElemSet(0);

    pub fn from_bits(bits: u64) -> ElemSet {
        ElemSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    /// The set `{0, 1, ..., m-1}`.
    pub fn full(m: usize) -> ElemSet {
        if m >= 64 {
            ElemSet(u64::MAX)
        } else {
            ElemSet((1u64 << m) - 1)
        }
    }

    pub fn singleton(x: Elem) -> ElemSet {
        ElemSet(1 << x.index())
    }

    #[inline]
    pub fn contains(self, x: Elem) -> bool {
        self.0 >> x.index() & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, x: Elem) -> bool {
        let fresh = !self.contains(x);
        self.0 |= 1 << x.index();
        fresh
    }

    pub fn remove(&mut self, x: Elem) {
        self.0 &= !(1 << x.index());
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: ElemSet) -> ElemSet {
        ElemSet(self.0 | other.0)
    }

    pub fn intersection(self, other: ElemSet) -> ElemSet {
        ElemSet(self.0 & other.0)
    }

    pub fn difference(self, other: ElemSet) -> ElemSet {
        ElemSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: ElemSet) -> bool {
        self.0 & !other.0 == 0
    }

    /// Members in ascending index order.
    pub fn iter(self) -> impl Iterator<Item = Elem> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(Elem::from_index(i))
        })
    }

    pub fn first(self) -> Option<Elem> {
        self.iter().next()
    }

    /// Canonical order: cardinality first, then the ascending member lists
    /// compared lexicographically.
    pub fn canonical_cmp(self, other: ElemSet) -> std::cmp::Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.iter().cmp(other.iter()))
    }
}

impl FromIterator<Elem> for ElemSet {
    fn from_iter<I: IntoIterator<Item = Elem>>(iter: I) -> Self {
        let mut s = ElemSet::EMPTY;
        for x in iter {
            s.insert(x);
        }
        s
    }
}

impl fmt::Debug for ElemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set()
            .entries(self.iter().map(|e| e.index()))
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn iter_is_ascending() {
        let s: ElemSet = [5, 0, 3].into_iter().map(Elem::from_index).collect();
        let v: Vec<usize> = s.iter().map(Elem::index).collect();
        assert_eq!(v, vec![0, 3, 5]);
        assert_eq!(s.len(), 3);
    }

    #[test]
    fn canonical_order_size_then_lex() {
        let a: ElemSet = [0, 2].into_iter().map(Elem::from_index).collect();
        let b: ElemSet = [0, 1].into_iter().map(Elem::from_index).collect();
        let c: ElemSet = [1].into_iter().map(Elem::from_index).collect();
        assert!(b.canonical_cmp(a).is_lt());
        assert!(c.canonical_cmp(b).is_lt());
    }

    #[test]
    fn full_sets() {
        assert_eq!(ElemSet::full(3).len(), 3);
        assert_eq!(ElemSet::full(64).len(), 64);
    }
}
