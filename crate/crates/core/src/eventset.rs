//! Small fixed-width event sets.
//!
//! Every structure in this crate indexes its events `0..n` with `n <= 64`,
//! sorted by name, so a set of events is a single `u64` mask. Comparing the
//! sorted index lists therefore compares the sorted name lists.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{BitAnd, BitOr, Sub};

/// Hard upper bound on the number of events in one structure.
pub const MAX_EVENTS: usize = 64;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct EventSet(u64);

impl EventSet {
    pub const EMPTY: EventSet = EventSet(0);

    pub fn from_bits(bits: u64) -> Self {
        EventSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn singleton(e: usize) -> Self {
        debug_assert!(e < MAX_EVENTS);
        EventSet(1u64 << e)
    }

    /// The set `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        if n >= MAX_EVENTS {
            EventSet(u64::MAX)
        } else {
            EventSet((1u64 << n) - 1)
        }
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, e: usize) -> bool {
        e < MAX_EVENTS && self.0 & (1u64 << e) != 0
    }

    pub fn insert(&mut self, e: usize) {
        self.0 |= 1u64 << e;
    }

    pub fn remove(&mut self, e: usize) {
        self.0 &= !(1u64 << e);
    }

    pub fn with(self, e: usize) -> Self {
        EventSet(self.0 | (1u64 << e))
    }

    pub fn without(self, e: usize) -> Self {
        EventSet(self.0 & !(1u64 << e))
    }

    pub fn is_subset(self, other: EventSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_proper_subset(self, other: EventSet) -> bool {
        self != other && self.is_subset(other)
    }

    pub fn intersects(self, other: EventSet) -> bool {
        self.0 & other.0 != 0
    }

    pub fn union(self, other: EventSet) -> Self {
        EventSet(self.0 | other.0)
    }

    pub fn intersection(self, other: EventSet) -> Self {
        EventSet(self.0 & other.0)
    }

    pub fn difference(self, other: EventSet) -> Self {
        EventSet(self.0 & !other.0)
    }

    pub fn min(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn iter(self) -> Iter {
        Iter(self.0)
    }

    /// Every subset of `self`, starting with the empty set.
    pub fn subsets(self) -> Subsets {
        Subsets {
            mask: self.0,
            next: Some(0),
        }
    }

    /// Size first, then lexicographic on the sorted member indices.
    pub fn canonical_cmp(&self, other: &EventSet) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.iter().cmp(other.iter()))
    }

    pub fn names(self, names: &[String]) -> Vec<&str> {
        self.iter().map(|e| names[e].as_str()).collect()
    }

    /// `{a,b,c}` rendering with the given event names.
    pub fn display(self, names: &[String]) -> String {
        format!("{{{}}}", self.names(names).join(","))
    }
}

impl fmt::Debug for EventSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Canonical order: size first, then lexicographic.
impl Ord for EventSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.canonical_cmp(other)
    }
}

impl PartialOrd for EventSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl BitOr for EventSet {
    type Output = EventSet;
    fn bitor(self, rhs: EventSet) -> EventSet {
        self.union(rhs)
    }
}

impl BitAnd for EventSet {
    type Output = EventSet;
    fn bitand(self, rhs: EventSet) -> EventSet {
        self.intersection(rhs)
    }
}

impl Sub for EventSet {
    type Output = EventSet;
    fn sub(self, rhs: EventSet) -> EventSet {
        self.difference(rhs)
    }
}

impl FromIterator<usize> for EventSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = EventSet::EMPTY;
        for e in iter {
            s.insert(e);
        }
        s
    }
}

impl IntoIterator for EventSet {
    type Item = usize;
    type IntoIter = Iter;
    fn into_iter(self) -> Iter {
        self.iter()
    }
}

pub struct Iter(u64);

impl Iterator for Iter {
    type Item = usize;
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let e = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(e)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Iter {}

pub struct Subsets {
    mask: u64,
    next: Option<u64>,
}

impl Iterator for Subsets {
    type Item = EventSet;
    fn next(&mut self) -> Option<EventSet> {
        let cur = self.next?;
        self.next = if cur == self.mask {
            None
        } else {
            Some((cur.wrapping_sub(self.mask)) & self.mask)
        };
        Some(EventSet(cur))
    }
}

/// Sort a list of sets into canonical order and drop duplicates.
pub fn canonical_sort(sets: &mut Vec<EventSet>) {
    sets.sort();
    sets.dedup();
}

/// Keep only the inclusion-minimal sets.
pub fn minimal_sets(sets: &[EventSet]) -> Vec<EventSet> {
    let mut out: Vec<EventSet> = sets
        .iter()
        .copied()
        .filter(|s| !sets.iter().any(|t| t.is_proper_subset(*s)))
        .collect();
    canonical_sort(&mut out);
    out
}

/// Keep only the inclusion-maximal sets.
pub fn maximal_sets(sets: &[EventSet]) -> Vec<EventSet> {
    let mut out: Vec<EventSet> = sets
        .iter()
        .copied()
        .filter(|s| !sets.iter().any(|t| s.is_proper_subset(*t)))
        .collect();
    canonical_sort(&mut out);
    out
}
