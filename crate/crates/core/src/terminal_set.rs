use std::fmt;

use fixedbitset::FixedBitSet;

use crate::instance::TerminalIdx;

/// A set of terminal indices (`0` is the origin, `1` the destination, goals
/// follow).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TerminalSet(FixedBitSet);

impl TerminalSet {
    pub fn empty(terminal_count: usize) -> Self {
        TerminalSet(FixedBitSet::with_capacity(terminal_count))
    }

    pub fn full(terminal_count: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(terminal_count);
        bits.insert_range(..);
        TerminalSet(bits)
    }

    pub fn from_indices(terminal_count: usize, items: impl IntoIterator<Item = TerminalIdx>) -> Self {
        let mut set = Self::empty(terminal_count);
        for t in items {
            set.insert(t);
        }
        set
    }

    pub fn capacity(&self) -> usize {
        self.0.len()
    }

    pub fn insert(&mut self, t: TerminalIdx) {
        self.0.insert(t);
    }

    /// Returns whether `t` was present.
    pub fn remove(&mut self, t: TerminalIdx) -> bool {
        let was = self.0.contains(t);
        self.0.set(t, false);
        was
    }

    pub fn contains(&self, t: TerminalIdx) -> bool {
        self.0.contains(t)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_clear()
    }

    pub fn len(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn iter(&self) -> impl Iterator<Item = TerminalIdx> + '_ {
        self.0.ones()
    }

    pub fn union_with(&mut self, other: &TerminalSet) {
        self.0.union_with(&other.0);
    }

    /// Removes every member of `other`; returns whether anything changed.
    pub fn subtract(&mut self, other: &TerminalSet) -> bool {
        let before = self.len();
        self.0.difference_with(&other.0);
        self.len() != before
    }

    pub fn is_disjoint(&self, other: &TerminalSet) -> bool {
        self.0.is_disjoint(&other.0)
    }
}

impl fmt::Debug for TerminalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
