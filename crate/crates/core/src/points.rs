use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::MAX_N;

/// A subset of the chain `{1, ..., MAX_N}` stored as a bitmask (bit `x` is point `x`).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct PointSet(u16);

impl PointSet {
    pub const EMPTY: PointSet = PointSet(0);

    pub fn from_bits(bits: u16) -> Result<Self> {
        if bits & 1 != 0 {
            return Err(Error::Domain("point 0 is not on the chain".into()));
        }
        Ok(PointSet(bits))
    }

    pub fn bits(self) -> u16 {
        self.0
    }

    pub fn try_from_points<I: IntoIterator<Item = usize>>(points: I) -> Result<Self> {
        let mut bits = 0u16;
        for x in points {
            if x == 0 || x > MAX_N {
                return Err(Error::Domain(format!("point {x} outside 1..={MAX_N}")));
            }
            bits |= 1 << x;
        }
        Ok(PointSet(bits))
    }

    /// The interval `[lo, hi]`, empty when `lo > hi`.
    pub fn interval(lo: usize, hi: usize) -> Self {
        assert!(
            lo >= 1 && hi <= MAX_N || lo > hi,
            "interval [{lo},{hi}] off the chain"
        );
        let mut s = PointSet::EMPTY;
        for x in lo..=hi {
            s.insert(x);
        }
        s
    }

    /// All points of the chain `X_n`.
    pub fn chain(n: usize) -> Self {
        PointSet::interval(1, n)
    }

    pub fn insert(&mut self, x: usize) {
        assert!((1..=MAX_N).contains(&x), "point {x} off the chain");
        self.0 |= 1 << x;
    }

    pub fn contains(self, x: usize) -> bool {
        x <= MAX_N && self.0 & (1 << x) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: PointSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: PointSet) -> PointSet {
        PointSet(self.0 | other.0)
    }

    pub fn intersection(self, other: PointSet) -> PointSet {
        PointSet(self.0 & other.0)
    }

    pub fn difference(self, other: PointSet) -> PointSet {
        PointSet(self.0 & !other.0)
    }

    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn last(self) -> Option<usize> {
        (self.0 != 0).then(|| 15 - self.0.leading_zeros() as usize)
    }

    /// Whether the set has no gaps between its minimum and maximum.
    pub fn is_convex(self) -> bool {
        match (self.first(), self.last()) {
            (Some(lo), Some(hi)) => self.len() == hi - lo + 1,
            _ => true,
        }
    }

    /// Points in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let x = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(x)
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for PointSet {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}
