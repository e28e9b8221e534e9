//! Partial transformations of the chain `X_n = {1 < 2 < ... < n}`.
//!
//! A [`ChainMap`] stores its image word packed into a `u64`, four bits per
//! point, with point 1 in the most significant used nibble. Comparing two
//! words of the same chain size as integers is therefore the lexicographic
//! order on image words, which is the canonical order used everywhere in the
//! crate. `0` marks an undefined point.
//!
//! Composition acts on the right: `a.then(b)` sends `x` to `b(a(x))`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{domain, Error, Result};
use crate::points::PointSet;
use crate::MAX_N;

#[inline]
const fn shift(x: usize) -> u32 {
    (4 * (MAX_N - x)) as u32
}

/// A partial transformation of `X_n`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChainMap {
    word: u64,
    n: u8,
}

impl ChainMap {
    /// Builds a map from its image word (`img[x-1]` is the image of `x`, `0` for undefined).
    pub fn new(n: usize, img: &[usize]) -> Result<Self> {
        check_n(n)?;
        if img.len() != n {
            return Err(domain(format!(
                "image word has {} entries, expected {n}",
                img.len()
            )));
        }
        let mut word = 0u64;
        for (i, &v) in img.iter().enumerate() {
            if v > n {
                return Err(domain(format!(
                    "image {v} of point {} outside [1,{n}]",
                    i + 1
                )));
            }
            word |= (v as u64) << shift(i + 1);
        }
        Ok(ChainMap { word, n: n as u8 })
    }

    /// Builds a map from `(point, image)` pairs; unlisted points are undefined.
    pub fn from_pairs<I: IntoIterator<Item = (usize, usize)>>(n: usize, pairs: I) -> Result<Self> {
        check_n(n)?;
        let mut img = vec![0; n];
        for (x, y) in pairs {
            if x == 0 || x > n || y == 0 || y > n {
                return Err(domain(format!("pair {x}->{y} outside [1,{n}]")));
            }
            if img[x - 1] != 0 && img[x - 1] != y {
                return Err(domain(format!("point {x} assigned twice")));
            }
            img[x - 1] = y;
        }
        ChainMap::new(n, &img)
    }

    /// The empty transformation `0_n`.
    pub fn empty(n: usize) -> Result<Self> {
        check_n(n)?;
        Ok(ChainMap {
            word: 0,
            n: n as u8,
        })
    }

    /// The identity `1_n`.
    pub fn identity(n: usize) -> Result<Self> {
        ChainMap::partial_identity(n, PointSet::chain(n.min(MAX_N)))
    }

    /// The partial identity `1_Y`.
    pub fn partial_identity(n: usize, y: PointSet) -> Result<Self> {
        check_n(n)?;
        check_within(n, y)?;
        let mut word = 0u64;
        for x in y.iter() {
            word |= (x as u64) << shift(x);
        }
        Ok(ChainMap { word, n: n as u8 })
    }

    pub(crate) fn from_word(n: usize, word: u64) -> Self {
        ChainMap { word, n: n as u8 }
    }

    pub fn n(self) -> usize {
        self.n as usize
    }

    /// Image of `x`, or `None` if `x` is undefined or off the chain.
    #[inline]
    pub fn get(self, x: usize) -> Option<usize> {
        if x == 0 || x > self.n() {
            return None;
        }
        match self.raw(x) {
            0 => None,
            v => Some(v),
        }
    }

    #[inline]
    fn raw(self, x: usize) -> usize {
        ((self.word >> shift(x)) & 0xF) as usize
    }

    /// The image word, `0` for undefined points.
    pub fn image_word(self) -> Vec<usize> {
        (1..=self.n()).map(|x| self.raw(x)).collect()
    }

    pub fn domain(self) -> PointSet {
        let mut s = PointSet::EMPTY;
        for x in 1..=self.n() {
            if self.raw(x) != 0 {
                s.insert(x);
            }
        }
        s
    }

    pub fn image(self) -> PointSet {
        let mut s = PointSet::EMPTY;
        for x in 1..=self.n() {
            let v = self.raw(x);
            if v != 0 {
                s.insert(v);
            }
        }
        s
    }

    pub fn image_size(self) -> usize {
        self.image().len()
    }

    /// Images of the domain points in increasing order of the points.
    pub fn image_sequence(self) -> Vec<usize> {
        (1..=self.n())
            .map(|x| self.raw(x))
            .filter(|&v| v != 0)
            .collect()
    }

    pub fn is_empty(self) -> bool {
        self.word == 0
    }

    /// Preimage `y a^{-1}`.
    pub fn preimage(self, y: usize) -> PointSet {
        let mut s = PointSet::EMPTY;
        if y == 0 {
            return s;
        }
        for x in 1..=self.n() {
            if self.raw(x) == y {
                s.insert(x);
            }
        }
        s
    }

    /// `x ↦ other(self(x))` without the size check.
    #[inline]
    pub fn then(self, other: ChainMap) -> ChainMap {
        debug_assert_eq!(self.n, other.n);
        let mut out = 0u64;
        let mut rest = self.word;
        while rest != 0 {
            let pos = rest.trailing_zeros() / 4;
            let v = ((rest >> (4 * pos)) & 0xF) as usize;
            rest &= !(0xFu64 << (4 * pos));
            out |= ((other.word >> shift(v)) & 0xF) << (4 * pos);
        }
        ChainMap {
            word: out,
            n: self.n,
        }
    }

    /// Composition in the right-action convention: apply `self`, then `other`.
    pub fn compose(self, other: ChainMap) -> Result<ChainMap> {
        if self.n != other.n {
            return Err(Error::SizeMismatch {
                left: self.n(),
                right: other.n(),
            });
        }
        Ok(self.then(other))
    }

    /// Restriction to `y ∩ dom(self)`.
    pub fn restrict(self, y: PointSet) -> Result<ChainMap> {
        check_within(self.n(), y)?;
        let mut mask = 0u64;
        for x in y.iter() {
            mask |= 0xFu64 << shift(x);
        }
        Ok(ChainMap {
            word: self.word & mask,
            n: self.n,
        })
    }

    pub fn fix(self) -> PointSet {
        let mut s = PointSet::EMPTY;
        for x in 1..=self.n() {
            if self.raw(x) == x {
                s.insert(x);
            }
        }
        s
    }

    /// The kernel partition `{y a^{-1} : y ∈ im(a)}`, blocks ordered by their minima.
    pub fn kernel(self) -> Vec<PointSet> {
        let mut blocks: Vec<PointSet> = self.image().iter().map(|y| self.preimage(y)).collect();
        blocks.sort_by_key(|b| b.first());
        blocks
    }

    pub fn fix_and_kernel(self) -> (PointSet, Vec<PointSet>) {
        (self.fix(), self.kernel())
    }

    pub fn is_idempotent(self) -> bool {
        self.then(self) == self
    }

    pub fn classify(self) -> ClassProfile {
        let seq = self.image_sequence();
        let t = seq.len();
        let mut descents = 0;
        let mut ascents = 0;
        let mut linear_descent = false;
        let mut linear_ascent = false;
        for i in 0..t {
            let (cur, next) = (seq[i], seq[(i + 1) % t]);
            if next < cur {
                descents += 1;
                linear_descent |= i + 1 < t;
            } else if next > cur {
                ascents += 1;
                linear_ascent |= i + 1 < t;
            }
        }
        let mut seen = PointSet::EMPTY;
        let mut injective = true;
        for &v in &seq {
            injective &= !seen.contains(v);
            seen.insert(v);
        }
        ClassProfile {
            order_preserving: !linear_descent,
            order_reversing: !linear_ascent,
            orientation_preserving: descents <= 1,
            orientation_reversing: ascents <= 1,
            order_decreasing: (1..=self.n()).all(|x| self.raw(x) <= x),
            injective,
            idempotent: self.is_idempotent(),
            image_size: seen.len(),
        }
    }

    /// Order-preserving degree: the largest `m` such that `self|X_m` is order-preserving.
    ///
    /// Defined only on non-empty members of `POPD_n`.
    pub fn opd(self) -> Result<usize> {
        if self.is_empty() || !Class::Popd.contains(&self.classify()) {
            return Err(domain(format!(
                "opd undefined for {self}: not a non-empty member of POPD_n"
            )));
        }
        (1..=self.n())
            .rev()
            .find(|&m| self.prefix(m).classify().order_preserving)
            .ok_or_else(|| Error::Inconsistency(format!("no order-preserving prefix for {self}")))
    }

    /// Order-reversing degree: the largest `m` such that `self|X_m` is monotone
    /// and `(m+1)self = max(im(self))`.
    ///
    /// Defined only on `PORD_n*`, the oriented order-decreasing maps that are not
    /// orientation-preserving.
    pub fn ord_degree(self) -> Result<usize> {
        if !Class::PordStar.contains(&self.classify()) {
            return Err(domain(format!("ord undefined for {self}: not in PORD_n*")));
        }
        let top = self
            .image()
            .last()
            .expect("PORD* maps have non-empty image");
        (0..self.n())
            .rev()
            .find(|&m| self.raw(m + 1) == top && self.prefix(m).classify().is_monotone())
            .ok_or_else(|| Error::Inconsistency(format!("empty ord candidate set for {self}")))
    }

    fn prefix(self, m: usize) -> ChainMap {
        self.restrict(PointSet::chain(m))
            .expect("prefix lies on the chain")
    }
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 || n > MAX_N {
        return Err(Error::ChainSize(n));
    }
    Ok(())
}

fn check_within(n: usize, y: PointSet) -> Result<()> {
    if !y.is_subset(PointSet::chain(n)) {
        return Err(domain(format!("point set {y} not contained in [1,{n}]")));
    }
    Ok(())
}

impl fmt::Display for ChainMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={}:[", self.n)?;
        for x in 1..=self.n() {
            if x > 1 {
                write!(f, ",")?;
            }
            write!(f, "{}", self.raw(x))?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for ChainMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for ChainMap {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        crate::text::parse_chain_map(s)
    }
}

impl Serialize for ChainMap {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ChainMap {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Classification flags of a [`ChainMap`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct ClassProfile {
    pub order_preserving: bool,
    pub order_reversing: bool,
    pub orientation_preserving: bool,
    pub orientation_reversing: bool,
    pub order_decreasing: bool,
    pub injective: bool,
    pub idempotent: bool,
    pub image_size: usize,
}

impl ClassProfile {
    pub fn is_monotone(&self) -> bool {
        self.order_preserving || self.order_reversing
    }

    pub fn is_oriented(&self) -> bool {
        self.orientation_preserving || self.orientation_reversing
    }

    /// Every class of this crate that contains a map with this profile.
    pub fn memberships(&self) -> Vec<Class> {
        Class::ALL
            .iter()
            .copied()
            .filter(|c| c.contains(self))
            .collect()
    }
}

/// The named classes of order-decreasing partial transformations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Class {
    /// Order-decreasing.
    Pd,
    /// Order-preserving and order-decreasing.
    Pc,
    /// Monotone and order-decreasing.
    Pmd,
    /// Orientation-preserving and order-decreasing.
    Popd,
    /// Oriented and order-decreasing.
    Pord,
    /// Injective members of `PORD`.
    Iord,
    /// Injective members of `PC`.
    Ic,
    /// Injective members of `POPD`.
    Iopd,
    /// `PORD \ POPD`.
    PordStar,
    /// `PORD* \ PMD`.
    PrdStar,
    /// `IORD \ IOPD`.
    IordStar,
}

impl Class {
    pub const ALL: [Class; 11] = [
        Class::Pd,
        Class::Pc,
        Class::Pmd,
        Class::Popd,
        Class::Pord,
        Class::Iord,
        Class::Ic,
        Class::Iopd,
        Class::PordStar,
        Class::PrdStar,
        Class::IordStar,
    ];

    pub fn contains(self, p: &ClassProfile) -> bool {
        let dec = p.order_decreasing;
        match self {
            Class::Pd => dec,
            Class::Pc => dec && p.order_preserving,
            Class::Pmd => dec && p.is_monotone(),
            Class::Popd => dec && p.orientation_preserving,
            Class::Pord => dec && p.is_oriented(),
            Class::Iord => dec && p.is_oriented() && p.injective,
            Class::Ic => dec && p.order_preserving && p.injective,
            Class::Iopd => dec && p.orientation_preserving && p.injective,
            Class::PordStar => dec && p.orientation_reversing && !p.orientation_preserving,
            Class::PrdStar => {
                dec && p.orientation_reversing && !p.orientation_preserving && !p.is_monotone()
            }
            Class::IordStar => {
                dec && p.orientation_reversing && !p.orientation_preserving && p.injective
            }
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Class::Pd => "PD",
            Class::Pc => "PC",
            Class::Pmd => "PMD",
            Class::Popd => "POPD",
            Class::Pord => "PORD",
            Class::Iord => "IORD",
            Class::Ic => "IC",
            Class::Iopd => "IOPD",
            Class::PordStar => "PORD*",
            Class::PrdStar => "PRD*",
            Class::IordStar => "IORD*",
        }
    }
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Class {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let upper = s.trim().to_ascii_uppercase();
        Class::ALL
            .iter()
            .copied()
            .find(|c| c.name() == upper)
            .ok_or_else(|| Error::Parse {
                pos: 0,
                msg: format!("unknown class {s:?}"),
            })
    }
}

impl Serialize for Class {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(s: &str) -> ChainMap {
        s.parse().unwrap()
    }

    fn pts(v: &[usize]) -> PointSet {
        PointSet::try_from_points(v.iter().copied()).unwrap()
    }

    #[test]
    fn identity_is_neutral() {
        let id = ChainMap::identity(4).unwrap();
        for s in [
            "n=4:[1,0,3,2]",
            "n=4:[0,2,1,4]",
            "n=4:[0,0,0,0]",
            "n=4:[1,1,1,1]",
        ] {
            assert_eq!(id.compose(m(s)).unwrap(), m(s));
            assert_eq!(m(s).compose(id).unwrap(), m(s));
        }
    }

    #[test]
    fn compose_partial_identity_then_map() {
        // 1_{5,7,8} followed by (5→5, 6→4, 7→7, 8→6)
        let left = ChainMap::partial_identity(9, pts(&[5, 7, 8])).unwrap();
        let right = m("n=9:[0,0,0,0,5,4,7,6,0]");
        assert_eq!(left.compose(right).unwrap(), m("n=9:[0,0,0,0,5,0,7,6,0]"));
    }

    #[test]
    fn compose_idempotent() {
        let e = m("n=4:[1,2,1,0]");
        assert_eq!(e.compose(e).unwrap(), e);
    }

    #[test]
    fn compose_size_mismatch() {
        let a = ChainMap::identity(3).unwrap();
        let b = ChainMap::identity(4).unwrap();
        assert_eq!(a.compose(b), Err(Error::SizeMismatch { left: 3, right: 4 }));
    }

    #[test]
    fn compose_order_is_left_to_right() {
        let a = m("n=3:[0,1,0]"); // 2 -> 1
        let b = m("n=3:[1,0,0]"); // 1 -> 1
        assert_eq!(a.compose(b).unwrap(), m("n=3:[0,1,0]"));
        assert_eq!(b.compose(a).unwrap(), m("n=3:[0,0,0]"));
    }

    #[test]
    fn restrict_examples() {
        let id = ChainMap::identity(5).unwrap();
        let y = pts(&[2, 4]);
        assert_eq!(
            id.restrict(y).unwrap(),
            ChainMap::partial_identity(5, y).unwrap()
        );
        assert!(m("n=5:[1,2,3,4,5]")
            .restrict(PointSet::EMPTY)
            .unwrap()
            .is_empty());
        assert_eq!(
            m("n=7:[0,0,3,0,5,0,3]")
                .restrict(PointSet::chain(6))
                .unwrap(),
            m("n=7:[0,0,3,0,5,0,0]")
        );
        assert!(matches!(id.restrict(pts(&[6])), Err(Error::Domain(_))));
    }

    #[test]
    fn classify_examples() {
        let alpha = m("n=7:[0,0,3,0,5,0,3]").classify();
        assert!(alpha.orientation_preserving);
        assert!(!alpha.order_preserving);
        assert!(alpha.order_decreasing);
        assert!(!alpha.injective);

        let beta = m("n=7:[0,0,3,0,5,0,4]").classify();
        assert!(beta.orientation_reversing);
        assert!(!beta.orientation_preserving);
        assert!(beta.order_decreasing);
        assert!(beta.injective);

        let zero = ChainMap::empty(5).unwrap().classify();
        assert!(zero.order_preserving && zero.order_reversing);
        assert!(zero.orientation_preserving && zero.orientation_reversing);
        assert_eq!(zero.image_size, 0);
    }

    #[test]
    fn constant_and_singleton_maps_carry_all_flags() {
        for s in ["n=4:[0,0,2,0]", "n=4:[1,1,1,1]"] {
            let p = m(s).classify();
            assert!(p.order_preserving && p.order_reversing);
            assert!(p.orientation_preserving && p.orientation_reversing);
        }
    }

    #[test]
    fn fix_and_kernel_examples() {
        let y = pts(&[1, 3, 4]);
        let (fix, ker) = ChainMap::partial_identity(4, y).unwrap().fix_and_kernel();
        assert_eq!(fix, y);
        assert_eq!(ker, vec![pts(&[1]), pts(&[3]), pts(&[4])]);

        assert_eq!(m("n=4:[1,0,3,2]").fix(), pts(&[1, 3]));

        let ker = m("n=5:[1,1,2,2,1]").kernel();
        assert_eq!(ker, vec![pts(&[1, 2, 5]), pts(&[3, 4])]);
    }

    #[test]
    fn opd_examples() {
        assert_eq!(m("n=7:[0,0,3,0,5,0,3]").opd(), Ok(6));
        assert_eq!(m("n=5:[1,1,2,3,5]").opd(), Ok(5));
        // scan m = 4, 3, 2 on ξ_{1,2}^3: only the prefix X_2 is order-preserving
        assert_eq!(m("n=4:[1,2,1,0]").opd(), Ok(2));
        assert!(matches!(
            m("n=7:[0,0,3,0,5,0,4]").opd(),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            ChainMap::empty(3).unwrap().opd(),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn ord_examples() {
        assert_eq!(m("n=7:[0,0,3,0,5,0,4]").ord_degree(), Ok(4));
        assert_eq!(m("n=4:[0,2,1,4]").ord_degree(), Ok(3));
        assert_eq!(m("n=9:[0,0,0,0,5,0,7,6,0]").ord_degree(), Ok(6));
        assert!(matches!(
            m("n=7:[0,0,3,0,5,0,3]").ord_degree(),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn rejects_bad_words() {
        assert!(ChainMap::new(3, &[1, 4, 0]).is_err());
        assert!(ChainMap::new(3, &[1, 2]).is_err());
        assert!(ChainMap::new(0, &[]).is_err());
        assert!(ChainMap::new(MAX_N + 1, &[0; MAX_N + 1]).is_err());
    }

    #[test]
    fn canonical_order_is_lexicographic() {
        let mut v = [m("n=3:[1,0,0]"),
            m("n=3:[0,2,3]"),
            m("n=3:[0,2,1]"),
            m("n=3:[1,0,3]")];
        v.sort();
        let words: Vec<_> = v.iter().map(|a| a.image_word()).collect();
        let mut expected = words.clone();
        expected.sort();
        assert_eq!(words, expected);
    }
}
