//! Subsemigroup closure, generation tests and undecomposable elements.
//!
//! The closure is a semi-naive saturation: each round multiplies the
//! frontier (elements first seen in the previous round) by everything known
//! on both sides. Every product of two older elements was already formed in
//! an earlier round, so nothing is missed. Within a round the products are
//! computed in parallel and merged at the barrier; each new element records
//! the smallest `(left, right)` pair that produced it in that round, so the
//! result does not depend on the worker schedule.

use rayon::prelude::*;
use rustc_hash::{FxHashMap, FxHashSet};

use crate::enumerate::{enumerate_class, Limits};
use crate::error::{param, Error, Result};
use crate::families::gamma;
use crate::points::PointSet;
use crate::transforms::{ChainMap, Class};

/// A finite semigroup of partial maps together with how it was generated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemigroupSet {
    pub n: usize,
    /// All elements, in canonical order.
    pub elements: Vec<ChainMap>,
    /// Generators, in canonical order.
    pub generators: Vec<ChainMap>,
    /// For every non-generator, indices into `elements` of a pair whose
    /// product it is. Both factors were found strictly earlier.
    pub provenance: Vec<Option<(u32, u32)>>,
}

impl SemigroupSet {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, a: &ChainMap) -> Option<usize> {
        self.elements.binary_search(a).ok()
    }

    pub fn contains(&self, a: &ChainMap) -> bool {
        self.index_of(a).is_some()
    }

    /// Rebuilds element `i` by multiplying out its provenance down to generators.
    pub fn replay(&self, i: usize) -> ChainMap {
        match self.provenance[i] {
            None => self.elements[i],
            Some((l, r)) => self.replay(l as usize).then(self.replay(r as usize)),
        }
    }

    /// Whether every product of two elements is again an element.
    pub fn is_closed(&self) -> bool {
        let set: FxHashSet<ChainMap> = self.elements.iter().copied().collect();
        self.elements
            .par_iter()
            .all(|&a| self.elements.iter().all(|&b| set.contains(&a.then(b))))
    }
}

type Pair = (ChainMap, ChainMap);

fn check_uniform(maps: &[ChainMap], n: usize) -> Result<()> {
    match maps.iter().find(|a| a.n() != n) {
        Some(a) => Err(Error::SizeMismatch {
            left: n,
            right: a.n(),
        }),
        None => Ok(()),
    }
}

fn keep_min(map: &mut FxHashMap<ChainMap, Pair>, z: ChainMap, pair: Pair) {
    map.entry(z)
        .and_modify(|p| *p = (*p).min(pair))
        .or_insert(pair);
}

/// Saturates `base ∪ frontier`, assuming `base` is already closed.
///
/// Stops early once the set holds `stop_at` elements.
fn saturate(
    base: &[ChainMap],
    frontier: Vec<ChainMap>,
    limits: &Limits,
    stop_at: Option<usize>,
) -> Result<(Vec<ChainMap>, FxHashMap<ChainMap, Pair>)> {
    let mut known: Vec<ChainMap> = base.to_vec();
    let mut seen: FxHashSet<ChainMap> = known.iter().copied().collect();
    let mut frontier: Vec<ChainMap> = frontier.into_iter().filter(|a| seen.insert(*a)).collect();
    let mut provenance: FxHashMap<ChainMap, Pair> = FxHashMap::default();
    let mut round = 0;
    while !frontier.is_empty() {
        known.extend_from_slice(&frontier);
        if stop_at.is_some_and(|s| known.len() >= s) {
            break;
        }
        round += 1;
        let found = frontier
            .par_iter()
            .fold(FxHashMap::default, |mut acc, &f| {
                for &k in &known {
                    let z = f.then(k);
                    if !seen.contains(&z) {
                        keep_min(&mut acc, z, (f, k));
                    }
                    let z = k.then(f);
                    if !seen.contains(&z) {
                        keep_min(&mut acc, z, (k, f));
                    }
                }
                acc
            })
            .reduce(FxHashMap::default, |mut a, b| {
                for (z, pair) in b {
                    keep_min(&mut a, z, pair);
                }
                a
            });
        if known.len() + found.len() > limits.element_cap {
            return Err(Error::Resource(format!(
                "closure exceeded the element cap {} in round {round}",
                limits.element_cap
            )));
        }
        log::debug!(
            "closure round {round}: {} known, {} new",
            known.len(),
            found.len()
        );
        let mut next: Vec<ChainMap> = found.keys().copied().collect();
        next.sort_unstable();
        seen.extend(next.iter().copied());
        provenance.extend(found);
        frontier = next;
    }
    known.sort_unstable();
    Ok((known, provenance))
}

fn assemble(
    n: usize,
    elements: Vec<ChainMap>,
    generators: Vec<ChainMap>,
    pairs: &FxHashMap<ChainMap, Pair>,
    inherited: Option<&SemigroupSet>,
) -> SemigroupSet {
    let index = |a: &ChainMap| elements.binary_search(a).expect("factor is an element") as u32;
    let provenance = elements
        .iter()
        .map(|z| {
            if let Some((l, r)) = pairs.get(z) {
                return Some((index(l), index(r)));
            }
            let base = inherited?;
            let (l, r) = base.provenance[base.index_of(z)?]?;
            Some((
                index(&base.elements[l as usize]),
                index(&base.elements[r as usize]),
            ))
        })
        .collect();
    SemigroupSet {
        n,
        elements,
        generators,
        provenance,
    }
}

fn prepare(gens: &[ChainMap]) -> Result<(usize, Vec<ChainMap>)> {
    let n = gens
        .first()
        .ok_or_else(|| param("closure needs at least one generator"))?
        .n();
    check_uniform(gens, n)?;
    let mut g = gens.to_vec();
    g.sort_unstable();
    g.dedup();
    Ok((n, g))
}

/// The subsemigroup generated by `gens`.
pub fn closure(gens: &[ChainMap], limits: &Limits) -> Result<SemigroupSet> {
    let (n, g) = prepare(gens)?;
    let (elements, pairs) = saturate(&[], g.clone(), limits, None)?;
    Ok(assemble(n, elements, g, &pairs, None))
}

/// The subsemigroup generated by a closed set `base` and `extra`.
pub fn extend(base: &SemigroupSet, extra: &[ChainMap], limits: &Limits) -> Result<SemigroupSet> {
    check_uniform(extra, base.n)?;
    let mut gens = base.generators.clone();
    gens.extend(extra.iter().filter(|a| !base.contains(a)));
    gens.sort_unstable();
    gens.dedup();
    let (elements, pairs) = saturate(&base.elements, extra.to_vec(), limits, None)?;
    Ok(assemble(base.n, elements, gens, &pairs, Some(base)))
}

/// Whether `gens` generates exactly the set `target`.
pub fn is_generating(gens: &[ChainMap], target: &[ChainMap], limits: &Limits) -> Result<bool> {
    let (_, g) = prepare(gens)?;
    let mut target = target.to_vec();
    target.sort_unstable();
    target.dedup();
    if g.iter().any(|a| target.binary_search(a).is_err()) {
        return Ok(false);
    }
    let (elements, _) = saturate(&[], g, limits, Some(target.len() + 1))?;
    Ok(elements == target)
}

/// Elements `z` with no factorisation `z = xy` inside `elements` where both
/// `x ≠ z` and `y ≠ z`. One pass over all products.
pub fn undecomposables(elements: &[ChainMap]) -> Vec<ChainMap> {
    let index: FxHashMap<ChainMap, usize> =
        elements.iter().enumerate().map(|(i, &a)| (a, i)).collect();
    let decomposable = elements
        .par_iter()
        .fold(
            || vec![false; elements.len()],
            |mut hit, &x| {
                for &y in elements {
                    let z = x.then(y);
                    if z != x && z != y {
                        if let Some(&i) = index.get(&z) {
                            hit[i] = true;
                        }
                    }
                }
                hit
            },
        )
        .reduce(
            || vec![false; elements.len()],
            |a, b| a.into_iter().zip(b).map(|(p, q)| p || q).collect(),
        );
    let mut out: Vec<ChainMap> = elements
        .iter()
        .zip(decomposable)
        .filter(|(_, d)| !d)
        .map(|(&a, _)| a)
        .collect();
    out.sort_unstable();
    out
}

/// Whether `z = x·y` with neither factor equal to `z`.
pub fn is_proper_factorisation(z: ChainMap, x: ChainMap, y: ChainMap) -> bool {
    x.n() == z.n() && y.n() == z.n() && x.then(y) == z && x != z && y != z
}

/// Whether `z` has a proper factorisation inside `elements`.
pub fn is_decomposable_in(z: ChainMap, elements: &[ChainMap]) -> bool {
    elements
        .par_iter()
        .any(|&x| x != z && elements.iter().any(|&y| y != z && x.then(y) == z))
}

/// Outcome of testing `γ_{p,q}` for undecomposability in `PORD_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct GammaCheck {
    pub n: usize,
    pub p: usize,
    pub q: usize,
    /// `dom(γ_{p,q}) = [p, n]`.
    pub domain_is_interval: bool,
    /// `q − 1 ∈ dom(γ_{p,q})` and `n ∈ dom(γ_{p,q})`.
    pub tail_points_in_domain: bool,
    /// Brute-force undecomposability inside `PORD_n`.
    pub undecomposable: bool,
}

impl GammaCheck {
    pub fn agrees(&self) -> bool {
        self.domain_is_interval == self.undecomposable
            && self.tail_points_in_domain == self.undecomposable
    }
}

/// Brute-force undecomposability of `γ_{p,q}` in `PORD_n` next to the domain criterion.
pub fn check_gamma_undecomposable(
    n: usize,
    p: usize,
    q: usize,
    limits: &Limits,
) -> Result<GammaCheck> {
    let pord = enumerate_class(n, Class::Pord, None, limits)?;
    check_gamma_undecomposable_in(n, p, q, &pord)
}

/// As [`check_gamma_undecomposable`] with a precomputed `PORD_n`.
pub fn check_gamma_undecomposable_in(
    n: usize,
    p: usize,
    q: usize,
    pord: &[ChainMap],
) -> Result<GammaCheck> {
    let g = gamma(n, p, q)?;
    let dom = g.domain();
    Ok(GammaCheck {
        n,
        p,
        q,
        domain_is_interval: dom == PointSet::interval(p, n),
        tail_points_in_domain: dom.contains(q - 1) && dom.contains(n),
        undecomposable: !is_decomposable_in(g, pord),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(s: &str) -> ChainMap {
        s.parse().unwrap()
    }

    #[test]
    fn identity_closure_is_singleton() {
        let id = ChainMap::identity(4).unwrap();
        let s = closure(&[id], &Limits::default()).unwrap();
        assert_eq!(s.elements, vec![id]);
        assert_eq!(s.provenance, vec![None]);
    }

    #[test]
    fn closure_of_a_shift() {
        // 2 -> 1 squares to the empty map
        let a = m("n=3:[0,1,0]");
        let s = closure(&[a], &Limits::default()).unwrap();
        assert_eq!(s.elements, vec![m("n=3:[0,0,0]"), a]);
        assert!(s.is_closed());
        assert_eq!(s.replay(0), m("n=3:[0,0,0]"));
    }

    #[test]
    fn element_cap() {
        let gens =
            crate::family(5, 4, crate::FamilyLabel::ClaimedPord, &Limits::default()).unwrap();
        let tight = Limits {
            element_cap: 50,
            ..Limits::default()
        };
        assert!(matches!(
            closure(&gens.elements, &tight),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn empty_and_mixed_generators() {
        assert!(matches!(
            closure(&[], &Limits::default()),
            Err(Error::Parameter(_))
        ));
        let mixed = [
            ChainMap::identity(3).unwrap(),
            ChainMap::identity(4).unwrap(),
        ];
        assert!(matches!(
            closure(&mixed, &Limits::default()),
            Err(Error::SizeMismatch { .. })
        ));
    }

    #[test]
    fn extend_keeps_provenance() {
        let lim = Limits::default();
        let base = closure(&[m("n=4:[1,2,3,0]")], &lim).unwrap();
        let s = extend(&base, &[m("n=4:[0,1,2,3]")], &lim).unwrap();
        assert!(s.is_closed());
        for i in 0..s.len() {
            assert_eq!(s.replay(i), s.elements[i]);
        }
    }

    #[test]
    fn gamma_undecomposability_examples() {
        let lim = Limits::default();
        let c = check_gamma_undecomposable(4, 2, 4, &lim).unwrap();
        assert!(c.undecomposable && c.agrees());
        let c = check_gamma_undecomposable(5, 1, 3, &lim).unwrap();
        assert!(!c.undecomposable && c.agrees());
        let c = check_gamma_undecomposable(4, 1, 3, &lim).unwrap();
        assert!(!c.undecomposable && c.agrees());
    }

    #[test]
    fn displayed_decomposition() {
        let y = PointSet::try_from_points([5, 7, 8]).unwrap();
        let x = ChainMap::partial_identity(9, y).unwrap();
        let right = m("n=9:[0,0,0,0,5,4,7,6,0]");
        assert!(is_proper_factorisation(
            m("n=9:[0,0,0,0,5,0,7,6,0]"),
            x,
            right
        ));
    }
}
