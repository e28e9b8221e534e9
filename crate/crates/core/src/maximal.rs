//! Maximal subsemigroups of `PORD(n,r)`, `IORD(n,r)` and the full monoids.
//!
//! Each maximal subsemigroup is described by the set it removes from its
//! ambient semigroup. Verification checks that the complement is closed,
//! proper, and that adding back any single removed element regenerates the
//! whole ambient.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::closure::is_generating;
use crate::enumerate::{enumerate_class, CountReport, Limits};
use crate::error::{param, Error, Result};
use crate::families::{
    f_params, family, g_params, gamma, gamma_rs, h_params, iord_rank_formula, pord_rank_formula,
    xi, FamilyLabel, Regime,
};
use crate::points::PointSet;
use crate::transforms::{ChainMap, Class};

/// Ambients up to this size get a full multiplication table.
pub const TABLE_LIMIT: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Pord,
    Iord,
}

impl Side {
    pub fn class(self) -> Class {
        match self {
            Side::Pord => Class::Pord,
            Side::Iord => Class::Iord,
        }
    }

    fn starred(self) -> Class {
        match self {
            Side::Pord => Class::PordStar,
            Side::Iord => Class::IordStar,
        }
    }

    pub fn claimed(self) -> FamilyLabel {
        match self {
            Side::Pord => FamilyLabel::ClaimedPord,
            Side::Iord => FamilyLabel::ClaimedIord,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Pord => "pord",
            Side::Iord => "iord",
        })
    }
}

impl FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "pord" => Ok(Side::Pord),
            "iord" => Ok(Side::Iord),
            other => Err(Error::Parse {
                pos: 0,
                msg: format!("unknown side {other:?}"),
            }),
        }
    }
}

/// `PORD(n,r)` or `IORD(n,r)`; `r = n` is the full monoid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Ambient {
    pub side: Side,
    pub n: usize,
    pub r: usize,
}

impl fmt::Display for Ambient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = self.side.class();
        if self.r == self.n {
            write!(f, "{name}_{}", self.n)
        } else {
            write!(f, "{name}({},{})", self.n, self.r)
        }
    }
}

/// What a maximal subsemigroup removes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "variant", content = "params")]
pub enum Variant {
    /// A single idempotent of `E_r`.
    RemoveIdempotent { epsilon: ChainMap },
    /// Every `a` with `a|[p,q+1] = ξ_{p,q}^r`.
    RemoveFpq { p: usize, q: usize },
    /// Every starred `a` with `a|dom(γ_{p,q}) = γ_{p,q}`.
    RemoveGpq { p: usize, q: usize },
    /// Every starred `a` with `a|dom(γ) = γ` for `γ = γ_{p,q}^{r,s}`.
    RemoveHpqs { p: usize, q: usize, s: usize },
    /// The injective members of the `RemoveHpqs` class.
    RemoveHIpqs { p: usize, q: usize, s: usize },
    /// A single undecomposable generator.
    RemoveSingleGenerator { alpha: ChainMap },
    /// Only the identity: what remains is the ideal of maps with image size below `n`.
    IdealPORD,
    /// `T ∪ {1_n}` for a maximal subsemigroup `T` of the ideal.
    AdjoinIdentity(Box<Variant>),
}

impl Variant {
    pub fn name(&self) -> &'static str {
        match self {
            Variant::RemoveIdempotent { .. } => "RemoveIdempotent",
            Variant::RemoveFpq { .. } => "RemoveFpq",
            Variant::RemoveGpq { .. } => "RemoveGpq",
            Variant::RemoveHpqs { .. } => "RemoveHpqs",
            Variant::RemoveHIpqs { .. } => "RemoveHIpqs",
            Variant::RemoveSingleGenerator { .. } => "RemoveSingleGenerator",
            Variant::IdealPORD => "IdealPORD",
            Variant::AdjoinIdentity(_) => "AdjoinIdentity",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Variant::RemoveIdempotent { epsilon } => write!(f, "RemoveIdempotent({epsilon})"),
            Variant::RemoveFpq { p, q } => write!(f, "RemoveFpq(p={p},q={q})"),
            Variant::RemoveGpq { p, q } => write!(f, "RemoveGpq(p={p},q={q})"),
            Variant::RemoveHpqs { p, q, s } => write!(f, "RemoveHpqs(p={p},q={q},s={s})"),
            Variant::RemoveHIpqs { p, q, s } => write!(f, "RemoveHIpqs(p={p},q={q},s={s})"),
            Variant::RemoveSingleGenerator { alpha } => write!(f, "RemoveSingleGenerator({alpha})"),
            Variant::IdealPORD => f.write_str("IdealPORD"),
            Variant::AdjoinIdentity(inner) => write!(f, "AdjoinIdentity({inner})"),
        }
    }
}

/// One claimed maximal subsemigroup.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct MaximalDescriptor {
    pub ambient: Ambient,
    pub variant: Variant,
}

impl fmt::Display for MaximalDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} \\ {}", self.ambient, self.variant)
    }
}

fn check_ambient(a: Ambient) -> Result<Regime> {
    if a.r > a.n {
        return Err(param(format!("r={} exceeds n={}", a.r, a.n)));
    }
    Regime::of(a.n, a.r)
}

/// Every claimed maximal subsemigroup of `ambient`, in a fixed order.
pub fn descriptors(ambient: Ambient, limits: &Limits) -> Result<Vec<MaximalDescriptor>> {
    let Ambient { side, n, r } = ambient;
    let regime = check_ambient(ambient)?;
    let wrap = |variant| MaximalDescriptor { ambient, variant };
    if regime == Regime::Full {
        let inner = descriptors(Ambient { side, n, r: n - 1 }, limits)?;
        return Ok(match side {
            Side::Pord => std::iter::once(Variant::IdealPORD)
                .chain(
                    inner
                        .into_iter()
                        .map(|d| Variant::AdjoinIdentity(Box::new(d.variant))),
                )
                .map(wrap)
                .collect(),
            Side::Iord => family(n, r, FamilyLabel::ClaimedIord, limits)?
                .elements
                .into_iter()
                .map(|alpha| wrap(Variant::RemoveSingleGenerator { alpha }))
                .collect(),
        });
    }
    let mut out = Vec::new();
    match (side, regime) {
        (Side::Pord, _) => {
            for epsilon in family(n, r, FamilyLabel::E, limits)?.elements {
                out.push(wrap(Variant::RemoveIdempotent { epsilon }));
            }
            out.extend(
                f_params(n, r)
                    .into_iter()
                    .map(|(p, q)| wrap(Variant::RemoveFpq { p, q })),
            );
            if regime == Regime::Large {
                out.extend(
                    g_params(n)
                        .into_iter()
                        .map(|(p, q)| wrap(Variant::RemoveGpq { p, q })),
                );
            } else {
                out.extend(
                    h_params(n, r)
                        .into_iter()
                        .map(|(p, q, s)| wrap(Variant::RemoveHpqs { p, q, s })),
                );
            }
        }
        (Side::Iord, Regime::Large) => {
            for alpha in family(n, r, FamilyLabel::ClaimedIord, limits)?.elements {
                out.push(wrap(Variant::RemoveSingleGenerator { alpha }));
            }
        }
        (Side::Iord, _) => {
            let mut singles = Vec::new();
            for label in [FamilyLabel::EI, FamilyLabel::FI, FamilyLabel::GI] {
                singles.extend(family(n, r, label, limits)?.elements);
            }
            for k in 2..r {
                singles.extend(family(n, r, FamilyLabel::GIc(k), limits)?.elements);
            }
            singles.sort_unstable();
            out.extend(
                singles
                    .into_iter()
                    .map(|alpha| wrap(Variant::RemoveSingleGenerator { alpha })),
            );
            out.extend(
                h_params(n, r)
                    .into_iter()
                    .map(|(p, q, s)| wrap(Variant::RemoveHIpqs { p, q, s })),
            );
        }
    }
    Ok(out)
}

/// An enumerated ambient semigroup with an index and, when small enough, a
/// multiplication table.
pub struct AmbientSet {
    pub ambient: Ambient,
    pub elements: Vec<ChainMap>,
    index: FxHashMap<ChainMap, u32>,
    table: Option<Vec<u16>>,
}

impl AmbientSet {
    pub fn build(ambient: Ambient, limits: &Limits) -> Result<Self> {
        check_ambient(ambient)?;
        let elements = enumerate_class(ambient.n, ambient.side.class(), Some(ambient.r), limits)?;
        let index: FxHashMap<ChainMap, u32> = elements
            .iter()
            .enumerate()
            .map(|(i, &a)| (a, i as u32))
            .collect();
        let table = (elements.len() <= TABLE_LIMIT).then(|| {
            elements
                .par_iter()
                .flat_map_iter(|&a| elements.iter().map(move |&b| a.then(b)))
                .map(|z| index[&z] as u16)
                .collect()
        });
        Ok(AmbientSet {
            ambient,
            elements,
            index,
            table,
        })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, a: &ChainMap) -> Option<usize> {
        self.index.get(a).map(|&i| i as usize)
    }

    #[inline]
    fn product(&self, i: usize, j: usize) -> usize {
        match &self.table {
            Some(t) => t[i * self.elements.len() + j] as usize,
            None => self.index[&self.elements[i].then(self.elements[j])] as usize,
        }
    }

    /// Whether the complement of `removed` is closed under multiplication.
    pub fn complement_is_closed(&self, removed: &[bool]) -> bool {
        let kept: Vec<usize> = (0..self.len()).filter(|&i| !removed[i]).collect();
        kept.iter()
            .all(|&i| kept.iter().all(|&j| !removed[self.product(i, j)]))
    }

    /// Whether the complement of `removed`, assumed closed, together with
    /// element `x` generates the whole ambient.
    pub fn regenerates(&self, removed: &[bool], x: usize) -> bool {
        let mut member: Vec<bool> = removed.iter().map(|r| !r).collect();
        let mut known: Vec<usize> = (0..self.len()).filter(|&i| member[i]).collect();
        if member[x] {
            return known.len() == self.len();
        }
        member[x] = true;
        known.push(x);
        let mut frontier = vec![x];
        while !frontier.is_empty() && known.len() < self.len() {
            let mut next = Vec::new();
            for &f in &frontier {
                for &k in &known {
                    for z in [self.product(f, k), self.product(k, f)] {
                        if !member[z] {
                            member[z] = true;
                            next.push(z);
                        }
                    }
                }
            }
            known.extend_from_slice(&next);
            frontier = next;
        }
        known.len() == self.len()
    }
}

fn restricts_to(a: ChainMap, dom: PointSet, target: ChainMap) -> bool {
    a.restrict(dom).is_ok_and(|b| b == target)
}

/// The elements of `amb` removed by `d`, in canonical order.
pub fn removal_class(d: &MaximalDescriptor, amb: &AmbientSet) -> Result<Vec<ChainMap>> {
    if d.ambient != amb.ambient {
        return Err(param(format!(
            "descriptor for {} used with ambient {}",
            d.ambient, amb.ambient
        )));
    }
    let Ambient { side, n, r } = d.ambient;
    let regime = check_ambient(d.ambient)?;
    let single = |a: ChainMap| -> Result<Vec<ChainMap>> {
        amb.index_of(&a)
            .ok_or_else(|| param(format!("{a} is not in {}", amb.ambient)))?;
        Ok(vec![a])
    };
    let pool: Vec<ChainMap> = match (&d.variant, regime) {
        (Variant::IdealPORD | Variant::AdjoinIdentity(_), Regime::Full) if side == Side::Pord => {
            amb.elements
                .iter()
                .copied()
                .filter(|a| a.image_size() < n)
                .collect()
        }
        (Variant::IdealPORD | Variant::AdjoinIdentity(_), _) => {
            return Err(param(format!(
                "{} only applies to PORD_n",
                d.variant.name()
            )));
        }
        _ => amb.elements.clone(),
    };
    let inner_r = if regime == Regime::Full { n - 1 } else { r };
    let inner_regime = Regime::of(n, inner_r)?;
    let starred = side.starred();
    let filter_restrict =
        |dom: PointSet, target: ChainMap, need_star: Option<Class>| -> Vec<ChainMap> {
            pool.iter()
                .copied()
                .filter(|&a| {
                    need_star.is_none_or(|c| c.contains(&a.classify()))
                        && restricts_to(a, dom, target)
                })
                .collect()
        };
    let class_of = |v: &Variant| -> Result<Vec<ChainMap>> {
        Ok(match *v {
            Variant::RemoveIdempotent { epsilon } => {
                if side != Side::Pord
                    || !family(n, inner_r, FamilyLabel::E, &Limits::default().with_cap(n))?
                        .contains(&epsilon)
                {
                    return Err(param(format!("{epsilon} is not in E_{inner_r}")));
                }
                single(epsilon)?
            }
            Variant::RemoveFpq { p, q } => {
                if side != Side::Pord || !f_params(n, inner_r).contains(&(p, q)) {
                    return Err(param(format!("RemoveFpq(p={p},q={q}) out of range")));
                }
                filter_restrict(PointSet::interval(p, q + 1), xi(n, inner_r, p, q)?, None)
            }
            Variant::RemoveGpq { p, q } => {
                if side != Side::Pord
                    || inner_regime != Regime::Large
                    || !g_params(n).contains(&(p, q))
                {
                    return Err(param(format!("RemoveGpq(p={p},q={q}) out of range")));
                }
                let g = gamma(n, p, q)?;
                filter_restrict(g.domain(), g, Some(starred))
            }
            Variant::RemoveHpqs { p, q, s } | Variant::RemoveHIpqs { p, q, s } => {
                let want = if matches!(v, Variant::RemoveHpqs { .. }) {
                    Side::Pord
                } else {
                    Side::Iord
                };
                if side != want
                    || inner_regime != Regime::Small
                    || !h_params(n, inner_r).contains(&(p, q, s))
                {
                    return Err(param(format!("{v} out of range")));
                }
                let g = gamma_rs(n, inner_r, p, q, s)?;
                filter_restrict(g.domain(), g, Some(starred))
            }
            Variant::RemoveSingleGenerator { alpha } => {
                let claimed = family(n, r, side.claimed(), &Limits::default().with_cap(n))?;
                if side != Side::Iord || !claimed.contains(&alpha) {
                    return Err(param(format!("{alpha} is not a claimed IORD generator")));
                }
                single(alpha)?
            }
            Variant::IdealPORD => single(ChainMap::identity(n)?)?,
            Variant::AdjoinIdentity(_) => unreachable!("handled by the caller"),
        })
    };
    match &d.variant {
        Variant::AdjoinIdentity(inner)
            if !matches!(**inner, Variant::AdjoinIdentity(_) | Variant::IdealPORD) =>
        {
            class_of(inner)
        }
        Variant::AdjoinIdentity(_) => Err(param("nested AdjoinIdentity")),
        v => class_of(v),
    }
}

/// Verification outcome for one descriptor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MaximalReport {
    pub descriptor: MaximalDescriptor,
    pub removed: usize,
    pub closed: bool,
    pub proper: bool,
    pub maximal: bool,
}

impl MaximalReport {
    pub fn passed(&self) -> bool {
        self.closed && self.proper && self.maximal
    }
}

fn mask(amb: &AmbientSet, class: &[ChainMap]) -> Vec<bool> {
    let mut m = vec![false; amb.len()];
    for a in class {
        m[amb.index_of(a).expect("class lies in the ambient")] = true;
    }
    m
}

/// Checks closure, properness and maximality of the complement of `d`.
///
/// Maximality tries every removed element on its own; it is skipped (and
/// reported false) when the complement is not closed.
pub fn verify_maximal(d: &MaximalDescriptor, amb: &AmbientSet) -> Result<MaximalReport> {
    let class = removal_class(d, amb)?;
    let removed = mask(amb, &class);
    let closed = amb.complement_is_closed(&removed);
    let proper = !class.is_empty();
    let maximal = closed
        && proper
        && class
            .iter()
            .all(|a| amb.regenerates(&removed, amb.index_of(a).unwrap()));
    Ok(MaximalReport {
        descriptor: d.clone(),
        removed: class.len(),
        closed,
        proper,
        maximal,
    })
}

/// Verifies every descriptor of `ambient`, in parallel over descriptors.
pub fn verify_all(ambient: Ambient, limits: &Limits) -> Result<Vec<MaximalReport>> {
    let amb = AmbientSet::build(ambient, limits)?;
    let ds = descriptors(ambient, limits)?;
    log::info!(
        "verifying {} maximal subsemigroups of {ambient} ({} elements)",
        ds.len(),
        amb.len()
    );
    ds.par_iter().map(|d| verify_maximal(d, &amb)).collect()
}

/// Rank evidence for `PORD(n,r)` / `IORD(n,r)` (or the full monoid when `r = n`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankReport {
    pub side: Side,
    pub n: usize,
    pub r: usize,
    pub formula_value: Option<u64>,
    /// Sizes of the component families of the claimed generating set.
    pub component_sizes: Vec<(String, u64)>,
    pub claimed_size: u64,
    pub generates: bool,
    pub class_count: u64,
    pub classes_disjoint: bool,
    pub complements_closed: bool,
    pub complements_proper: bool,
    #[serde(rename = "match")]
    pub matches: bool,
}

impl RankReport {
    pub fn as_count_report(&self) -> CountReport {
        let label = format!("rank {}", self.side.class());
        CountReport::new(
            self.n,
            Some(self.r),
            &label,
            self.class_count,
            self.formula_value,
        )
    }
}

/// Closed-form rank, generation by the claimed set, and a lower bound from
/// pairwise disjoint necessity classes (each the complement of a proper
/// subsemigroup, so every generating set meets each of them).
pub fn necessity_rank_check(n: usize, r: usize, side: Side, limits: &Limits) -> Result<RankReport> {
    let ambient = Ambient { side, n, r };
    let regime = check_ambient(ambient)?;
    let formula_value = match side {
        Side::Pord => pord_rank_formula(n, r),
        Side::Iord => iord_rank_formula(n, r),
    };
    let claimed = family(n, r, side.claimed(), limits)?;
    let inner_r = if regime == Regime::Full { n - 1 } else { r };
    let mut labels = match side {
        Side::Pord => vec![FamilyLabel::E, FamilyLabel::F],
        Side::Iord => vec![FamilyLabel::EI, FamilyLabel::FI, FamilyLabel::GI],
    };
    if side == Side::Iord {
        labels.extend((2..inner_r).map(FamilyLabel::GIc));
    }
    labels.push(if Regime::of(n, inner_r)? == Regime::Small {
        FamilyLabel::H
    } else {
        FamilyLabel::G
    });
    let mut component_sizes = Vec::new();
    for label in labels {
        component_sizes.push((
            label.to_string(),
            family(n, inner_r, label, limits)?.len() as u64,
        ));
    }
    if regime == Regime::Full {
        component_sizes.push(("1_n".to_string(), 1));
    }

    let amb = AmbientSet::build(ambient, limits)?;
    let generates = is_generating(&claimed.elements, &amb.elements, limits)?;
    let ds = descriptors(ambient, limits)?;
    let classes: Vec<Vec<bool>> = ds
        .par_iter()
        .map(|d| removal_class(d, &amb).map(|c| mask(&amb, &c)))
        .collect::<Result<_>>()?;
    let mut hits = vec![0u32; amb.len()];
    for c in &classes {
        for (h, &x) in hits.iter_mut().zip(c) {
            *h += x as u32;
        }
    }
    let classes_disjoint = hits.iter().all(|&h| h <= 1);
    let complements_proper = classes.iter().all(|c| c.iter().any(|&x| x));
    let complements_closed = classes.par_iter().all(|c| amb.complement_is_closed(c));
    let class_count = ds.len() as u64;
    let component_sum: u64 = component_sizes.iter().map(|(_, c)| c).sum();
    let claimed_size = claimed.len() as u64;
    let arithmetic = formula_value.is_none_or(|f| {
        f == component_sum && f == claimed_size && f == class_count
    });
    let matches =
        arithmetic && generates && classes_disjoint && complements_closed && complements_proper;
    Ok(RankReport {
        side,
        n,
        r,
        formula_value,
        component_sizes,
        claimed_size,
        generates,
        class_count,
        classes_disjoint,
        complements_closed,
        complements_proper,
        matches,
    })
}
