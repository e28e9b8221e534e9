//! Named generators and generator families.
//!
//! The constructors follow the parameter ranges under which each map is an
//! element of `PORD(n,r)` or `IORD(n,r)`; anything outside those ranges is a
//! [`Error::Parameter`].

use std::fmt;

use serde::Serialize;

use crate::enumerate::{enumerate_class, Limits};
use crate::error::{param, Error, Result};
use crate::points::PointSet;
use crate::transforms::{ChainMap, Class};

/// `C(n, k)`, zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// `n − ⌊n/3⌋`, the largest image size of an orientation-reversing,
/// non-monotone, order-decreasing partial map of `X_n`.
pub fn reversing_bound(n: usize) -> usize {
    n - n / 3
}

/// Which generating set describes `PORD(n,r)` / `IORD(n,r)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `n − ⌊n/3⌋ ≤ r ≤ n − 1`: the `γ_{p,q}` family `G_n` fits inside the ideal.
    Large,
    /// `3 ≤ r < n − ⌊n/3⌋`: the truncated family `H_n^r` replaces `G_n`.
    Small,
    /// `r = n`: the whole monoid.
    Full,
}

impl Regime {
    pub fn of(n: usize, r: usize) -> Result<Regime> {
        if n < 4 {
            return Err(Error::Regime(format!(
                "n={n} < 4 has no generating-set regime"
            )));
        }
        if r == n {
            Ok(Regime::Full)
        } else if (reversing_bound(n)..n).contains(&r) {
            Ok(Regime::Large)
        } else if (3..reversing_bound(n)).contains(&r) {
            Ok(Regime::Small)
        } else {
            Err(Error::Regime(format!("r={r} outside [3,{n}] for n={n}")))
        }
    }
}

/// `ξ_{p,q}^r`: the identity on `[p,q]` with `q+1 ↦ p`.
pub fn xi(n: usize, r: usize, p: usize, q: usize) -> Result<ChainMap> {
    if !(p >= 1 && p + 2 <= n && q > p && q + 2 <= p + r && q < n) {
        return Err(param(format!(
            "xi: need 1 ≤ p ≤ n−2, p+1 ≤ q ≤ min(p+r−2, n−1); got n={n} r={r} p={p} q={q}"
        )));
    }
    ChainMap::from_pairs(n, (p..=q).map(|x| (x, x)).chain([(q + 1, p)]))
}

/// `γ_{p,q}`: fixes `p` and `q` and reverses the two blocks that follow them
/// as far as the chain allows.
pub fn gamma(n: usize, p: usize, q: usize) -> Result<ChainMap> {
    if !(p >= 1 && p + 2 <= q && q <= n) {
        return Err(param(format!(
            "gamma: need 1 ≤ p ≤ q−2 ≤ n−2; got n={n} p={p} q={q}"
        )));
    }
    let k = (p - 1).min(q - p - 1);
    let l = (q - p - 1).min(n - q);
    ChainMap::from_pairs(
        n,
        (0..=k)
            .map(|i| (p + i, p - i))
            .chain((0..=l).map(|j| (q + j, q - j))),
    )
}

/// `γ_{p,q}^{r,s}`: `γ_{p,q}` cut down to `s` points in the first block and
/// `u = min{r−s, q−p, n−q+1}` points in the second.
pub fn gamma_rs(n: usize, r: usize, p: usize, q: usize, s: usize) -> Result<ChainMap> {
    if !(p >= 1 && p + 2 <= q && q <= n) {
        return Err(param(format!(
            "gamma_rs: need 1 ≤ p ≤ q−2 ≤ n−2; got n={n} p={p} q={q}"
        )));
    }
    if !(s >= 1 && s <= p && s <= q - p && s < r) {
        return Err(param(format!(
            "gamma_rs: need 1 ≤ s ≤ min(p, q−p, r−1); got r={r} p={p} q={q} s={s}"
        )));
    }
    let u = (r - s).min(q - p).min(n - q + 1);
    ChainMap::from_pairs(
        n,
        (0..s)
            .map(|i| (p + i, p - i))
            .chain((0..u).map(|j| (q + j, q - j))),
    )
}

/// The size of the second block of `γ_{p,q}^{r,s}`.
pub fn gamma_rs_tail(n: usize, r: usize, p: usize, q: usize, s: usize) -> usize {
    (r - s).min(q - p).min(n - q + 1)
}

/// The witness attaining the maximal image size `n − ⌊n/3⌋` among
/// orientation-reversing, non-monotone, order-decreasing partial maps.
pub fn gamma_witness(n: usize) -> Result<ChainMap> {
    if n < 4 {
        return Err(param(format!("gamma_witness: need n ≥ 4, got {n}")));
    }
    let (k, i) = (n / 3, n % 3);
    let first = (k + i - 1)..=(2 * k + 2 * i - 3);
    let second = (2 * k + i)..=n;
    let pivot1 = 2 * (k + i - 1);
    let pivot2 = 2 * (2 * k + i);
    ChainMap::from_pairs(
        n,
        first
            .map(|x| (x, pivot1 - x))
            .chain(second.map(|x| (x, pivot2 - x))),
    )
}

/// `δ^a_Y`: the identity on `Y` with `a ↦ a−1`.
pub fn delta_a_y(n: usize, a: usize, y: PointSet) -> Result<ChainMap> {
    if !(2..=n).contains(&a) {
        return Err(param(format!("delta: need 2 ≤ a ≤ n; got a={a}")));
    }
    if y.contains(a - 1) || y.contains(a) || !y.is_subset(PointSet::chain(n)) {
        return Err(param(format!(
            "delta: Y={y} must avoid {{{},{a}}} and lie in X_{n}",
            a - 1
        )));
    }
    ChainMap::from_pairs(n, y.iter().map(|x| (x, x)).chain([(a, a - 1)]))
}

/// `ζ_Z`: the identity on `Z` with `max(Z)+1 ↦ min(Z)−1`.
pub fn zeta(n: usize, z: PointSet) -> Result<ChainMap> {
    let (Some(b), Some(a)) = (z.first(), z.last()) else {
        return Err(param("zeta: Z must be non-empty"));
    };
    if b == 1 || a >= n {
        return Err(param(format!("zeta: Z={z} must avoid 1 and {n}")));
    }
    ChainMap::from_pairs(n, z.iter().map(|x| (x, x)).chain([(a + 1, b - 1)]))
}

/// Index pairs `(p, q)` of `F_r` and of the classes `F^r_{p,q}`.
pub fn f_params(n: usize, r: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for p in 1..=n.saturating_sub(2) {
        for q in (p + 1)..=(p + r).saturating_sub(2).min(n - 1) {
            out.push((p, q));
        }
    }
    out
}

/// Index pairs `(p, q)` of `G_n`, i.e. `1 ≤ p ≤ q−2 ≤ n−2` without `(1, n)`.
pub fn g_params(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for p in 1..=n.saturating_sub(2) {
        for q in (p + 2)..=n {
            if (p, q) != (1, n) {
                out.push((p, q));
            }
        }
    }
    out
}

/// Index triples `(p, q, s)` of `H_n^r`.
pub fn h_params(n: usize, r: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for p in 1..=n.saturating_sub(2) {
        for q in (p + 2)..=n {
            for s in 1..=p.min(q - p).min(r.saturating_sub(1)) {
                if (q, s) != (n, 1) {
                    out.push((p, q, s));
                }
            }
        }
    }
    out
}

/// `|H_n^r|` by counting index triples, without building any map.
pub fn h_count(n: usize, r: usize) -> u64 {
    let mut count = 0u64;
    for p in 1..=n.saturating_sub(2) {
        for q in (p + 2)..=n {
            let s_max = p.min(q - p).min(r.saturating_sub(1));
            count += s_max as u64;
            if q == n && s_max >= 1 {
                count -= 1;
            }
        }
    }
    count
}

fn subsets_of_size(universe: PointSet, size: usize) -> Vec<PointSet> {
    let points = universe.to_vec();
    let mut out = Vec::new();
    if size > points.len() {
        return out;
    }
    let mut idx: Vec<usize> = (0..size).collect();
    loop {
        out.push(
            PointSet::try_from_points(idx.iter().map(|&i| points[i])).expect("subset of chain"),
        );
        let mut i = size;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + points.len() - size {
                break;
            }
        }
        idx[i] += 1;
        for j in (i + 1)..size {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Labels of the generator families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilyLabel {
    /// Idempotents of `POPD_n` with image size `r`.
    E,
    /// `ξ_{p,q}^r` maps.
    F,
    /// `γ_{p,q}` maps other than `γ_{1,n}`.
    G,
    /// `γ_{p,q}^{r,s}` maps with `(q,s) ≠ (n,1)`.
    H,
    /// Partial identities of rank `r`.
    EI,
    /// `δ^a_Y` with `|Y| = r−1`.
    FI,
    /// `ζ_Z` with `|Z| = r−1`.
    GI,
    /// `ζ_Z` with `Z` convex and `|Z| = k−1`.
    GIc(usize),
    /// The claimed minimal generating set of `PORD(n,r)`.
    ClaimedPord,
    /// The claimed minimal generating set of `IORD(n,r)`.
    ClaimedIord,
}

impl FamilyLabel {
    /// Parses a label as written on the command line (`E_r`, `H_n^r`, `GIc_k`, ...).
    pub fn parse(s: &str, k: Option<usize>) -> Result<FamilyLabel> {
        let label = match s.trim().to_ascii_uppercase().as_str() {
            "E_R" | "E" => FamilyLabel::E,
            "F_R" | "F" => FamilyLabel::F,
            "G_N" | "G" => FamilyLabel::G,
            "H_N^R" | "H_NR" | "H" => FamilyLabel::H,
            "EI_R" | "EI" => FamilyLabel::EI,
            "FI_R" | "FI" => FamilyLabel::FI,
            "GI_R" | "GI" => FamilyLabel::GI,
            "GIC_K" | "GIC" => {
                let k = k.ok_or_else(|| param("GIc_k needs k"))?;
                FamilyLabel::GIc(k)
            }
            "CLAIMED_PORD" => FamilyLabel::ClaimedPord,
            "CLAIMED_IORD" => FamilyLabel::ClaimedIord,
            other => return Err(param(format!("unknown family label {other:?}"))),
        };
        if k.is_some() && !matches!(label, FamilyLabel::GIc(_)) {
            return Err(param(format!("label {s} takes no k")));
        }
        Ok(label)
    }
}

impl fmt::Display for FamilyLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyLabel::E => f.write_str("E_r"),
            FamilyLabel::F => f.write_str("F_r"),
            FamilyLabel::G => f.write_str("G_n"),
            FamilyLabel::H => f.write_str("H_n^r"),
            FamilyLabel::EI => f.write_str("EI_r"),
            FamilyLabel::FI => f.write_str("FI_r"),
            FamilyLabel::GI => f.write_str("GI_r"),
            FamilyLabel::GIc(k) => write!(f, "GIc_{k}"),
            FamilyLabel::ClaimedPord => f.write_str("CLAIMED_PORD"),
            FamilyLabel::ClaimedIord => f.write_str("CLAIMED_IORD"),
        }
    }
}

impl Serialize for FamilyLabel {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// An enumerated family in canonical order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeneratorFamily {
    pub label: FamilyLabel,
    pub n: usize,
    pub r: usize,
    pub elements: Vec<ChainMap>,
    /// Closed-form size, when one is known.
    pub formula_count: Option<u64>,
}

impl GeneratorFamily {
    fn new(
        label: FamilyLabel,
        n: usize,
        r: usize,
        mut elements: Vec<ChainMap>,
        formula_count: Option<u64>,
    ) -> Result<Self> {
        elements.sort_unstable();
        if let Some(w) = elements.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Inconsistency(format!(
                "{label}(n={n}, r={r}) lists {} twice",
                w[0]
            )));
        }
        if let Some(expected) = formula_count {
            if expected != elements.len() as u64 {
                return Err(Error::Inconsistency(format!(
                    "{label}(n={n}, r={r}) has {} elements, closed form says {expected}",
                    elements.len()
                )));
            }
        }
        Ok(GeneratorFamily {
            label,
            n,
            r,
            elements,
            formula_count,
        })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, a: &ChainMap) -> bool {
        self.elements.binary_search(a).is_ok()
    }
}

/// Builds the family `label` for chain size `n` and image bound `r`.
///
/// `E_r` is read off an enumeration of `POPD_n`, so `n` is subject to the
/// brute-force cap in `limits`.
pub fn family(n: usize, r: usize, label: FamilyLabel, limits: &Limits) -> Result<GeneratorFamily> {
    let (n64, r64) = (n as u64, r as u64);
    let need = |ok: bool, what: &str| {
        if ok {
            Ok(())
        } else {
            Err(param(format!("{label}: {what} (n={n}, r={r})")))
        }
    };
    match label {
        FamilyLabel::E => {
            need(r >= 1 && r <= n, "need 1 ≤ r ≤ n")?;
            let elements = enumerate_class(n, Class::Popd, Some(r), limits)?
                .into_iter()
                .filter(|a| a.image_size() == r && a.is_idempotent())
                .collect();
            GeneratorFamily::new(label, n, r, elements, Some(binomial(n64, r64) << (n - r)))
        }
        FamilyLabel::F => {
            need(r >= 3 && r <= n, "need 3 ≤ r ≤ n")?;
            let elements = f_params(n, r)
                .into_iter()
                .map(|(p, q)| xi(n, r, p, q))
                .collect::<Result<_>>()?;
            GeneratorFamily::new(
                label,
                n,
                r,
                elements,
                Some((2 * n64 - r64 - 1) * (r64 - 2) / 2),
            )
        }
        FamilyLabel::G => {
            need(n >= 3, "need n ≥ 3")?;
            let elements = g_params(n)
                .into_iter()
                .map(|(p, q)| gamma(n, p, q))
                .collect::<Result<_>>()?;
            GeneratorFamily::new(label, n, r, elements, Some(n64 * (n64 - 3) / 2))
        }
        FamilyLabel::H => {
            need(r >= 3 && r <= n, "need 3 ≤ r ≤ n")?;
            let elements = h_params(n, r)
                .into_iter()
                .map(|(p, q, s)| gamma_rs(n, r, p, q, s))
                .collect::<Result<_>>()?;
            GeneratorFamily::new(label, n, r, elements, None)
        }
        FamilyLabel::EI => {
            need(r >= 1 && r <= n, "need 1 ≤ r ≤ n")?;
            let elements = subsets_of_size(PointSet::chain(n), r)
                .into_iter()
                .map(|y| ChainMap::partial_identity(n, y))
                .collect::<Result<_>>()?;
            GeneratorFamily::new(label, n, r, elements, Some(binomial(n64, r64)))
        }
        FamilyLabel::FI => {
            need(r >= 1 && r < n, "need 1 ≤ r ≤ n−1")?;
            let mut elements = Vec::new();
            for a in 2..=n {
                let allowed = PointSet::chain(n).difference(PointSet::interval(a - 1, a));
                for y in subsets_of_size(allowed, r - 1) {
                    elements.push(delta_a_y(n, a, y)?);
                }
            }
            GeneratorFamily::new(label, n, r, elements, Some(r64 * binomial(n64 - 1, r64)))
        }
        FamilyLabel::GI => {
            need(r >= 2 && r < n, "need 2 ≤ r ≤ n−1")?;
            let elements = subsets_of_size(PointSet::interval(2, n - 1), r - 1)
                .into_iter()
                .map(|z| zeta(n, z))
                .collect::<Result<_>>()?;
            GeneratorFamily::new(label, n, r, elements, Some(binomial(n64 - 2, r64 - 1)))
        }
        FamilyLabel::GIc(k) => {
            if !(2..n).contains(&k) {
                return Err(param(format!("GIc_k: need 2 ≤ k ≤ n−1 (n={n}, k={k})")));
            }
            let elements = (2..=(n - k + 1))
                .map(|b| zeta(n, PointSet::interval(b, b + k - 2)))
                .collect::<Result<_>>()?;
            GeneratorFamily::new(label, n, r, elements, Some((n - k) as u64))
        }
        FamilyLabel::ClaimedPord => claimed(n, r, label, limits, &[FamilyLabel::E, FamilyLabel::F]),
        FamilyLabel::ClaimedIord => {
            let mut parts = vec![FamilyLabel::EI, FamilyLabel::FI];
            if r >= 2 {
                parts.push(FamilyLabel::GI);
            }
            parts.extend((2..r.min(n)).map(FamilyLabel::GIc));
            claimed(n, r, label, limits, &parts)
        }
    }
}

fn claimed(
    n: usize,
    r: usize,
    label: FamilyLabel,
    limits: &Limits,
    parts: &[FamilyLabel],
) -> Result<GeneratorFamily> {
    let regime = Regime::of(n, r)?;
    if regime == Regime::Full {
        let mut inner = family(n, n - 1, label, limits)?;
        inner.elements.push(ChainMap::identity(n)?);
        let formula = inner.formula_count.map(|c| c + 1);
        return GeneratorFamily::new(label, n, r, inner.elements, formula);
    }
    let mut elements = Vec::new();
    let mut total = 0u64;
    for &part in parts {
        let f = family(n, r, part, limits)?;
        total += f
            .formula_count
            .expect("idempotent-like parts have closed forms");
        elements.extend(f.elements);
    }
    let reversing = match regime {
        Regime::Large => FamilyLabel::G,
        _ => FamilyLabel::H,
    };
    let f = family(n, r, reversing, limits)?;
    let formula = f.formula_count.map(|c| c + total);
    elements.extend(f.elements);
    GeneratorFamily::new(label, n, r, elements, formula)
}

/// Closed-form rank of `PORD(n,r)` in the large regime (and `n²−n+1` for `r = n`).
pub fn pord_rank_formula(n: usize, r: usize) -> Option<u64> {
    let (n64, r64) = (n as u64, r as u64);
    match Regime::of(n, r).ok()? {
        Regime::Large => Some(
            (binomial(n64, r64) << (n - r))
                + (2 * n64 - r64 - 1) * (r64 - 2) / 2
                + n64 * (n64 - 3) / 2,
        ),
        Regime::Full => Some(n64 * n64 - n64 + 1),
        Regime::Small => None,
    }
}

/// Closed-form rank of `IORD(n,r)` in the large regime (and `n²−n+1` for `r = n`).
pub fn iord_rank_formula(n: usize, r: usize) -> Option<u64> {
    let (n64, r64) = (n as u64, r as u64);
    match Regime::of(n, r).ok()? {
        Regime::Large => Some(
            binomial(n64, r64) + n64 * binomial(n64 - 2, r64 - 1) + (r64 - 2) * n64
                - (r64 * r64 - r64 - 2) / 2
                + n64 * (n64 - 3) / 2,
        ),
        Regime::Full => Some(n64 * n64 - n64 + 1),
        Regime::Small => None,
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
    fn xi_examples() {
        assert_eq!(xi(4, 3, 1, 2).unwrap(), m("n=4:[1,2,1,0]"));
        assert_eq!(xi(5, 3, 3, 4).unwrap(), m("n=5:[0,0,3,4,3]"));
        assert!(xi(4, 3, 1, 3).is_err());
        assert!(xi(4, 3, 3, 4).is_err());
    }

    #[test]
    fn xi_is_idempotent_orientation_preserving() {
        for n in 4..=6 {
            for r in 3..n {
                for (p, q) in f_params(n, r) {
                    let c = xi(n, r, p, q).unwrap().classify();
                    assert!(c.idempotent && c.order_decreasing && c.orientation_preserving);
                    assert_eq!(c.image_size, q - p + 1);
                    assert!(c.image_size < r);
                }
            }
        }
    }

    #[test]
    fn gamma_examples() {
        assert_eq!(gamma(4, 1, 3).unwrap(), m("n=4:[1,0,3,2]"));
        assert_eq!(gamma(4, 2, 4).unwrap(), m("n=4:[0,2,1,4]"));
        let corner = gamma(6, 1, 6).unwrap();
        assert_eq!(corner, ChainMap::partial_identity(6, pts(&[1, 6])).unwrap());
        assert!(corner.classify().orientation_preserving);
        assert!(gamma(4, 2, 3).is_err());
    }

    #[test]
    fn gamma_rs_examples() {
        assert_eq!(
            gamma_rs(9, 5, 5, 7, 1).unwrap(),
            m("n=9:[0,0,0,0,5,0,7,6,0]")
        );
        assert_eq!(
            gamma_rs(7, 4, 3, 7, 1).unwrap(),
            ChainMap::partial_identity(7, pts(&[3, 7])).unwrap()
        );
        assert_eq!(gamma_rs(5, 3, 2, 4, 2).unwrap(), m("n=5:[0,2,1,4,0]"));
        assert!(gamma_rs(5, 3, 2, 4, 3).is_err());
    }

    #[test]
    fn gamma_witness_examples() {
        let w = gamma_witness(7).unwrap();
        assert_eq!(w, m("n=7:[0,2,1,0,5,4,3]"));
        for n in 4..=12 {
            let w = gamma_witness(n).unwrap();
            assert_eq!(w.image_size(), n - n / 3, "n={n}");
            assert!(Class::PrdStar.contains(&w.classify()), "n={n}");
        }
        let c = gamma_witness(6).unwrap().classify();
        assert!(c.orientation_reversing && !c.orientation_preserving && c.order_decreasing);
        assert!(gamma_witness(3).is_err());
    }

    #[test]
    fn delta_and_zeta_examples() {
        assert_eq!(delta_a_y(4, 3, pts(&[1])).unwrap(), m("n=4:[1,0,2,0]"));
        assert_eq!(
            delta_a_y(4, 2, PointSet::EMPTY).unwrap(),
            m("n=4:[0,1,0,0]")
        );
        assert!(delta_a_y(5, 4, pts(&[1, 2])).unwrap().classify().injective);
        assert!(delta_a_y(5, 4, pts(&[3])).is_err());

        assert_eq!(zeta(5, pts(&[2, 3])).unwrap(), m("n=5:[0,2,3,1,0]"));
        assert_eq!(zeta(5, pts(&[3])).unwrap(), m("n=5:[0,0,3,2,0]"));
        assert!(zeta(5, pts(&[1, 2])).is_err());
        assert!(zeta(5, PointSet::EMPTY).is_err());
    }

    #[test]
    fn g4_literal() {
        let g = family(4, 3, FamilyLabel::G, &Limits::default()).unwrap();
        assert_eq!(g.elements, vec![m("n=4:[0,2,1,4]"), m("n=4:[1,0,3,2]")]);
        assert_eq!(g.formula_count, Some(2));
    }

    #[test]
    fn small_counts() {
        let lim = Limits::default();
        assert_eq!(
            family(4, 3, FamilyLabel::E, &lim).unwrap().formula_count,
            Some(8)
        );
        assert_eq!(family(5, 3, FamilyLabel::H, &lim).unwrap().len(), 6);
        assert_eq!(h_count(5, 3), 6);
        assert_eq!(family(6, 4, FamilyLabel::GIc(3), &lim).unwrap().len(), 3);
    }

    #[test]
    fn h_count_matches_params() {
        for n in 3..=12 {
            for r in 3..=n {
                assert_eq!(h_count(n, r), h_params(n, r).len() as u64);
            }
        }
    }

    #[test]
    fn regimes() {
        assert_eq!(Regime::of(4, 3).unwrap(), Regime::Large);
        assert_eq!(Regime::of(5, 3).unwrap(), Regime::Small);
        assert_eq!(Regime::of(6, 4).unwrap(), Regime::Large);
        assert_eq!(Regime::of(6, 6).unwrap(), Regime::Full);
        assert!(Regime::of(6, 2).is_err());
        assert!(Regime::of(3, 3).is_err());
    }

    #[test]
    fn rank_formulas() {
        assert_eq!(pord_rank_formula(4, 3), Some(12));
        assert_eq!(pord_rank_formula(4, 4), Some(13));
        assert_eq!(iord_rank_formula(5, 4), Some(20));
        assert_eq!(iord_rank_formula(5, 5), Some(21));
        assert_eq!(pord_rank_formula(5, 3), None);
        for n in 4..=12 {
            assert_eq!(
                pord_rank_formula(n, n - 1).unwrap() + 1,
                pord_rank_formula(n, n).unwrap()
            );
            assert_eq!(
                iord_rank_formula(n, n - 1).unwrap() + 1,
                iord_rank_formula(n, n).unwrap()
            );
        }
    }

    #[test]
    fn claimed_sets_regime_checked() {
        let lim = Limits::default();
        let c = family(4, 3, FamilyLabel::ClaimedPord, &lim).unwrap();
        assert_eq!(c.formula_count, Some(12));
        assert_eq!(c.len(), 12);
        let c = family(5, 4, FamilyLabel::ClaimedIord, &lim).unwrap();
        assert_eq!(c.len(), 20);
        assert!(matches!(
            family(4, 2, FamilyLabel::ClaimedPord, &lim),
            Err(Error::Regime(_))
        ));
        let small = family(6, 3, FamilyLabel::ClaimedPord, &lim).unwrap();
        assert_eq!(small.formula_count, None);
    }

    #[test]
    fn label_parsing() {
        assert_eq!(FamilyLabel::parse("H_n^r", None).unwrap(), FamilyLabel::H);
        assert_eq!(
            FamilyLabel::parse("GIc_k", Some(3)).unwrap(),
            FamilyLabel::GIc(3)
        );
        assert!(FamilyLabel::parse("GIc_k", None).is_err());
        assert!(FamilyLabel::parse("E_r", Some(2)).is_err());
        assert!(FamilyLabel::parse("Z", None).is_err());
    }
}
