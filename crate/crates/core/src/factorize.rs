//! Three-factor decompositions `α = β·γ·δ` of orientation-reversing maps.
//!
//! `β` collapses the kernel blocks of `α` onto two staircases starting at
//! `p` and `m+1`, `γ` reverses both staircases while fixing `p` and `m+1`,
//! and `δ` relabels the result onto the image of `α`. The reversing factor
//! is a restriction `1_Y·γ₀` of a generator `γ₀`: `γ_{p,m+1}` when the image
//! bound is large and `γ_{p,m+1}^{r,s}` when it is small.
//!
//! Here `a₁,…,a_t` are the image values in domain order, `a₁ > … > a_s`
//! are taken before the first point `m+1` attaining the maximum of the
//! image, and `a_{s+1} > … > a_t` from `m+1` on. Blocks of the first value
//! that appear after the second run are collected in `A_{t+1}`.
//!
//! Order-reversing inputs have nothing before their maximum. For those the
//! smallest image value plays the role of `a₁`, with an empty first block
//! and all of its preimage in `A_{t+1}`. That keeps `β` orientation-preserving
//! but not order-preserving, which is too weak for the injective case, so
//! injective order-reversing inputs instead put every point on a single
//! staircase when the chain leaves room for it. An input that falls from
//! its maximum and returns to it is wrapped the same way, with the returning
//! block joined to the block of the maximum.

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::families::{g_params, gamma, gamma_rs, h_params, Regime};
use crate::maximal::Side;
use crate::points::PointSet;
use crate::transforms::{ChainMap, Class};

/// The generator whose restriction is the middle factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "family")]
pub enum GammaSource {
    /// `γ_{p,q}`.
    G { p: usize, q: usize },
    /// `γ_{p,q}^{r,s}`.
    H {
        p: usize,
        q: usize,
        r: usize,
        s: usize,
    },
}

impl GammaSource {
    pub fn map(self, n: usize) -> Result<ChainMap> {
        match self {
            GammaSource::G { p, q } => gamma(n, p, q),
            GammaSource::H { p, q, r, s } => gamma_rs(n, r, p, q, s),
        }
    }

    /// Whether the source is a member of `G_n` or `H_n^r` respectively.
    pub fn in_family(self, n: usize) -> bool {
        match self {
            GammaSource::G { p, q } => g_params(n).contains(&(p, q)),
            GammaSource::H { p, q, r, s } => h_params(n, r).contains(&(p, q, s)),
        }
    }
}

/// How the staircases were laid out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Layout {
    /// A non-monotone input: a run before the maximum and a run from it.
    Split,
    /// An order-reversing input with the smallest value moved to the front.
    Wrapped,
    /// An injective order-reversing input placed on the first staircase only.
    FirstRun,
    /// An injective order-reversing input placed on the second staircase only.
    SecondRun,
}

/// `input = beta·gamma·delta` together with the data that produced it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Factorization {
    pub side: Side,
    pub n: usize,
    pub r: usize,
    pub input: ChainMap,
    pub beta: ChainMap,
    pub gamma: ChainMap,
    pub delta: ChainMap,
    pub layout: Layout,
    /// `m+1` is the fixed point heading the second staircase.
    pub m: usize,
    /// Order-reversing degree of the input as defined on `PORD_n*`.
    pub ord: usize,
    pub p: usize,
    pub s: usize,
    pub t: usize,
    /// `a₁,…,a_t`.
    pub images: Vec<usize>,
    /// `A₁,…,A_{t+1}`.
    pub blocks: Vec<PointSet>,
    pub gamma_source: GammaSource,
    pub y_mask: PointSet,
}

/// Which postconditions hold for a [`Factorization`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Postconditions {
    pub product: bool,
    pub associative: bool,
    pub beta_member: bool,
    pub delta_member: bool,
    pub gamma_injective: bool,
    pub gamma_fix: bool,
    pub gamma_reversing: bool,
    pub gamma_image: bool,
    pub gamma_is_restricted_source: bool,
    pub source_in_family: bool,
    pub observations: [bool; 4],
}

impl Postconditions {
    pub fn all(&self) -> bool {
        self.product
            && self.associative
            && self.beta_member
            && self.delta_member
            && self.gamma_injective
            && self.gamma_fix
            && self.gamma_reversing
            && self.gamma_image
            && self.gamma_is_restricted_source
            && self.source_in_family
            && self.observations.iter().all(|&o| o)
    }
}

impl Factorization {
    /// The four inequalities between the images, the blocks, `p` and `m`.
    pub fn observations(&self) -> [bool; 4] {
        let (p, m, s, t) = (self.p, self.m, self.s, self.t);
        let a = |i: usize| self.images[i - 1];
        let min_block = |i: usize| self.blocks[i - 1].first();
        [
            (1..=s).all(|i| a(i) + i <= p + 1),
            (1..=s).all(|i| min_block(i).is_none_or(|b| p + i - 1 <= b)),
            (1..=t - s).all(|j| a(s + j) + j <= m + 2),
            (1..=t - s).all(|j| min_block(s + j).is_none_or(|b| m + j <= b)),
        ]
    }

    pub fn postconditions(&self) -> Postconditions {
        let bounded = |c: Class, x: ChainMap| {
            let prof = x.classify();
            c.contains(&prof) && prof.image_size <= self.r
        };
        let (beta_class, delta_class) = match self.side {
            Side::Pord => (Class::Popd, Class::Pc),
            Side::Iord => (Class::Ic, Class::Ic),
        };
        let g = self.gamma.classify();
        let expected_image = match self.layout {
            Layout::Split | Layout::Wrapped => self.t,
            Layout::FirstRun | Layout::SecondRun => self.t + 1,
        };
        let fix = PointSet::try_from_points([self.p, self.m + 1]).expect("points on the chain");
        let restricted = self.gamma_source.map(self.n).ok().and_then(|src| {
            let y = ChainMap::partial_identity(self.n, self.y_mask).ok()?;
            Some(y.then(src))
        });
        Postconditions {
            product: self.beta.then(self.gamma).then(self.delta) == self.input,
            associative: self.beta.then(self.gamma.then(self.delta)) == self.input,
            beta_member: bounded(beta_class, self.beta),
            delta_member: bounded(delta_class, self.delta),
            gamma_injective: g.injective,
            gamma_fix: self.gamma.fix() == fix,
            gamma_reversing: bounded(self.side.class(), self.gamma) && Class::PordStar.contains(&g),
            gamma_image: g.image_size == expected_image,
            gamma_is_restricted_source: restricted == Some(self.gamma),
            source_in_family: self.gamma_source.in_family(self.n),
            observations: self.observations(),
        }
    }

    pub fn verified(&self) -> bool {
        self.postconditions().all()
    }
}

/// Every `s ∈ [1, t−1]` for which the images `v₁,…,v_t` of the domain points,
/// in domain order, satisfy `v_s ≤ … ≤ v₁ ≤ v_t ≤ … ≤ v_{s+1}`.
pub fn split_indices(a: ChainMap) -> Vec<usize> {
    let v = a.image_sequence();
    let t = v.len();
    (1..t)
        .filter(|&s| {
            let first = (1..s).all(|i| v[i] <= v[i - 1]);
            let second = (s + 1..t).all(|j| v[j] <= v[j - 1]);
            first && second && v[0] <= v[t - 1]
        })
        .collect()
}

struct Layout0 {
    layout: Layout,
    m: usize,
    p: usize,
    s: usize,
    images: Vec<usize>,
    blocks: Vec<PointSet>,
}

fn runs(a: ChainMap) -> (Vec<(usize, PointSet)>, usize) {
    let top = a.image().last().expect("non-empty image");
    let head = (1..=a.n())
        .find(|&x| a.get(x) == Some(top))
        .expect("maximum is attained");
    let mut run: Vec<(usize, PointSet)> = Vec::new();
    for x in a.domain().iter() {
        let v = a.get(x).unwrap();
        match run.last_mut() {
            Some((w, block)) if *w == v => block.insert(x),
            _ => run.push((v, PointSet::try_from_points([x]).unwrap())),
        }
    }
    (run, head)
}

fn layout_general(a: ChainMap) -> Layout0 {
    let (run, head) = runs(a);
    let before: Vec<_> = run
        .iter()
        .filter(|(_, b)| b.last().unwrap() < head)
        .cloned()
        .collect();
    let mut after: Vec<_> = run
        .iter()
        .filter(|(_, b)| b.first().unwrap() >= head)
        .cloned()
        .collect();
    if before.is_empty() {
        let (mut low, mut tail) = after.pop().expect("at least three blocks");
        if low == after[0].0 {
            after[0].1 = after[0].1.union(tail);
            (low, tail) = after.pop().expect("at least three blocks");
        }
        let mut images = vec![low];
        let mut blocks = vec![PointSet::EMPTY];
        for (v, b) in after {
            images.push(v);
            blocks.push(b);
        }
        blocks.push(tail);
        return Layout0 {
            layout: Layout::Wrapped,
            m: head - 1,
            p: low,
            s: 1,
            images,
            blocks,
        };
    }
    let p = before[0].0;
    let tail = match after.last() {
        Some(&(v, b)) if v == p => {
            after.pop();
            b
        }
        _ => PointSet::EMPTY,
    };
    let s = before.len();
    let mut images: Vec<usize> = before.iter().map(|&(v, _)| v).collect();
    let mut blocks: Vec<PointSet> = before.iter().map(|&(_, b)| b).collect();
    images.extend(after.iter().map(|&(v, _)| v));
    blocks.extend(after.iter().map(|&(_, b)| b));
    blocks.push(tail);
    Layout0 {
        layout: Layout::Split,
        m: head - 1,
        p,
        s,
        images,
        blocks,
    }
}

fn layout_single_run(a: ChainMap, r: usize) -> Option<Layout0> {
    let n = a.n();
    let points = a.domain().to_vec();
    let images: Vec<usize> = points.iter().map(|&x| a.get(x).unwrap()).collect();
    let t = images.len();
    let top = images[0];
    let mut blocks: Vec<PointSet> = points
        .iter()
        .map(|&x| PointSet::try_from_points([x]).unwrap())
        .collect();
    blocks.push(PointSet::EMPTY);
    if t + 1 > r {
        return None;
    }
    if top + t <= n {
        return Some(Layout0 {
            layout: Layout::FirstRun,
            m: top + t - 1,
            p: top,
            s: t,
            images,
            blocks,
        });
    }
    if top > t && n - top + 1 >= t {
        return Some(Layout0 {
            layout: Layout::SecondRun,
            m: top - 1,
            p: top - t,
            s: 0,
            images,
            blocks,
        });
    }
    None
}

fn build(side: Side, a: ChainMap, r: usize, lay: Layout0) -> Result<Factorization> {
    let n = a.n();
    let Layout0 {
        layout,
        m,
        p,
        s,
        images,
        blocks,
    } = lay;
    let t = images.len();
    let mut beta = Vec::new();
    let mut delta = Vec::new();
    let mut y = PointSet::try_from_points([p, m + 1])?;
    for i in 1..=s {
        beta.extend(blocks[i - 1].iter().map(|x| (x, p + i - 1)));
        y.insert(p + i - 1);
        if p + 1 > i {
            delta.push((p - i + 1, images[i - 1]));
        }
    }
    for j in 1..=t - s {
        beta.extend(blocks[s + j - 1].iter().map(|x| (x, m + j)));
        if m + j <= n {
            y.insert(m + j);
        }
        if m + 2 > j {
            delta.push((m + 2 - j, images[s + j - 1]));
        }
    }
    beta.extend(blocks[t].iter().map(|x| (x, p)));
    let gamma_source = match Regime::of(n, r)? {
        Regime::Small => {
            let s_source = match layout {
                Layout::SecondRun => 1,
                _ => s,
            };
            GammaSource::H {
                p,
                q: m + 1,
                r,
                s: s_source,
            }
        }
        _ => GammaSource::G { p, q: m + 1 },
    };
    let source = gamma_source
        .map(n)
        .map_err(|e| Error::Inconsistency(format!("{a}: {e}")))?;
    let inconsistent = |e: Error| Error::Inconsistency(format!("{a}: {e}"));
    let beta = ChainMap::from_pairs(n, beta).map_err(inconsistent)?;
    let delta = ChainMap::from_pairs(n, delta).map_err(inconsistent)?;
    let gamma = ChainMap::partial_identity(n, y)?.then(source);
    Ok(Factorization {
        side,
        n,
        r,
        input: a,
        beta,
        gamma,
        delta,
        layout,
        m,
        ord: a.ord_degree()?,
        p,
        s,
        t,
        images,
        blocks,
        gamma_source,
        y_mask: y,
    })
}

fn admissible(a: ChainMap, r: usize, class: Class) -> Result<()> {
    let n = a.n();
    let prof = a.classify();
    if r > n {
        return Err(domain(format!("image bound r={r} exceeds n={n}")));
    }
    if !class.contains(&prof) || prof.image_size < 3 || prof.image_size > r {
        return Err(domain(format!("{a} is not in {class} with 3 ≤ |im| ≤ {r}")));
    }
    Ok(())
}

/// Decomposes `a ∈ PORD(n,r) \ POPD(n,r)`.
pub fn factorize_pord(a: ChainMap, r: usize) -> Result<Factorization> {
    admissible(a, r, Class::PordStar)?;
    build(Side::Pord, a, r, layout_general(a))
}

/// Decomposes `a ∈ IORD(n,r) \ IOPD(n,r)`.
///
/// Order-reversing inputs use a single staircase when there is room for it
/// on the chain and fall back to the wrapped layout otherwise; the fallback
/// fails the `IC(n,r)` membership postcondition for `β`.
pub fn factorize_iord(a: ChainMap, r: usize) -> Result<Factorization> {
    admissible(a, r, Class::IordStar)?;
    let lay = match layout_general(a) {
        lay if lay.layout == Layout::Wrapped => layout_single_run(a, r).unwrap_or(lay),
        lay => lay,
    };
    build(Side::Iord, a, r, lay)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(s: &str) -> ChainMap {
        s.parse().unwrap()
    }

    #[test]
    fn worked_example() {
        let a = m("n=7:[0,0,3,0,5,0,4]");
        let f = factorize_pord(a, 4).unwrap();
        assert_eq!((f.m, f.p, f.s, f.t), (4, 3, 1, 3));
        assert_eq!(
            f.gamma_source,
            GammaSource::H {
                p: 3,
                q: 5,
                r: 4,
                s: 1
            }
        );
        assert!(f.verified(), "{:?}", f.postconditions());
    }

    #[test]
    fn split_uses_first_maximum() {
        // the last maximum sits at 4 but the run from the maximum starts at 3
        let a = m("n=5:[1,0,3,3,2]");
        let f = factorize_pord(a, 3).unwrap();
        assert_eq!((f.m, f.ord), (2, 3));
        assert!(f.verified(), "{:?}", f.postconditions());
    }

    #[test]
    fn wrapped_layout_for_order_reversing_input() {
        let a = m("n=6:[0,0,0,3,2,1]");
        let f = factorize_pord(a, 4).unwrap();
        assert_eq!(f.layout, Layout::Wrapped);
        assert!(f.blocks[0].is_empty());
        assert!(f.verified(), "{:?}", f.postconditions());
    }

    #[test]
    fn return_to_the_top_joins_the_top_block() {
        for r in [3, 4] {
            let f = factorize_pord(m("n=6:[0,0,3,2,1,3]"), r).unwrap();
            assert_eq!(
                (f.layout, f.p, f.m, f.s, f.t),
                (Layout::Wrapped, 1, 2, 1, 3)
            );
            assert_eq!(f.blocks[1], PointSet::try_from_points([3, 6]).unwrap());
            assert_eq!(f.beta, m("n=6:[0,0,3,4,1,3]"));
            assert!(f.verified(), "{:?}", f.postconditions());
        }
    }

    #[test]
    fn injective_order_reversing_layouts() {
        let f = factorize_iord(m("n=6:[0,0,3,2,1,0]"), 4).unwrap();
        assert_eq!(
            (f.layout, f.gamma_source),
            (Layout::FirstRun, GammaSource::G { p: 3, q: 6 })
        );
        assert!(f.verified(), "{:?}", f.postconditions());
        let f = factorize_iord(m("n=6:[0,0,0,4,2,1]"), 4).unwrap();
        assert_eq!(
            (f.layout, f.gamma_source),
            (Layout::SecondRun, GammaSource::G { p: 1, q: 4 })
        );
        assert!(f.verified(), "{:?}", f.postconditions());
    }

    #[test]
    fn injective_fallback_fails_membership() {
        let f = factorize_iord(m("n=5:[0,0,3,2,1]"), 4).unwrap();
        assert_eq!(f.layout, Layout::Wrapped);
        let post = f.postconditions();
        assert!(post.product && !post.beta_member);
    }

    #[test]
    fn small_regime_source() {
        let a = m("n=9:[0,0,0,0,5,0,7,6,0]");
        let f = factorize_iord(a, 5).unwrap();
        assert_eq!(
            f.gamma_source,
            GammaSource::H {
                p: 5,
                q: 7,
                r: 5,
                s: 1
            }
        );
        assert!(f.verified(), "{:?}", f.postconditions());
    }

    #[test]
    fn split_is_unique_on_non_monotone_maps() {
        assert_eq!(split_indices(m("n=7:[0,0,3,0,5,0,4]")), vec![1]);
        assert!(split_indices(m("n=6:[0,0,0,3,2,1]")).is_empty());
        assert_eq!(split_indices(m("n=6:[0,0,3,2,1,3]")), vec![3]);
    }

    #[test]
    fn rejects_inadmissible_inputs() {
        assert!(matches!(
            factorize_pord(m("n=4:[1,2,1,0]"), 3),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            factorize_pord(m("n=7:[0,0,3,0,5,0,4]"), 2),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            factorize_iord(m("n=5:[0,0,3,3,2]"), 4),
            Err(Error::Domain(_))
        ));
    }
}
