//! Exhaustive enumeration of order-decreasing partial maps and the counting
//! oracles built on it.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{param, Error, Result};
use crate::families::{binomial, gamma_witness, h_count, reversing_bound};
use crate::transforms::{ChainMap, Class};
use crate::MAX_N;

/// Environment variable overriding [`Limits::brute_force_cap`].
pub const CAP_ENV: &str = "CHAINSEMI_CAP";

/// Resource limits for brute-force work.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest chain size that may be enumerated.
    pub brute_force_cap: usize,
    /// Largest semigroup a closure may build before giving up.
    pub element_cap: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            brute_force_cap: 8,
            element_cap: 2_000_000,
        }
    }
}

impl Limits {
    /// Defaults, with the brute-force cap taken from `CHAINSEMI_CAP` when set.
    pub fn from_env() -> Result<Self> {
        let mut limits = Limits::default();
        if let Ok(v) = std::env::var(CAP_ENV) {
            limits.brute_force_cap = v
                .trim()
                .parse()
                .ok()
                .filter(|&c| c >= 1)
                .ok_or_else(|| param(format!("{CAP_ENV}={v:?} is not a positive integer")))?;
        }
        Ok(limits)
    }

    pub fn with_cap(self, cap: usize) -> Self {
        Limits {
            brute_force_cap: cap,
            ..self
        }
    }

    pub(crate) fn check(&self, n: usize) -> Result<()> {
        if n == 0 || n > MAX_N {
            return Err(Error::ChainSize(n));
        }
        if n > self.brute_force_cap {
            return Err(Error::Resource(format!(
                "n={n} exceeds the brute-force cap {} (raise it with --cap or {CAP_ENV})",
                self.brute_force_cap
            )));
        }
        Ok(())
    }
}

/// A counted quantity next to its closed form, when there is one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountReport {
    pub n: usize,
    pub r: Option<usize>,
    pub quantity: String,
    pub enumerated_count: u64,
    pub formula_value: Option<u64>,
    #[serde(rename = "match")]
    pub matches: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<ChainMap>,
}

impl CountReport {
    pub fn new(
        n: usize,
        r: Option<usize>,
        quantity: &str,
        enumerated_count: u64,
        formula_value: Option<u64>,
    ) -> Self {
        CountReport {
            n,
            r,
            quantity: quantity.to_string(),
            enumerated_count,
            formula_value,
            matches: formula_value.is_none_or(|f| f == enumerated_count),
            witness: None,
        }
    }
}

/// Walks every order-decreasing partial map of `X_n` with image size at most
/// `r_bound` whose point `n` maps to `last`, calling `visit` on each.
fn walk(n: usize, r_bound: usize, last: usize, mut visit: impl FnMut(ChainMap)) {
    fn go(
        n: usize,
        x: usize,
        word: u64,
        image: u16,
        r_bound: usize,
        visit: &mut impl FnMut(ChainMap),
    ) {
        if x == n {
            visit(ChainMap::from_word(n, word));
            return;
        }
        let shift = 4 * (MAX_N - x) as u32;
        go(n, x + 1, word, image, r_bound, visit);
        for y in 1..=x {
            let image = image | (1 << y);
            if image.count_ones() as usize <= r_bound {
                go(
                    n,
                    x + 1,
                    word | ((y as u64) << shift),
                    image,
                    r_bound,
                    visit,
                );
            }
        }
    }
    let shift = 4 * (MAX_N - n) as u32;
    let image = if last == 0 { 0 } else { 1u16 << last };
    if image.count_ones() as usize <= r_bound {
        go(n, 1, (last as u64) << shift, image, r_bound, &mut visit);
    }
}

/// Every member of `class` on `X_n` with image size at most `r_bound`, in
/// canonical order.
pub fn enumerate_class(
    n: usize,
    class: Class,
    r_bound: Option<usize>,
    limits: &Limits,
) -> Result<Vec<ChainMap>> {
    limits.check(n)?;
    let r = r_bound.unwrap_or(n);
    if r > n {
        return Err(param(format!("image bound r={r} exceeds n={n}")));
    }
    let mut out: Vec<ChainMap> = (0..=n)
        .into_par_iter()
        .flat_map_iter(|last| {
            let mut part = Vec::new();
            walk(n, r, last, |a| {
                if class.contains(&a.classify()) {
                    part.push(a);
                }
            });
            part
        })
        .collect();
    out.par_sort_unstable();
    Ok(out)
}

/// `|PD_n|`-style count of a class, with `(n+1)!` attached for the whole of `PD_n`.
pub fn class_size(
    n: usize,
    class: Class,
    r_bound: Option<usize>,
    limits: &Limits,
) -> Result<CountReport> {
    let count = enumerate_class(n, class, r_bound, limits)?.len() as u64;
    let formula = (class == Class::Pd && r_bound.is_none_or(|r| r == n))
        .then(|| (1..=n as u64 + 1).product());
    let label = format!("class-size {class}");
    Ok(CountReport::new(n, r_bound, &label, count, formula))
}

/// Idempotents of `PORD_n` with image size exactly `r`, against `C(n,r)·2^(n−r)`.
pub fn count_idempotents(n: usize, r: usize, limits: &Limits) -> Result<CountReport> {
    if r == 0 || r > n {
        return Err(param(format!("need 1 ≤ r ≤ n, got n={n} r={r}")));
    }
    let count = enumerate_class(n, Class::Pord, Some(r), limits)?
        .into_par_iter()
        .filter(|a| a.image_size() == r && a.is_idempotent())
        .count() as u64;
    let formula = binomial(n as u64, r as u64) << (n - r);
    Ok(CountReport::new(
        n,
        Some(r),
        "idempotents",
        count,
        Some(formula),
    ))
}

/// Largest image of an orientation-reversing, non-monotone, order-decreasing
/// partial map, against `n − ⌊n/3⌋`; the report also requires the witness
/// map to attain the bound.
pub fn max_reversing_image(n: usize, limits: &Limits) -> Result<CountReport> {
    if n < 4 {
        return Err(param(format!("need n ≥ 4, got {n}")));
    }
    let max = enumerate_class(n, Class::PrdStar, None, limits)?
        .into_par_iter()
        .map(ChainMap::image_size)
        .max()
        .unwrap_or(0) as u64;
    let witness = gamma_witness(n)?;
    let formula = reversing_bound(n) as u64;
    let mut report = CountReport::new(n, None, "rn", max, Some(formula));
    report.matches &=
        Class::PrdStar.contains(&witness.classify()) && witness.image_size() as u64 == formula;
    report.witness = Some(witness);
    Ok(report)
}

/// One row of the `|H_n^r|` table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct HRow {
    pub n: usize,
    pub r: usize,
    pub count: u64,
}

/// `|H_n^r|` for every `n ≤ n_max` and every `r` with `3 ≤ r < n − ⌊n/3⌋`.
///
/// Pure counting, so there is no cap on `n_max`. The first row is `(5, 3)`.
pub fn count_h_table(n_max: usize) -> Result<Vec<HRow>> {
    if n_max < 5 {
        return Err(param(format!(
            "n_max={n_max}: the small-r regime is empty below n=5"
        )));
    }
    Ok((5..=n_max)
        .flat_map(|n| {
            (3..reversing_bound(n)).map(move |r| HRow {
                n,
                r,
                count: h_count(n, r),
            })
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn pd_size_is_factorial() {
        for n in 1..=6 {
            let r = class_size(n, Class::Pd, None, &lim()).unwrap();
            assert!(r.matches, "{r:?}");
        }
    }

    #[test]
    fn idempotent_examples() {
        assert_eq!(count_idempotents(4, 3, &lim()).unwrap().enumerated_count, 8);
        assert_eq!(count_idempotents(5, 5, &lim()).unwrap().enumerated_count, 1);
        let r = count_idempotents(6, 2, &lim()).unwrap();
        assert_eq!((r.enumerated_count, r.matches), (240, true));
    }

    #[test]
    fn reversing_image_examples() {
        assert_eq!(max_reversing_image(4, &lim()).unwrap().enumerated_count, 3);
        let r = max_reversing_image(6, &lim()).unwrap();
        assert_eq!((r.enumerated_count, r.matches), (4, true));
    }

    #[test]
    fn pord3_is_popd3() {
        assert_eq!(
            enumerate_class(3, Class::Pord, None, &lim()).unwrap(),
            enumerate_class(3, Class::Popd, None, &lim()).unwrap()
        );
    }

    #[test]
    fn regression_sizes() {
        let size = |n, c, r| enumerate_class(n, c, Some(r), &lim()).unwrap().len();
        assert_eq!(size(4, Class::Pord, 3), 115);
        assert_eq!(size(4, Class::Iord, 3), 51);
        assert_eq!(size(5, Class::Pord, 3), 572);
        assert_eq!(size(5, Class::Iord, 4), 188);
        assert_eq!(size(6, Class::Pord, 4), 3062);
        assert_eq!(size(6, Class::Iord, 6), 672);
    }

    #[test]
    fn output_is_canonical() {
        let v = enumerate_class(4, Class::Pord, None, &lim()).unwrap();
        assert!(v.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn cap_is_enforced() {
        let err = enumerate_class(9, Class::Pd, None, &lim()).unwrap_err();
        assert!(matches!(err, Error::Resource(_)));
        assert!(enumerate_class(4, Class::Pd, Some(5), &lim()).is_err());
    }

    #[test]
    fn h_table_rows() {
        let rows = count_h_table(8).unwrap();
        assert_eq!(
            rows[0],
            HRow {
                n: 5,
                r: 3,
                count: 6
            }
        );
        assert!(rows
            .iter()
            .all(|row| row.r >= 3 && row.r < row.n - row.n / 3));
        assert!(count_h_table(4).is_err());
    }
}
