//! The end-to-end acceptance checks, shared by the test harness and the
//! `verify-all` command.
//!
//! Every check is exact: counts and sets are compared for equality.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::closure::{
    check_gamma_undecomposable_in, closure, is_decomposable_in, is_proper_factorisation,
    undecomposables,
};
use crate::enumerate::{
    count_h_table, count_idempotents, enumerate_class, max_reversing_image, Limits,
};
use crate::error::Result;
use crate::factorize::{factorize_iord, factorize_pord};
use crate::families::{
    family, gamma, gamma_rs, gamma_rs_tail, h_params, reversing_bound, FamilyLabel, Regime,
};
use crate::maximal::{necessity_rank_check, verify_all as verify_all_maximal, Ambient, Side};
use crate::points::PointSet;
use crate::transforms::{ChainMap, Class};

/// Titles of the twelve checks, indexed from 1.
pub const CRITERIA: [&str; 12] = [
    "idempotent counts",
    "maximum reversing image",
    "family cardinalities",
    "generation, large r",
    "generation, small r",
    "IORD generation and uniqueness",
    "rank identities",
    "maximal subsemigroups",
    "undecomposability criteria",
    "factorization",
    "H_n^r table",
    "structural sanity",
];

/// Options for a verification run.
#[derive(Debug, Clone, Default)]
pub struct VerifyConfig {
    pub limits: Limits,
    /// Drop every instance whose chain size exceeds this.
    pub max_n: Option<usize>,
    /// Force this criterion to report failure.
    pub inject_failure: Option<usize>,
}

impl VerifyConfig {
    fn keep(&self, n: usize) -> bool {
        self.max_n.is_none_or(|m| n <= m)
    }

    fn ns(&self, lo: usize, hi: usize) -> Vec<usize> {
        (lo..=hi).filter(|&n| self.keep(n)).collect()
    }
}

/// Outcome of one criterion.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionResult {
    pub id: usize,
    pub title: &'static str,
    pub passed: bool,
    pub checks: usize,
    pub failures: Vec<String>,
    pub seconds: f64,
}

#[derive(Default)]
struct Tally {
    checks: usize,
    failures: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn absorb(&mut self, other: Tally) {
        self.checks += other.checks;
        self.failures.extend(other.failures);
    }
}

fn large_rs(n: usize) -> std::ops::Range<usize> {
    reversing_bound(n)..n
}

fn c1(cfg: &VerifyConfig, t: &mut Tally) -> Result<()> {
    for n in cfg.ns(4, 7) {
        for r in 1..=n {
            let rep = count_idempotents(n, r, &cfg.limits)?;
            t.check(rep.matches, || {
                format!(
                    "|E_{r}(PORD_{n})| = {} vs {:?}",
                    rep.enumerated_count, rep.formula_value
                )
            });
        }
    }
    Ok(())
}

fn c2(cfg: &VerifyConfig, t: &mut Tally) -> Result<()> {
    for n in cfg.ns(4, 9) {
        let limits = cfg.limits.with_cap(cfg.limits.brute_force_cap.max(n));
        let rep = max_reversing_image(n, &limits)?;
        t.check(rep.matches, || {
            format!(
                "r_{n} = {} vs {:?}",
                rep.enumerated_count, rep.formula_value
            )
        });
    }
    Ok(())
}

fn c3(cfg: &VerifyConfig, t: &mut Tally) -> Result<()> {
    for n in cfg.ns(4, 12) {
        let g = family(n, n, FamilyLabel::G, &cfg.limits)?;
        let expected = (n * (n - 3) / 2) as u64;
        t.check(g.len() as u64 == expected, || {
            format!("|G_{n}| = {} vs {expected}", g.len())
        });
        for r in 3..n {
            let f = family(n, r, FamilyLabel::F, &cfg.limits)?;
            let expected = ((2 * n - r - 1) * (r - 2) / 2) as u64;
            t.check(f.len() as u64 == expected, || {
                format!("|F_{r}| at n={n} is {} vs {expected}", f.len())
            });
        }
    }
    if cfg.keep(4) {
        let g4 = family(4, 4, FamilyLabel::G, &cfg.limits)?;
        let literal = vec![
            "n=4:[0,2,1,4]".parse::<ChainMap>()?,
            "n=4:[1,0,3,2]".parse()?,
        ];
        t.check(g4.elements == literal, || {
            format!("G_4 = {:?}", g4.elements)
        });
        t.check(literal == vec![gamma(4, 2, 4)?, gamma(4, 1, 3)?], || {
            "G_4 literal maps".into()
        });
    }
    Ok(())
}

fn generation(cfg: &VerifyConfig, t: &mut Tally, side: Side, n: usize, r: usize) -> Result<()> {
    let gens = family(n, r, side.claimed(), &cfg.limits)?;
    let target = enumerate_class(n, side.class(), Some(r), &cfg.limits)?;
    let s = closure(&gens.elements, &cfg.limits)?;
    t.check(s.elements == target, || {
        format!(
            "closure of {} at ({n},{r}) has {} elements, expected {}",
            side.claimed(),
            s.len(),
            target.len()
        )
    });
    Ok(())
}

fn c4(cfg: &VerifyConfig, t: &mut Tally) -> Result<()> {
    for n in cfg.ns(4, 6) {
        for r in large_rs(n) {
            generation(cfg, t, Side::Pord, n, r)?;
        }
    }
    Ok(())
}

fn c5(cfg: &VerifyConfig, t: &mut Tally) -> Result<()> {
    for (n, r) in [(6, 3), (7, 3), (7, 4)] {
        if cfg.keep(n) {
            t.check(Regime::of(n, r)? == Regime::Small, || {
                format!("({n},{r}) is not small-r")
            });
            generation(cfg, t, Side::Pord, n, r)?;
        }
    }
    Ok(())
}

fn c6(cfg: &VerifyConfig, t: &mut Tally) -> Result<()> {
    for n in cfg.ns(4, 6) {
        for r in 3..n {
            generation(cfg, t, Side::Iord, n, r)?;
        }
    }
    for n in cfg.ns(4, 5) {
        for r in large_rs(n) {
            let iord = enumerate_class(n, Class::Iord, Some(r), &cfg.limits)?;
            let claimed = family(n, r, FamilyLabel::ClaimedIord, &cfg.limits)?;
            let und = undecomposables(&iord);
            t.check(und == claimed.elements, || {
                format!(
                    "undecomposables(IORD({n},{r})) has {} elements, claimed set {}",
                    und.len(),
                    claimed.len()
                )
            });
        }
    }
    Ok(())
}

fn c7(cfg: &VerifyConfig, t: &mut Tally) -> Result<()> {
    for n in cfg.ns(4, 6) {
        for r in large_rs(n).chain([n]) {
            for side in [Side::Pord, Side::Iord] {
                let rep = necessity_rank_check(n, r, side, &cfg.limits)?;
                t.check(rep.matches, || {
                    format!("rank check {side} ({n},{r}): {rep:?}")
                });
                if r == n {
                    let expected = (n * n - n + 1) as u64;
                    t.check(
                        rep.formula_value == Some(expected) && rep.class_count == expected,
                        || {
                            format!(
                                "rank of the {side} monoid at n={n}: {:?}",
                                rep.formula_value
                            )
                        },
                    );
                }
            }
        }
    }
    Ok(())
}

fn c8(cfg: &VerifyConfig, t: &mut Tally) -> Result<()> {
    let n = 5;
    if !cfg.keep(n) {
        return Ok(());
    }
    for r in 3..=n {
        for side in [Side::Pord, Side::Iord] {
            let reports = verify_all_maximal(Ambient { side, n, r }, &cfg.limits)?;
            t.check(!reports.is_empty(), || {
                format!("no descriptors for {side} ({n},{r})")
            });
            for rep in reports {
                t.check(rep.passed(), || format!("{}: {rep:?}", rep.descriptor));
            }
        }
    }
    Ok(())
}

fn c9(cfg: &VerifyConfig, t: &mut Tally) -> Result<()> {
    for n in cfg.ns(4, 6) {
        let pord = enumerate_class(n, Class::Pord, None, &cfg.limits)?;
        let iord = enumerate_class(n, Class::Iord, None, &cfg.limits)?;
        let pairs: Vec<(usize, usize)> = (1..=n - 2)
            .flat_map(|p| (p + 2..=n).map(move |q| (p, q)))
            .collect();
        let sub: Vec<Tally> = pairs
            .par_iter()
            .map(|&(p, q)| -> Result<Tally> {
                let mut t = Tally::default();
                let c = check_gamma_undecomposable_in(n, p, q, &pord)?;
                t.check(c.agrees(), || {
                    format!("PORD_{n} criterion for γ_{{{p},{q}}}: {c:?}")
                });
                let g = gamma(n, p, q)?;
                t.check(!is_decomposable_in(g, &iord), || {
                    format!("γ_{{{p},{q}}} decomposes in IORD_{n}")
                });
                Ok(t)
            })
            .collect::<Result<_>>()?;
        sub.into_iter().for_each(|s| t.absorb(s));
    }
    let (n, r) = (6, 3);
    if cfg.keep(n) {
        let iord = enumerate_class(n, Class::Iord, Some(r), &cfg.limits)?;
        let mut seen = 0;
        for p in 1..=n - 2 {
            for q in p + 2..=n {
                for s in 1..=p.min(q - p).min(r - 1) {
                    if gamma_rs_tail(n, r, p, q, s) == r - s {
                        seen += 1;
                        let g = gamma_rs(n, r, p, q, s)?;
                        t.check(!is_decomposable_in(g, &iord), || {
                            format!("γ_{{{p},{q}}}^{{{r},{s}}} decomposes in IORD({n},{r})")
                        });
                    }
                }
            }
        }
        t.check(seen > 0, || {
            "no γ^{r,s} instance with u = r − s at (6,3)".into()
        });
    }
    if cfg.keep(9) {
        let z = gamma_rs(9, 5, 5, 7, 1)?;
        let y = ChainMap::partial_identity(9, PointSet::try_from_points([5, 7, 8])?)?;
        let right = gamma_rs(9, 5, 5, 7, 2)?;
        let in_iord95 = |a: ChainMap| {
            let c = a.classify();
            Class::Iord.contains(&c) && c.image_size <= 5
        };
        t.check(z == "n=9:[0,0,0,0,5,0,7,6,0]".parse()?, || {
            format!("γ_{{5,7}}^{{5,1}} = {z}")
        });
        t.check(right == "n=9:[0,0,0,0,5,4,7,6,0]".parse()?, || {
            format!("right factor = {right}")
        });
        t.check(
            is_proper_factorisation(z, y, right) && in_iord95(y) && in_iord95(right),
            || "1_Y·γ_{5,7}^{5,2} is not a proper factorisation in IORD(9,5)".into(),
        );
    }
    Ok(())
}

fn c10(cfg: &VerifyConfig, t: &mut Tally) -> Result<()> {
    let (n, r) = (6, 4);
    if !cfg.keep(n) {
        return Ok(());
    }
    let corpus = enumerate_class(n, Class::PordStar, Some(r), &cfg.limits)?;
    let results: Vec<Option<String>> = corpus
        .par_iter()
        .map(|&a| match factorize_pord(a, r) {
            Ok(f) if f.verified() => None,
            Ok(f) => Some(format!("PORD {a}: {:?}", f.postconditions())),
            Err(e) => Some(format!("PORD {a}: {e}")),
        })
        .collect();
    let corpus = enumerate_class(n, Class::IordStar, Some(r), &cfg.limits)?;
    let iresults: Vec<Option<String>> = corpus
        .par_iter()
        .map(|&a| match factorize_iord(a, r) {
            Ok(f) if f.verified() => None,
            Ok(f) => Some(format!("IORD {a}: {:?}", f.postconditions())),
            Err(e) => Some(format!("IORD {a}: {e}")),
        })
        .collect();
    for res in results.into_iter().chain(iresults) {
        t.check(res.is_none(), || res.clone().unwrap_or_default());
    }
    Ok(())
}

fn c11(cfg: &VerifyConfig, t: &mut Tally) -> Result<()> {
    let rows = count_h_table(30)?;
    let keys: Vec<(usize, usize)> = rows.iter().map(|row| (row.n, row.r)).collect();
    let expected: Vec<(usize, usize)> = (1..=30usize)
        .flat_map(|n| (3..n).filter(move |&r| r < n - n / 3).map(move |r| (n, r)))
        .collect();
    t.check(keys == expected, || format!("table rows {keys:?}"));
    for row in &rows {
        let triples = h_params(row.n, row.r).len() as u64;
        t.check(row.count == triples, || {
            format!(
                "|H_{}^{}| = {} vs {triples} triples",
                row.n, row.r, row.count
            )
        });
        if row.n <= 8 && cfg.keep(row.n) {
            let f = family(row.n, row.r, FamilyLabel::H, &cfg.limits)?;
            t.check(f.len() as u64 == row.count, || {
                format!(
                    "|H_{}^{}| materialized {} vs {}",
                    row.n,
                    row.r,
                    f.len(),
                    row.count
                )
            });
        }
    }
    let h53 = rows
        .iter()
        .find(|row| (row.n, row.r) == (5, 3))
        .map(|row| row.count);
    t.check(h53 == Some(6) && h_params(5, 3).len() == 6, || {
        format!("|H_5^3| = {h53:?}")
    });
    Ok(())
}

fn c12(cfg: &VerifyConfig, t: &mut Tally) -> Result<()> {
    for n in cfg.ns(3, 7) {
        let pd = enumerate_class(n, Class::Pd, None, &cfg.limits)?;
        let fact: usize = (1..=n + 1).product();
        t.check(pd.len() == fact, || {
            format!("|PD_{n}| = {} vs {fact}", pd.len())
        });
        if (4..=6).contains(&n) {
            for &a in &pd {
                let c = a.classify();
                if c.is_oriented() {
                    let both = c.orientation_preserving && c.orientation_reversing;
                    t.check(both == (c.image_size <= 2), || {
                        format!("oriented map {a} breaks the two-point rule")
                    });
                }
            }
        }
    }
    if cfg.keep(3) {
        let pord = enumerate_class(3, Class::Pord, None, &cfg.limits)?;
        let popd = enumerate_class(3, Class::Popd, None, &cfg.limits)?;
        t.check(pord == popd, || "PORD_3 ≠ POPD_3".into());
    }
    for n in cfg.ns(4, 6) {
        let pord = enumerate_class(n, Class::Pord, Some(2), &cfg.limits)?;
        let popd = enumerate_class(n, Class::Popd, Some(2), &cfg.limits)?;
        t.check(pord == popd, || format!("PORD({n},2) ≠ POPD({n},2)"));
    }
    Ok(())
}

type Check = fn(&VerifyConfig, &mut Tally) -> Result<()>;

const CHECKS: [Check; 12] = [c1, c2, c3, c4, c5, c6, c7, c8, c9, c10, c11, c12];

/// Runs criterion `id` (1-based).
pub fn run_criterion(id: usize, cfg: &VerifyConfig) -> CriterionResult {
    assert!((1..=CHECKS.len()).contains(&id), "no criterion {id}");
    let start = Instant::now();
    log::info!("criterion {id}: {}", CRITERIA[id - 1]);
    let mut tally = Tally::default();
    if let Err(e) = CHECKS[id - 1](cfg, &mut tally) {
        tally.failures.push(format!("error: {e}"));
    }
    if cfg.inject_failure == Some(id) {
        tally.failures.push("injected failure".into());
    }
    CriterionResult {
        id,
        title: CRITERIA[id - 1],
        passed: tally.failures.is_empty(),
        checks: tally.checks,
        failures: tally.failures,
        seconds: start.elapsed().as_secs_f64(),
    }
}

/// Runs every criterion in order.
pub fn run_all(cfg: &VerifyConfig) -> Vec<CriterionResult> {
    (1..=CHECKS.len())
        .map(|id| run_criterion(id, cfg))
        .collect()
}
