use std::fmt::Write as _;
use std::io::Read;
use std::path::Path;

use anyhow::Context;
use serde::Serialize;

use chainsemi::enumerate::{class_size, count_h_table, count_idempotents, max_reversing_image};
use chainsemi::factorize::Postconditions;
use chainsemi::maximal::{verify_all, verify_maximal, Ambient, AmbientSet, MaximalReport, Variant};
use chainsemi::text::{parse_class_spec, parse_map_list};
use chainsemi::verify::{run_criterion, VerifyConfig, CRITERIA};
use chainsemi::{
    closure, enumerate_class, factorize_iord, factorize_pord, family, undecomposables, ChainMap,
    Class, ClassProfile, CountReport, Error, FamilyLabel, Limits, MaximalDescriptor, Side,
};

use crate::output::{Format, Report};
use crate::{Command, MaximalMode, Quantity};

pub fn dispatch(cmd: Command, limits: &Limits) -> anyhow::Result<Report> {
    match cmd {
        Command::Classify { map } => classify(&map),
        Command::Family { n, r, label, k } => family_cmd(n, r.unwrap_or(n), &label, k, limits),
        Command::Count {
            n,
            quantity,
            r,
            class,
        } => count(n, quantity, r, &class, limits),
        Command::HnTable { n_max } => hn_table(n_max),
        Command::Closure {
            gens,
            maps,
            target,
            elements,
        } => closure_cmd(
            gens.as_deref(),
            maps.as_deref(),
            target.as_deref(),
            elements,
            limits,
        ),
        Command::Undecomposables { class } => undecomposables_cmd(&class, limits),
        Command::Maximal { side, n, r, mode } => maximal(
            Ambient {
                side,
                n,
                r: r.unwrap_or(n),
            },
            mode,
            limits,
        ),
        Command::Factorize { map, r, side } => factorize(&map, r, side),
        Command::VerifyAll {
            n,
            criterion,
            inject_failure,
        } => verify(n, criterion, inject_failure, limits),
    }
}

fn strings(maps: &[ChainMap]) -> Vec<String> {
    maps.iter().map(ChainMap::to_string).collect()
}

#[derive(Serialize)]
struct Classification {
    map: ChainMap,
    n: usize,
    #[serde(flatten)]
    profile: ClassProfile,
    domain: Vec<usize>,
    image: Vec<usize>,
    fix: Vec<usize>,
    kernel: Vec<Vec<usize>>,
    classes: Vec<Class>,
    opd: Option<usize>,
    ord: Option<usize>,
}

fn classify(text: &str) -> anyhow::Result<Report> {
    let a: ChainMap = text.parse()?;
    let profile = a.classify();
    let c = Classification {
        map: a,
        n: a.n(),
        profile,
        domain: a.domain().to_vec(),
        image: a.image().to_vec(),
        fix: a.fix().to_vec(),
        kernel: a.kernel().into_iter().map(|b| b.to_vec()).collect(),
        classes: profile.memberships(),
        opd: a.opd().ok(),
        ord: a.ord_degree().ok(),
    };
    let value = serde_json::to_value(&c)?;
    let fields: Vec<(String, String)> = value
        .as_object()
        .expect("struct serializes to an object")
        .iter()
        .map(|(k, v)| (k.clone(), v.to_string().trim_matches('"').to_string()))
        .collect();
    let mut text = String::new();
    for (k, v) in &fields {
        writeln!(text, "{k}: {v}")?;
    }
    Ok(Report::new(&c)?
        .text(text)
        .table(&["field", "value"], fields.into_iter().map(|(k, v)| [k, v])))
}

#[derive(Serialize)]
struct FamilyOut {
    label: String,
    n: usize,
    r: usize,
    count: usize,
    formula_count: Option<u64>,
    elements: Vec<String>,
}

fn family_cmd(
    n: usize,
    r: usize,
    label: &str,
    k: Option<usize>,
    limits: &Limits,
) -> anyhow::Result<Report> {
    let label = FamilyLabel::parse(label, k)?;
    let f = family(n, r, label, limits)?;
    let out = FamilyOut {
        label: f.label.to_string(),
        n,
        r,
        count: f.len(),
        formula_count: f.formula_count,
        elements: strings(&f.elements),
    };
    let mut text = format!("{} (n={n}, r={r}): {} elements", out.label, out.count);
    if let Some(c) = out.formula_count {
        write!(text, ", closed form {c}")?;
    }
    text.push('\n');
    for e in &out.elements {
        writeln!(text, "  {e}")?;
    }
    let rows: Vec<[String; 1]> = out.elements.iter().map(|e| [e.clone()]).collect();
    Ok(Report::new(&out)?.text(text).table(&["element"], rows))
}

fn count_table(reports: &[CountReport]) -> Vec<[String; 6]> {
    reports
        .iter()
        .map(|c| {
            [
                c.quantity.clone(),
                c.n.to_string(),
                c.r.map(|r| r.to_string()).unwrap_or_default(),
                c.enumerated_count.to_string(),
                c.formula_value.map(|f| f.to_string()).unwrap_or_default(),
                c.matches.to_string(),
            ]
        })
        .collect()
}

const COUNT_HEADER: [&str; 6] = [
    "quantity",
    "n",
    "r",
    "enumerated_count",
    "formula_value",
    "match",
];

fn count(
    n: usize,
    quantity: Quantity,
    r: Option<usize>,
    class: &str,
    limits: &Limits,
) -> anyhow::Result<Report> {
    let rep = match quantity {
        Quantity::Idempotents => {
            let r = r.ok_or_else(|| Error::Parameter("--quantity idempotents needs --r".into()))?;
            count_idempotents(n, r, limits)?
        }
        Quantity::MaxReversingImage => max_reversing_image(n, limits)?,
        Quantity::ClassSize => {
            let class: Class = class.parse()?;
            class_size(n, class, r, limits)?
        }
    };
    let text = format!(
        "{} n={}{}: enumerated {}, closed form {}, match {}\n",
        rep.quantity,
        rep.n,
        rep.r.map(|r| format!(" r={r}")).unwrap_or_default(),
        rep.enumerated_count,
        rep.formula_value
            .map_or("none".to_string(), |f| f.to_string()),
        rep.matches
    );
    Ok(Report::new(&rep)?
        .ok(rep.matches)
        .text(text)
        .table(&COUNT_HEADER, count_table(std::slice::from_ref(&rep))))
}

fn hn_table(n_max: usize) -> anyhow::Result<Report> {
    let rows = count_h_table(n_max)?;
    let mut text = String::new();
    for row in &rows {
        writeln!(text, "|H_{}^{}| = {}", row.n, row.r, row.count)?;
    }
    let table: Vec<[String; 3]> = rows
        .iter()
        .map(|h| [h.n.to_string(), h.r.to_string(), h.count.to_string()])
        .collect();
    Ok(Report::new(serde_json::json!({ "rows": rows }))?
        .default_format(Format::Csv)
        .text(text)
        .table(&["n", "r", "count"], table))
}

fn read_gens(path: Option<&Path>, inline: Option<&str>) -> anyhow::Result<Vec<ChainMap>> {
    let text = match (path, inline) {
        (Some(p), _) if p == Path::new("-") => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s)?;
            s
        }
        (Some(p), _) => {
            std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?
        }
        (None, Some(s)) => s.replace(';', "\n"),
        (None, None) => return Err(Error::Parameter("give --gens or --maps".into()).into()),
    };
    let maps = parse_map_list(&text)?;
    if maps.is_empty() {
        return Err(Error::Parameter("no generators given".into()).into());
    }
    Ok(maps)
}

#[derive(Serialize)]
struct ClosureOut {
    n: usize,
    generators: Vec<String>,
    size: usize,
    target: Option<String>,
    target_size: Option<usize>,
    equals_target: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    elements: Option<Vec<String>>,
}

fn closure_cmd(
    path: Option<&Path>,
    inline: Option<&str>,
    target: Option<&str>,
    with_elements: bool,
    limits: &Limits,
) -> anyhow::Result<Report> {
    let gens = read_gens(path, inline)?;
    let s = closure(&gens, limits)?;
    let mut out = ClosureOut {
        n: s.n,
        generators: strings(&s.generators),
        size: s.len(),
        target: None,
        target_size: None,
        equals_target: None,
        elements: with_elements.then(|| strings(&s.elements)),
    };
    if let Some(t) = target {
        let spec = parse_class_spec(t)?;
        if spec.n != s.n {
            return Err(Error::SizeMismatch {
                left: s.n,
                right: spec.n,
            }
            .into());
        }
        let members = enumerate_class(spec.n, spec.class, spec.r, limits)?;
        out.target = Some(spec.to_string());
        out.target_size = Some(members.len());
        out.equals_target = Some(members == s.elements);
    }
    let mut text = format!(
        "closure of {} generators on n={}: {} elements\n",
        gens.len(),
        s.n,
        s.len()
    );
    if let (Some(t), Some(eq)) = (&out.target, out.equals_target) {
        writeln!(text, "equals {t}: {eq}")?;
    }
    for e in out.elements.iter().flatten() {
        writeln!(text, "  {e}")?;
    }
    let ok = out.equals_target.unwrap_or(true);
    let rows: Vec<[String; 1]> = strings(&s.elements).into_iter().map(|e| [e]).collect();
    Ok(Report::new(&out)?
        .ok(ok)
        .text(text)
        .table(&["element"], rows))
}

fn undecomposables_cmd(class: &str, limits: &Limits) -> anyhow::Result<Report> {
    let spec = parse_class_spec(class)?;
    let members = enumerate_class(spec.n, spec.class, spec.r, limits)?;
    let und = strings(&undecomposables(&members));
    let mut text = format!(
        "{spec}: {} elements, {} undecomposable\n",
        members.len(),
        und.len()
    );
    for e in &und {
        writeln!(text, "  {e}")?;
    }
    let rows: Vec<[String; 1]> = und.iter().map(|e| [e.clone()]).collect();
    let body = serde_json::json!({
        "class": spec.to_string(),
        "size": members.len(),
        "count": und.len(),
        "undecomposables": und,
    });
    Ok(Report::new(body)?.text(text).table(&["element"], rows))
}

fn params_of(v: &Variant) -> Option<(usize, usize, Option<usize>)> {
    match v {
        Variant::RemoveFpq { p, q } | Variant::RemoveGpq { p, q } => Some((*p, *q, None)),
        Variant::RemoveHpqs { p, q, s } | Variant::RemoveHIpqs { p, q, s } => {
            Some((*p, *q, Some(*s)))
        }
        Variant::AdjoinIdentity(inner) => params_of(inner),
        _ => None,
    }
}

fn parse_pqs(s: &str) -> anyhow::Result<(usize, usize, Option<usize>)> {
    let parts: Vec<usize> = s
        .split(',')
        .map(|x| x.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|_| Error::Parse {
            pos: 0,
            msg: format!("expected p,q or p,q,s; got {s:?}"),
        })?;
    match parts[..] {
        [p, q] => Ok((p, q, None)),
        [p, q, s] => Ok((p, q, Some(s))),
        _ => Err(Error::Parse {
            pos: 0,
            msg: format!("expected p,q or p,q,s; got {s:?}"),
        }
        .into()),
    }
}

fn report_rows(reports: &[MaximalReport]) -> Vec<[String; 6]> {
    reports
        .iter()
        .map(|r| {
            [
                r.descriptor.to_string(),
                r.removed.to_string(),
                r.closed.to_string(),
                r.proper.to_string(),
                r.maximal.to_string(),
                r.passed().to_string(),
            ]
        })
        .collect()
}

fn maximal(ambient: Ambient, mode: MaximalMode, limits: &Limits) -> anyhow::Result<Report> {
    let all = chainsemi::maximal::descriptors(ambient, limits)?;
    if mode.list {
        let mut text = format!("{ambient}: {} maximal subsemigroups\n", all.len());
        for d in &all {
            writeln!(text, "  {d}")?;
        }
        let rows: Vec<[String; 1]> = all.iter().map(|d| [d.to_string()]).collect();
        let body =
            serde_json::json!({ "ambient": ambient, "count": all.len(), "descriptors": all });
        return Ok(Report::new(body)?.text(text).table(&["descriptor"], rows));
    }
    let reports = if mode.verify_all {
        verify_all(ambient, limits)?
    } else {
        let want = parse_pqs(mode.verify.as_deref().expect("clap requires one mode"))?;
        let chosen: Vec<&MaximalDescriptor> = all
            .iter()
            .filter(|d| match (params_of(&d.variant), want) {
                (Some((p, q, s)), (wp, wq, None)) => (p, q) == (wp, wq) && s.is_none(),
                (Some(got), (_, _, Some(_))) => got == want,
                (None, _) => false,
            })
            .collect();
        if chosen.is_empty() {
            return Err(Error::Parameter(format!(
                "no descriptor of {ambient} has parameters {want:?}"
            ))
            .into());
        }
        let amb = AmbientSet::build(ambient, limits)?;
        chosen
            .into_iter()
            .map(|d| verify_maximal(d, &amb))
            .collect::<Result<_, _>>()?
    };
    let ok = reports.iter().all(MaximalReport::passed);
    let failed = reports.iter().filter(|r| !r.passed()).count();
    let mut text = format!("{ambient}: {} checked, {failed} failed\n", reports.len());
    for r in &reports {
        let status = if r.passed() { "ok" } else { "FAIL" };
        writeln!(
            text,
            "  [{status}] {} (removes {})",
            r.descriptor, r.removed
        )?;
    }
    let body = serde_json::json!({ "ambient": ambient, "passed": ok, "reports": reports });
    Ok(Report::new(body)?.ok(ok).text(text).table(
        &[
            "descriptor",
            "removed",
            "closed",
            "proper",
            "maximal",
            "passed",
        ],
        report_rows(&reports),
    ))
}

#[derive(Serialize)]
struct FactorOut {
    #[serde(flatten)]
    factorization: chainsemi::Factorization,
    postconditions: Postconditions,
    verified: bool,
}

fn factorize(text: &str, r: usize, side: Side) -> anyhow::Result<Report> {
    let a: ChainMap = text.parse()?;
    let f = match side {
        Side::Pord => factorize_pord(a, r)?,
        Side::Iord => factorize_iord(a, r)?,
    };
    let post = f.postconditions();
    let verified = post.all();
    let mut text = String::new();
    writeln!(text, "input  {}", f.input)?;
    writeln!(text, "beta   {}", f.beta)?;
    writeln!(text, "gamma  {}  from {:?}", f.gamma, f.gamma_source)?;
    writeln!(text, "delta  {}", f.delta)?;
    writeln!(
        text,
        "m={} p={} s={} t={} ord={} layout={:?}",
        f.m, f.p, f.s, f.t, f.ord, f.layout
    )?;
    writeln!(text, "verified: {verified}")?;
    let row = [
        f.input.to_string(),
        f.beta.to_string(),
        f.gamma.to_string(),
        f.delta.to_string(),
        f.m.to_string(),
        f.p.to_string(),
        f.s.to_string(),
        format!("{:?}", f.gamma_source),
        verified.to_string(),
    ];
    let out = FactorOut {
        factorization: f,
        postconditions: post,
        verified,
    };
    Ok(Report::new(&out)?.ok(verified).text(text).table(
        &[
            "input",
            "beta",
            "gamma",
            "delta",
            "m",
            "p",
            "s",
            "gamma_source",
            "verified",
        ],
        [row],
    ))
}

fn verify(
    max_n: Option<usize>,
    criteria: Vec<u8>,
    inject_failure: Option<usize>,
    limits: &Limits,
) -> anyhow::Result<Report> {
    let cfg = VerifyConfig {
        limits: *limits,
        max_n,
        inject_failure,
    };
    let mut ids: Vec<usize> = if criteria.is_empty() {
        (1..=CRITERIA.len()).collect()
    } else {
        criteria.into_iter().map(usize::from).collect()
    };
    ids.sort_unstable();
    ids.dedup();
    let results: Vec<_> = ids
        .into_iter()
        .map(|id| {
            let res = run_criterion(id, &cfg);
            log::info!(
                "criterion {id} {}",
                if res.passed { "passed" } else { "failed" }
            );
            res
        })
        .collect();
    let ok = results.iter().all(|r| r.passed);
    let mut text = String::new();
    for r in &results {
        let status = if r.passed { "PASS" } else { "FAIL" };
        writeln!(
            text,
            "criterion {:>2} [{status}] {} ({} checks)",
            r.id, r.title, r.checks
        )?;
        for f in r.failures.iter().take(5) {
            writeln!(text, "    {f}")?;
        }
    }
    let passed = results.iter().filter(|r| r.passed).count();
    writeln!(text, "{passed} of {} criteria passed", results.len())?;
    let rows: Vec<[String; 5]> = results
        .iter()
        .map(|r| {
            [
                r.id.to_string(),
                r.title.to_string(),
                r.passed.to_string(),
                r.checks.to_string(),
                r.failures.len().to_string(),
            ]
        })
        .collect();
    // timings are left out so that repeated runs give identical output
    let body = serde_json::json!({
        "max_n": max_n,
        "passed": ok,
        "criteria": results.iter().map(|r| serde_json::json!({
            "id": r.id,
            "title": r.title,
            "passed": r.passed,
            "checks": r.checks,
            "failures": r.failures,
        })).collect::<Vec<_>>(),
    });
    Ok(Report::new(body)?
        .ok(ok)
        .text(text)
        .table(&["id", "title", "passed", "checks", "failures"], rows))
}
