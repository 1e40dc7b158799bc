//! Subcommand dispatch.

use num_rational::Ratio;
use serde_json::{json, Value};

use fqdio::cfrac::{cf_exactness_check, cf_expand, cf_w1_estimate};
use fqdio::exponents::{
    classify_report, estimate_lambda, estimate_lambda_hat, estimate_what, estimate_wn, estimate_wn_star,
    pr_conditions, verify_frobenius_suite, verify_identity_suite, verify_inequality_suite,
    verify_reduction_suite, CorpusEntry, EnumerationWindow, ExponentEstimate, Filter, FrobeniusCounts,
    IdentityCounts, InequalityCounts, ReductionCounts, VerificationReport,
};
use fqdio::reduce::{pr_reduce, separable_reduce};
use fqdio::roots::{base_roots, newton_polygon, Branch};
use fqdio::{corpus, Error, Field, FieldSpec, LaurentSeries, PrecisionBudget, RatFn, Result, TPoly, XPoly};

use crate::parse::{parse_field, parse_xpoly, SeriesSpec};
use crate::{Cli, Cmd, ExponentKind, ReduceKind, RunConfig, Suite};

/// Random seeds in the named corpus.
pub const CORPUS_RANDOM_SEEDS: u64 = 10;

/// Everything a command produces.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub json: Value,
    /// Header and rows of the tabular form.
    pub table: Vec<Vec<String>>,
    pub witnesses: Vec<String>,
    /// False when a gating verification report failed.
    pub ok: bool,
}

impl Outcome {
    fn new(json: Value, table: Vec<Vec<String>>, witnesses: Vec<String>) -> Self {
        Outcome { json, table, witnesses, ok: true }
    }
}

pub fn field_of(cfg: &RunConfig) -> Result<Field> {
    let spec = match &cfg.modulus {
        Some(m) => parse_field(&format!("p={},f={},modulus={m}", cfg.p, cfg.f))?,
        None => FieldSpec::with_default_modulus(cfg.p, cfg.f)?,
    };
    Field::new(spec)
}

fn budget_of(cfg: &RunConfig) -> PrecisionBudget {
    PrecisionBudget::new(cfg.max_terms)
}

fn series_of(cfg: &RunConfig, f: &Field) -> Result<(SeriesSpec, LaurentSeries)> {
    let text = cfg.series.as_deref().ok_or_else(|| Error::Semantic("--series is required".into()))?;
    let spec = SeriesSpec::parse(text, f)?;
    let s = spec.build(f, cfg.prec)?;
    Ok((spec, s))
}

fn poly_of(cfg: &RunConfig, f: &Field) -> Result<XPoly> {
    let text = cfg.poly.as_deref().ok_or_else(|| Error::Semantic("--poly is required".into()))?;
    parse_xpoly(text, f)
}

fn window_of(cfg: &RunConfig, n: usize) -> Result<EnumerationWindow> {
    Ok(EnumerationWindow::new(n, cfg.hmin, cfg.hmax, cfg.filter)?.with_budget(cfg.enum_budget))
}

pub fn ratio_json(r: Ratio<i64>) -> Value {
    json!({ "num": r.numer(), "den": r.denom() })
}

fn field_json(f: &Field) -> Value {
    json!({ "p": f.p(), "f": f.spec().f })
}

/// The exponent report schema.
pub fn estimate_json(e: &ExponentEstimate, f: &Field, series: &str) -> Value {
    json!({
        "kind": e.kind.to_string(),
        "field": field_json(f),
        "series": series,
        "window": {
            "n": e.window.n,
            "h_min": e.window.h_min,
            "h_max": e.window.h_max,
            "filter": e.window.filter.to_string(),
        },
        "value": e.value.map(ratio_json),
        "witness": e.witness.as_ref().map(|w| w.format(f)),
        "per_level": e.per_level.iter().map(|&(h, v)| json!([h, ratio_json(v)])).collect::<Vec<_>>(),
        "skipped": e.skipped,
    })
}

const ESTIMATE_HEADER: [&str; 9] = ["kind", "series", "n", "h_min", "h_max", "filter", "level", "num", "den"];

fn estimate_rows(e: &ExponentEstimate, series: &str) -> Vec<Vec<String>> {
    let w = &e.window;
    let base = |level: String, v: Option<Ratio<i64>>| {
        vec![
            e.kind.to_string(),
            series.to_string(),
            w.n.to_string(),
            w.h_min.to_string(),
            w.h_max.to_string(),
            w.filter.to_string(),
            level,
            v.map_or(String::new(), |v| v.numer().to_string()),
            v.map_or(String::new(), |v| v.denom().to_string()),
        ]
    };
    let mut rows = vec![base("value".into(), e.value)];
    rows.extend(e.per_level.iter().map(|&(h, v)| base(h.to_string(), Some(v))));
    rows
}

fn header(h: &[&str]) -> Vec<String> {
    h.iter().map(|s| s.to_string()).collect()
}

fn exponent(cfg: &RunConfig, kind: ExponentKind) -> Result<Outcome> {
    let f = field_of(cfg)?;
    let (spec, xi) = series_of(cfg, &f)?;
    let b = budget_of(cfg);
    let e = match kind {
        ExponentKind::W => estimate_wn(&xi, &window_of(cfg, cfg.n)?, &b, cfg.workers)?,
        ExponentKind::Wstar => estimate_wn_star(&xi, &window_of(cfg, cfg.n)?, &b, cfg.workers)?,
        ExponentKind::What => estimate_what(&xi, &window_of(cfg, cfg.n)?, &b, cfg.workers)?,
        ExponentKind::Lambda => estimate_lambda(&xi, cfg.n, cfg.dmax, &b, cfg.workers)?,
        ExponentKind::Lambdahat => estimate_lambda_hat(&xi, cfg.n, cfg.hmin, cfg.dmax, &b, cfg.workers)?,
    };
    let name = spec.format(&f);
    let mut table = vec![header(&ESTIMATE_HEADER)];
    table.extend(estimate_rows(&e, &name));
    let witnesses = e.witness.iter().map(|w| format!("{}: {}", e.kind, w.format(&f))).collect();
    Ok(Outcome::new(estimate_json(&e, &f, &name), table, witnesses))
}

fn cf(cfg: &RunConfig) -> Result<Outcome> {
    let f = field_of(cfg)?;
    let (spec, xi) = series_of(cfg, &f)?;
    let b = budget_of(cfg);
    let exp = cf_expand(&xi, cfg.terms, &b)?;
    let exact = match cf_exactness_check(&xi, &exp, &b) {
        Ok(v) => v,
        Err(Error::TooFewQuotients) => Vec::new(),
        Err(e) => return Err(e),
    };
    let w1 = match cf_w1_estimate(&exp) {
        Ok(w) => json!({
            "value": w.value.map(ratio_json),
            "witness_k": w.witness,
            "per_k": w.per_k.iter().map(|&(k, r)| json!([k, ratio_json(r)])).collect::<Vec<_>>(),
            "degenerate": w.degenerate,
        }),
        Err(Error::TooFewQuotients) => Value::Null,
        Err(e) => return Err(e),
    };
    let quotients: Vec<String> = exp.quotients.iter().map(|a| a.format(&f)).collect();
    let convergents: Vec<Value> =
        exp.convergents.iter().map(|(p, q)| json!({ "p": p.format(&f), "q": q.format(&f) })).collect();
    let mut table = vec![header(&["k", "quotient", "p", "q", "exact"])];
    for (k, a) in quotients.iter().enumerate() {
        let (p, q) = &exp.convergents[k];
        let ex = exact.get(k).map_or(String::new(), |b| b.to_string());
        table.push(vec![k.to_string(), a.clone(), p.format(&f), q.format(&f), ex]);
    }
    let witnesses = exp.convergents.iter().map(|(p, q)| format!("{}/{}", p.format(&f), q.format(&f))).collect();
    let json = json!({
        "field": field_json(&f),
        "series": spec.format(&f),
        "quotients": quotients,
        "convergents": convergents,
        "terminated": exp.terminated,
        "exactness": exact,
        "w1": w1,
    });
    Ok(Outcome::new(json, table, witnesses))
}

fn roots(cfg: &RunConfig) -> Result<Outcome> {
    let f = field_of(cfg)?;
    let p = poly_of(cfg, &f)?;
    let np = newton_polygon(&p)?;
    let found = base_roots(&p, &f, cfg.prec)?;
    let roots: Vec<String> = found.iter().map(|r| r.truncate(cfg.prec).format()).collect();
    let segments: Vec<Value> =
        np.segments.iter().map(|&(s, l)| json!({ "slope": ratio_json(s), "length": l })).collect();
    let mut table = vec![header(&["slope_num", "slope_den", "length"])];
    for &(s, l) in &np.segments {
        table.push(vec![s.numer().to_string(), s.denom().to_string(), l.to_string()]);
    }
    let json = json!({
        "field": field_json(&f),
        "poly": p.format(&f),
        "newton_polygon": { "vertices": np.vertices, "segments": segments },
        "roots": roots,
    });
    Ok(Outcome::new(json, table, roots))
}

fn reduce(cfg: &RunConfig, which: ReduceKind) -> Result<Outcome> {
    let f = field_of(cfg)?;
    let (spec, xi) = series_of(cfg, &f)?;
    let p = poly_of(cfg, &f)?;
    let b = budget_of(cfg);
    let name = spec.format(&f);
    match which {
        ReduceKind::Cartop => {
            let (q, trace) = separable_reduce(&p, &xi, &b)?;
            let steps: Vec<Value> = trace
                .steps
                .iter()
                .map(|s| {
                    json!({
                        "j": s.j,
                        "s": s.s,
                        "before": s.before.format(&f),
                        "intermediate": s.intermediate.format(&f),
                        "nu_before": s.nu_before,
                        "nu_after": s.nu_after,
                        "certificate": s.certificate_holds(&f),
                    })
                })
                .collect();
            let mut table = vec![header(&["step", "j", "s", "nu_before", "nu_after", "certificate"])];
            for (i, s) in trace.steps.iter().enumerate() {
                table.push(vec![
                    i.to_string(),
                    s.j.to_string(),
                    s.s.to_string(),
                    s.nu_before.to_string(),
                    s.nu_after.to_string(),
                    s.certificate_holds(&f).to_string(),
                ]);
            }
            let ok = trace.steps.iter().all(|s| s.certificate_holds(&f)) && q.is_p_reduced(&f)?;
            let json = json!({
                "field": field_json(&f),
                "series": name,
                "poly": p.format(&f),
                "result": q.format(&f),
                "p_reduced": q.is_p_reduced(&f)?,
                "height_log": q.height_log()?,
                "steps": steps,
            });
            Ok(Outcome { ok, ..Outcome::new(json, table, vec![q.format(&f)]) })
        }
        ReduceKind::Pr => {
            let r = pr_reduce(&p, &xi, &b)?;
            let conds = pr_conditions(&p, r.r, &r.p0, &xi, &b)?;
            let mut table = vec![header(&["condition", "holds"])];
            for (i, c) in conds.iter().enumerate() {
                table.push(vec![(i + 1).to_string(), c.to_string()]);
            }
            let json = json!({
                "field": field_json(&f),
                "series": name,
                "poly": p.format(&f),
                "r": r.r,
                "p0": r.p0.format(&f),
                "selections": r.selections,
                "conditions": conds,
            });
            Ok(Outcome { ok: conds.iter().all(|&c| c), ..Outcome::new(json, table, vec![r.p0.format(&f)]) })
        }
    }
}

/// Named series over `f`: rational, algebraic, Mahler, factorial and
/// seeded random series.
pub fn corpus_specs(f: &Field, seed: u64) -> Vec<(String, SeriesSpec)> {
    let t = TPoly::t();
    let t2 = t.mul(&t, f).add(&TPoly::one(), f);
    let mut out = vec![
        ("rational".to_string(), SeriesSpec::Rational(RatFn::new(t, t2, f).expect("nonzero denominator"))),
        ("mahler".to_string(), SeriesSpec::Mahler),
        (
            "mahler_algebraic".to_string(),
            SeriesSpec::Algebraic { minpoly: corpus::mahler_minpoly(f), branch: Branch { val: 1, lead: None } },
        ),
        ("factorial".to_string(), SeriesSpec::Factorial),
    ];
    for s in seed..seed + CORPUS_RANDOM_SEEDS {
        out.push((format!("random{s}"), SeriesSpec::Random { seed: s }));
    }
    out
}

pub fn corpus_entries(f: &Field, seed: u64, prec: i64) -> Result<Vec<CorpusEntry>> {
    corpus_specs(f, seed)
        .into_iter()
        .map(|(_, s)| Ok(CorpusEntry { name: s.format(f), series: s.build(f, prec)? }))
        .collect()
}

/// Windows of the per-window checks: `n ∈ {1, 2}`, heights `1..=h_max`.
pub fn verify_windows(cfg: &RunConfig) -> Result<Vec<EnumerationWindow>> {
    [1, 2].iter().map(|&n| Ok(EnumerationWindow::new(n, 1, cfg.hmax, Filter::All)?.with_budget(cfg.enum_budget))).collect()
}

fn verify(cfg: &RunConfig, suite: Suite) -> Result<Outcome> {
    let f = field_of(cfg)?;
    let run = |s: Suite| -> Result<Vec<VerificationReport>> {
        match s {
            Suite::Identities => verify_identity_suite(cfg.seed, &IdentityCounts::default()),
            Suite::Reductions => verify_reduction_suite(cfg.seed, &ReductionCounts::default()),
            Suite::Inequalities => verify_inequality_suite(
                &corpus_entries(&f, cfg.seed, cfg.prec)?,
                &verify_windows(cfg)?,
                cfg.seed,
                &InequalityCounts::default(),
                cfg.workers,
            ),
            Suite::Frobenius => verify_frobenius_suite(
                &corpus_entries(&f, cfg.seed, cfg.prec)?,
                &verify_windows(cfg)?,
                cfg.seed,
                &FrobeniusCounts::default(),
                cfg.workers,
            ),
            Suite::All => unreachable!(),
        }
    };
    let suites = match suite {
        Suite::All => vec![Suite::Identities, Suite::Reductions, Suite::Inequalities, Suite::Frobenius],
        s => vec![s],
    };
    let mut reports = Vec::new();
    for s in suites {
        reports.extend(run(s)?);
    }
    let ok = reports.iter().all(|r| r.ok());
    let mut table = vec![header(&["check", "instances", "passes", "quarantined", "informational", "ok"])];
    let mut witnesses = Vec::new();
    for r in &reports {
        table.push(vec![
            r.check.clone(),
            r.instances.to_string(),
            r.passes.to_string(),
            r.quarantined.to_string(),
            r.informational.to_string(),
            r.ok().to_string(),
        ]);
        witnesses.extend(r.counterexamples.iter().map(|c| format!("{}: {c}", r.check)));
    }
    let json = json!({
        "field": field_json(&f),
        "seed": cfg.seed,
        "reports": serde_json::to_value(&reports).map_err(|e| Error::Semantic(e.to_string()))?,
        "ok": ok,
    });
    Ok(Outcome { ok, ..Outcome::new(json, table, witnesses) })
}

fn classify(cfg: &RunConfig) -> Result<Outcome> {
    let f = field_of(cfg)?;
    let (spec, xi) = series_of(cfg, &f)?;
    let windows = (1..=cfg.n).map(|n| window_of(cfg, n)).collect::<Result<Vec<_>>>()?;
    let rep = classify_report(&xi, &windows, &budget_of(cfg), cfg.workers)?;
    let name = spec.format(&f);
    let mut table = vec![header(&ESTIMATE_HEADER)];
    for e in &rep.tables {
        table.extend(estimate_rows(e, &name));
    }
    let witnesses =
        rep.tables.iter().filter_map(|e| e.witness.as_ref().map(|w| format!("n={}: {}", e.window.n, w.format(&f)))).collect();
    let json = json!({
        "field": field_json(&f),
        "series": name,
        "tables": rep.tables.iter().map(|e| estimate_json(e, &f, &name)).collect::<Vec<_>>(),
        "suggestion": rep.suggestion,
        "disclaimer": rep.disclaimer,
    });
    Ok(Outcome::new(json, table, witnesses))
}

fn corpus_list(cfg: &RunConfig) -> Result<Outcome> {
    let f = field_of(cfg)?;
    let specs = corpus_specs(&f, cfg.seed);
    let mut table = vec![header(&["name", "spec"])];
    let mut items = Vec::new();
    for (name, s) in &specs {
        table.push(vec![name.clone(), s.format(&f)]);
        items.push(json!({ "name": name, "spec": s.format(&f) }));
    }
    Ok(Outcome::new(json!({ "field": field_json(&f), "corpus": items }), table, Vec::new()))
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let cfg = &cli.cfg;
    if cfg.prec <= 0 || cfg.max_terms == 0 || cfg.enum_budget == 0 || cfg.workers == 0 {
        return Err(Error::Semantic("budgets, precision and worker count must be positive".into()));
    }
    match &cli.cmd {
        Cmd::Exponent { kind } => exponent(cfg, *kind),
        Cmd::Cf => cf(cfg),
        Cmd::Roots => roots(cfg),
        Cmd::Reduce { which } => reduce(cfg, *which),
        Cmd::Verify { suite } => verify(cfg, *suite),
        Cmd::Classify => classify(cfg),
        Cmd::Corpus { .. } => corpus_list(cfg),
    }
}
