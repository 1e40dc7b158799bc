//! Brute-force estimators of `w_n`, `w_n^sep`, `w_n^*` and `ŵ_n`.
//!
//! For a fixed tail `(a_1, ..., a_n)` the only constant term giving
//! `ν(P(ξ)) > 0` is `a_0 = -[Σ a_i ξ^i]`; every other choice has `ν ≤ 0`.
//! Estimators scan tails and fall back to full enumeration only when the
//! positive regime is empty.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::power_table::{Eval, PowerTable};
use super::window::{xpoly_at, EnumerationWindow, Filter};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::laurent::{LaurentSeries, PrecisionBudget};
use crate::roots::base_roots;
use crate::tpoly::TPoly;
use crate::xpoly::XPoly;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    W,
    WSep,
    WStar,
    WHat,
    Lambda,
    LambdaHat,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::W => "w",
            Kind::WSep => "w_sep",
            Kind::WStar => "w_star",
            Kind::WHat => "w_hat",
            Kind::Lambda => "lambda",
            Kind::LambdaHat => "lambda_hat",
        })
    }
}

#[derive(Debug, Clone)]
pub enum Witness {
    Poly(XPoly),
    /// A root `α` of `poly` with `ν(ξ - α) = dist`.
    Root { poly: XPoly, alpha: LaurentSeries, dist: i64 },
    Multiplier(TPoly),
}

impl Witness {
    pub fn format(&self, f: &Field) -> String {
        match self {
            Witness::Poly(p) => p.format(f),
            Witness::Root { poly, alpha, dist } => {
                format!("{}; alpha={}; dist=q^-{}", poly.format(f), alpha.truncate(dist + 1).format(), dist)
            }
            Witness::Multiplier(r) => r.format(f),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExponentEstimate {
    pub kind: Kind,
    /// Exact value in log_q scale; `None` when nothing qualified.
    pub value: Option<Ratio<i64>>,
    pub witness: Option<Witness>,
    pub window: EnumerationWindow,
    /// `(h, best value at level h)`.
    pub per_level: Vec<(u32, Ratio<i64>)>,
    /// Evaluations abandoned after precision escalation.
    pub skipped: u64,
    /// Polynomials or roots with `P(ξ) = 0` or `α = ξ`.
    pub zero_hits: u64,
    /// Polynomials with `H(P) = 1`, excluded from ratios.
    pub height_one: u64,
}

/// A scored candidate; better means larger ratio, then larger height, then
/// smaller canonical index.
#[derive(Debug, Clone)]
pub(crate) struct Cand<W> {
    pub ratio: Ratio<i64>,
    pub h: u32,
    pub idx: u64,
    pub item: W,
}

impl<W> Cand<W> {
    fn beats(&self, o: &Cand<W>) -> bool {
        (self.ratio, self.h, std::cmp::Reverse(self.idx)) > (o.ratio, o.h, std::cmp::Reverse(o.idx))
    }
}

pub(crate) fn pick<W>(a: Option<Cand<W>>, b: Option<Cand<W>>) -> Option<Cand<W>> {
    match (a, b) {
        (Some(a), Some(b)) => Some(if b.beats(&a) { b } else { a }),
        (a, b) => a.or(b),
    }
}

/// Running maximum with per-level maxima and counters.
#[derive(Debug, Clone)]
pub(crate) struct Acc<W> {
    pub best: Option<Cand<W>>,
    pub levels: BTreeMap<u32, Cand<W>>,
    pub skipped: u64,
    pub zero_hits: u64,
    pub height_one: u64,
}

impl<W: Clone> Acc<W> {
    pub fn empty() -> Self {
        Acc { best: None, levels: BTreeMap::new(), skipped: 0, zero_hits: 0, height_one: 0 }
    }

    pub fn push(&mut self, c: Cand<W>) {
        let slot = self.levels.remove(&c.h);
        self.levels.insert(c.h, pick(slot, Some(c.clone())).unwrap());
        self.best = pick(self.best.take(), Some(c));
    }

    pub fn merge(mut self, o: Acc<W>) -> Self {
        for (_, c) in o.levels {
            let slot = self.levels.remove(&c.h);
            self.levels.insert(c.h, pick(slot, Some(c)).unwrap());
        }
        self.best = pick(self.best, o.best);
        self.skipped += o.skipped;
        self.zero_hits += o.zero_hits;
        self.height_one += o.height_one;
        self
    }

    pub fn per_level(&self) -> Vec<(u32, Ratio<i64>)> {
        self.levels.iter().map(|(&h, c)| (h, c.ratio)).collect()
    }
}

pub(crate) fn pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Semantic(format!("thread pool: {e}")))
}

/// Table precision adequate for the window.
pub(crate) fn table_target(n: usize, hmax: u32) -> i64 {
    4 * (n as i64 + 1) * (hmax as i64 + 1) + 32
}

fn tail_coeffs(idx: u64, n: usize, cc: u64, q: u32) -> Vec<TPoly> {
    let mut out = vec![TPoly::zero()];
    out.extend(xpoly_at(idx, n - 1, cc, q).coeffs().iter().cloned());
    out.resize(n + 1, TPoly::zero());
    out
}

/// The positive-regime candidate of one tail.
#[derive(Debug, Clone)]
pub(crate) struct TailHit {
    pub p: XPoly,
    pub h: u32,
    pub idx: u64,
    pub eval: Eval,
}

fn tail_hit(tab: &PowerTable, t: u64, w: &EnumerationWindow, cc: u64) -> Option<TailHit> {
    let f = tab.field();
    let mut coeffs = tail_coeffs(t, w.n, cc, f.q());
    let h_rest = coeffs.iter().filter_map(|c| c.deg()).max().unwrap_or(0);
    let (s, frac) = tab.split(&coeffs);
    let ds = s.deg().unwrap_or(0);
    if ds > w.h_max as usize {
        return None;
    }
    coeffs[0] = s.neg(f);
    let idx = t * cc + coeffs[0].code(f.q());
    let p = XPoly::from_coeffs(coeffs);
    let eval = match frac {
        Some(v) => Eval::Val(v),
        None => tab.escalate(&p),
    };
    Some(TailHit { p, h: h_rest.max(ds) as u32, idx, eval })
}

/// Positive-regime candidates of every tail.
pub(crate) fn tail_hits(tab: &PowerTable, w: &EnumerationWindow, workers: usize) -> Result<Vec<TailHit>> {
    let f = tab.field();
    let tails = w.tuples(w.n, f)?;
    let cc = w.coeff_count(f)?;
    let hits = pool(workers)?.install(|| {
        (0..tails).into_par_iter().filter_map(|t| tail_hit(tab, t, w, cc)).collect::<Vec<_>>()
    });
    Ok(hits)
}

fn score_w(hit: &TailHit, filter: Filter, f: &Field, acc: &mut Acc<XPoly>) {
    if hit.h == 0 {
        return;
    }
    match hit.eval {
        Eval::Val(v) => {
            if filter.accepts(&hit.p, f).unwrap_or(false) {
                acc.push(Cand { ratio: Ratio::new(v, hit.h as i64), h: hit.h, idx: hit.idx, item: hit.p.clone() });
            }
        }
        Eval::Zero => acc.zero_hits += 1,
        Eval::Skipped => acc.skipped += 1,
    }
}

/// Every polynomial of the window, scored directly.
fn brute_w(tab: &PowerTable, w: &EnumerationWindow, workers: usize) -> Result<Acc<XPoly>> {
    let f = tab.field();
    let total = w.tuples(w.n + 1, f)?;
    let cc = w.coeff_count(f)?;
    pool(workers)?.install(|| {
        Ok((1..total)
            .into_par_iter()
            .fold(Acc::empty, |mut acc, i| {
                let p = xpoly_at(i, w.n, cc, f.q());
                let h = p.height_log().unwrap_or(0) as u32;
                if !w.filter.accepts(&p, f).unwrap_or(false) {
                    return acc;
                }
                if h == 0 {
                    acc.height_one += 1;
                    return acc;
                }
                match tab.certify(&p) {
                    Eval::Val(v) => acc.push(Cand { ratio: Ratio::new(v, h as i64), h, idx: i, item: p }),
                    Eval::Zero => acc.zero_hits += 1,
                    Eval::Skipped => acc.skipped += 1,
                }
                acc
            })
            .reduce(Acc::empty, Acc::merge))
    })
}

fn height_one_count(w: &EnumerationWindow, f: &Field) -> u64 {
    let q = f.q() as u64;
    let total = q.pow(w.n as u32 + 1);
    let cc = w.coeff_count(f).unwrap_or(q);
    (1..total)
        .map(|i| {
            let digits: Vec<u64> = (0..=w.n).map(|k| (i / q.pow(k as u32)) % q).collect();
            let idx = digits.iter().rev().fold(0, |a, &d| a * cc + d);
            xpoly_at(idx, w.n, cc, f.q())
        })
        .filter(|p| w.filter.accepts(p, f).unwrap_or(false))
        .count() as u64
}

fn finish_w(kind: Kind, w: EnumerationWindow, acc: Acc<XPoly>) -> ExponentEstimate {
    ExponentEstimate {
        kind,
        value: acc.best.as_ref().map(|c| c.ratio),
        witness: acc.best.as_ref().map(|c| Witness::Poly(c.item.clone())),
        per_level: acc.per_level(),
        window: w,
        skipped: acc.skipped,
        zero_hits: acc.zero_hits,
        height_one: acc.height_one,
    }
}

/// `max (-log_q |P(ξ)|) / h(P)` over the window, `1 <= h(P) <= h_max`.
pub fn estimate_wn(
    xi: &LaurentSeries,
    window: &EnumerationWindow,
    budget: &PrecisionBudget,
    workers: usize,
) -> Result<ExponentEstimate> {
    window.validate()?;
    let f = xi.field();
    let kind = if window.filter == Filter::Separable { Kind::WSep } else { Kind::W };
    let tab = PowerTable::new(xi, window.n, window.h_max as usize, table_target(window.n, window.h_max), budget)?;
    let hits = tail_hits(&tab, window, workers)?;
    let mut acc = Acc::empty();
    for hit in &hits {
        score_w(hit, window.filter, f, &mut acc);
    }
    if acc.best.as_ref().is_none_or(|c| c.ratio <= Ratio::from_integer(0)) {
        acc = brute_w(&tab, window, workers)?;
    } else {
        acc.height_one = height_one_count(window, f);
    }
    Ok(finish_w(kind, *window, acc))
}

/// Roots of `p` other than `ξ` with their distances `ν(ξ - α)`.
fn root_distances(
    p: &XPoly,
    xi: &LaurentSeries,
    bound: Option<i64>,
    budget: &PrecisionBudget,
) -> Result<(Vec<(LaurentSeries, i64)>, u64)> {
    let f = xi.field();
    let mut prec = bound.map_or(64, |b| b + 2).max(8);
    loop {
        let roots = base_roots(p, f, prec)?;
        let x = xi.extend(prec, budget).unwrap_or_else(|_| xi.clone()).truncate(prec);
        let mut out = Vec::new();
        let mut equal = 0;
        for a in roots {
            match x.sub(&a.truncate(prec))?.valuation() {
                Ok(Some(v)) => out.push((a, v)),
                _ => equal += 1,
            }
        }
        if bound.is_some() && equal > 0 {
            return Err(Error::BelowPrecision { attempted: prec });
        }
        if equal <= 1 {
            return Ok((out, equal));
        }
        if prec >= budget.max_terms as i64 * 4 {
            return Err(Error::BelowPrecision { attempted: prec });
        }
        prec *= 2;
    }
}

type RootWitness = (XPoly, LaurentSeries, i64);

/// Score `p` for `w^*`: best root ratio, plus distance-zero count.
fn score_star(
    p: &XPoly,
    h: u32,
    idx: u64,
    bound: Option<i64>,
    xi: &LaurentSeries,
    budget: &PrecisionBudget,
) -> Acc<RootWitness> {
    let mut acc = Acc::empty();
    let f = xi.field();
    if !Filter::Irreducible.accepts(p, f).unwrap_or(false) {
        return acc;
    }
    match root_distances(p, xi, bound, budget) {
        Ok((roots, equal)) => {
            acc.zero_hits += equal;
            for (a, d) in roots {
                let ratio = Ratio::new(d, h as i64) - 1;
                acc.push(Cand { ratio, h, idx, item: (p.clone(), a, d) });
            }
        }
        Err(_) => acc.skipped += 1,
    }
    acc
}

fn star_entry(t: TailHit, slack: i64) -> Option<(Option<Ratio<i64>>, TailHit)> {
    match t.eval {
        Eval::Val(v) => Some((Some(Ratio::new(v + slack, t.h as i64)), t)),
        Eval::Zero => Some((None, t)),
        Eval::Skipped => None,
    }
}

/// Score root candidates in decreasing order of their ratio bound, skipping
/// any whose bound is below the best already found at its level. Candidates
/// without a bound are always scored.
fn score_star_queue(
    mut queue: Vec<(Option<Ratio<i64>>, TailHit)>,
    mut acc: Acc<RootWitness>,
    slack: i64,
    xi: &LaurentSeries,
    budget: &PrecisionBudget,
    pl: &rayon::ThreadPool,
) -> Acc<RootWitness> {
    queue.sort_by(|a, b| {
        let ka = (a.0.is_none(), a.0, a.1.h, std::cmp::Reverse(a.1.idx));
        let kb = (b.0.is_none(), b.0, b.1.h, std::cmp::Reverse(b.1.idx));
        kb.cmp(&ka)
    });
    const BATCH: usize = 128;
    for chunk in queue.chunks(BATCH) {
        let live: Vec<_> = chunk
            .iter()
            .filter(|(b, t)| match (b, acc.levels.get(&t.h)) {
                (Some(b), Some(c)) => *b >= c.ratio,
                _ => true,
            })
            .collect();
        if live.is_empty() {
            continue;
        }
        let part = pl.install(|| {
            live.par_iter()
                .map(|(b, t)| {
                    let bound = b.map(|_| match t.eval {
                        Eval::Val(v) => v + t.h as i64 + slack,
                        _ => unreachable!(),
                    });
                    score_star(&t.p, t.h, t.idx, bound, xi, budget)
                })
                .reduce(Acc::empty, Acc::merge)
        });
        acc = acc.merge(part);
    }
    acc
}

/// `max (-log_q |ξ - α|) / h(P) - 1` over irreducible `P` in the window and
/// roots `α ≠ ξ` of `P` in F_q((T^{-1})).
pub fn estimate_wn_star(
    xi: &LaurentSeries,
    window: &EnumerationWindow,
    budget: &PrecisionBudget,
    workers: usize,
) -> Result<ExponentEstimate> {
    window.validate()?;
    let w = EnumerationWindow { filter: Filter::Irreducible, ..*window };
    let tab = PowerTable::new(xi, w.n, w.h_max as usize, table_target(w.n, w.h_max), budget)?;
    let slack = (w.n as i64 - 1) * tab.log_abs_plus();
    // |ξ - α| >= |P(ξ)| / (H(P) max(1, |ξ|)^{n-1})
    let hits = tail_hits(&tab, &w, workers)?;
    let tail_skips = hits.iter().filter(|t| t.eval == Eval::Skipped).count() as u64;
    let queue: Vec<(Option<Ratio<i64>>, TailHit)> = hits.into_iter().filter(|t| t.h >= 1).filter_map(|t| star_entry(t, slack)).collect();
    let pl = pool(workers)?;
    let mut acc = score_star_queue(queue, Acc::empty(), slack, xi, budget, &pl);
    if acc.best.as_ref().is_none_or(|c| c.ratio < Ratio::from_integer(slack)) {
        // Polynomials outside the tail scan have ν(P(ξ)) <= 0, so their
        // valuations still bound their root distances.
        let f = xi.field();
        let total = w.tuples(w.n + 1, f)?;
        let cc = w.coeff_count(f)?;
        let queue: Vec<_> = pl.install(|| {
            (1..total)
                .into_par_iter()
                .filter_map(|i| {
                    let p = xpoly_at(i, w.n, cc, f.q());
                    let h = p.height_log().unwrap_or(0) as u32;
                    if h == 0 {
                        return None;
                    }
                    let v = tab.val_on_window(&p);
                    let eval = v.map_or(Eval::Skipped, Eval::Val);
                    Some((v.map(|v| Ratio::new(v + slack, h as i64)), TailHit { p, h, idx: i, eval }))
                })
                .collect()
        });
        acc = score_star_queue(queue, Acc::empty(), slack, xi, budget, &pl);
    }
    Ok(ExponentEstimate {
        kind: Kind::WStar,
        value: acc.best.as_ref().map(|c| c.ratio),
        witness: acc.best.as_ref().map(|c| Witness::Root {
            poly: c.item.0.clone(),
            alpha: c.item.1.clone(),
            dist: c.item.2,
        }),
        per_level: acc.per_level(),
        window: w,
        skipped: acc.skipped + tail_skips,
        zero_hits: acc.zero_hits,
        height_one: 0,
    })
}

/// Uniform exponent: for each level `h`, the best `ν(P(ξ))` over `h(P) <= h`
/// divided by `h`; the value is the minimum over levels.
pub fn estimate_what(
    xi: &LaurentSeries,
    window: &EnumerationWindow,
    budget: &PrecisionBudget,
    workers: usize,
) -> Result<ExponentEstimate> {
    window.validate()?;
    let f = xi.field();
    let tab = PowerTable::new(xi, window.n, window.h_max as usize, table_target(window.n, window.h_max), budget)?;
    let hits = tail_hits(&tab, window, workers)?;
    let mut skipped = 0;
    let mut zero_hits = 0;
    // best (ν, idx) by exact height
    let mut by_height: BTreeMap<u32, (i64, std::cmp::Reverse<u64>, XPoly)> = BTreeMap::new();
    for hit in hits {
        match hit.eval {
            Eval::Val(v) if window.filter.accepts(&hit.p, f).unwrap_or(false) => {
                let key = (v, std::cmp::Reverse(hit.idx), hit.p);
                let e = by_height.entry(hit.h).or_insert_with(|| key.clone());
                if (key.0, key.1) > (e.0, e.1) {
                    *e = key;
                }
            }
            Eval::Val(_) => {}
            Eval::Zero => zero_hits += 1,
            Eval::Skipped => skipped += 1,
        }
    }
    // P = 1 (all) or X + c (separable, |ξ| <= 1) gives ν = 0 at height 1
    let floor = (window.filter == Filter::All || tab.log_abs_plus() == 0).then_some(0i64);
    let mut per_level = Vec::new();
    let mut best: Option<(i64, std::cmp::Reverse<u64>, XPoly)> = None;
    let mut value: Option<(Ratio<i64>, Option<XPoly>)> = None;
    let mut levels = by_height.into_iter().peekable();
    for h in 0..=window.h_max {
        while let Some((_, e)) = levels.next_if(|(k, _)| *k <= h) {
            if best.as_ref().is_none_or(|b| (e.0, e.1) > (b.0, b.1)) {
                best = Some(e);
            }
        }
        if h < window.h_min {
            continue;
        }
        let (nu, wit) = match (&best, floor) {
            (Some(b), Some(fl)) if fl > b.0 => (fl, None),
            (Some(b), _) => (b.0, Some(b.2.clone())),
            (None, Some(fl)) => (fl, None),
            (None, None) => continue,
        };
        let r = Ratio::new(nu, h as i64);
        per_level.push((h, r));
        if value.as_ref().is_none_or(|v| r < v.0) {
            value = Some((r, wit));
        }
    }
    Ok(ExponentEstimate {
        kind: Kind::WHat,
        value: value.as_ref().map(|v| v.0),
        witness: value.and_then(|v| v.1).map(Witness::Poly),
        window: *window,
        per_level,
        skipped,
        zero_hits,
        height_one: 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Elem;

    fn mahler(p: u32) -> LaurentSeries {
        let f = Field::prime(p).unwrap();
        LaurentSeries::from_fn(
            &f,
            1,
            move |k| {
                let mut k = k;
                while k % p as i64 == 0 {
                    k /= p as i64;
                }
                (k == 1) as Elem
            },
            64,
        )
    }

    fn mixed(f: &Field) -> LaurentSeries {
        let q = f.q() as i64;
        LaurentSeries::from_fn(f, 1, move |k| ((k * k * 7 + k * 3 + 1) % q) as Elem, 64)
    }

    #[test]
    fn mahler_w1_is_two() {
        let xi = mahler(3);
        let w = EnumerationWindow::new(1, 1, 9, Filter::All).unwrap();
        let budget = PrecisionBudget::default();
        let e = estimate_wn(&xi, &w, &budget, 2).unwrap();
        assert_eq!(e.value, Some(Ratio::from_integer(2)));
        assert_eq!(e.skipped, 0);
        assert!(e.per_level.iter().filter(|(h, _)| *h >= 3).all(|(_, r)| *r <= Ratio::from_integer(2)));
        let Some(Witness::Poly(p)) = &e.witness else { panic!() };
        assert_eq!(p.deg_x(), Some(1));
        assert_eq!(p.lead(), TPoly::monomial(1, 9));
        let v = p.eval_in(&xi, &budget).unwrap().valuation().unwrap().unwrap();
        assert_eq!(Ratio::new(v, p.height_log().unwrap()), Ratio::from_integer(2));
    }

    #[test]
    fn tail_scan_matches_full_enumeration() {
        let budget = PrecisionBudget::default();
        for (p, n, h) in [(2, 2, 3), (3, 1, 3), (2, 1, 5)] {
            let f = Field::prime(p).unwrap();
            let xi = mixed(&f);
            let w = EnumerationWindow::new(n, 1, h, Filter::All).unwrap();
            let fast = estimate_wn(&xi, &w, &budget, 1).unwrap();
            let tab = PowerTable::new(&xi, n, h as usize, table_target(n, h), &budget).unwrap();
            let slow = brute_w(&tab, &w, 1).unwrap();
            assert_eq!(fast.value, slow.best.as_ref().map(|c| c.ratio));
            assert_eq!(fast.per_level, slow.per_level());
            assert_eq!(fast.height_one, slow.height_one);
            let sep = EnumerationWindow { filter: Filter::Separable, ..w };
            let fast = estimate_wn(&xi, &sep, &budget, 1).unwrap();
            let slow = brute_w(&tab, &sep, 1).unwrap();
            assert_eq!(fast.value, slow.best.as_ref().map(|c| c.ratio));
        }
    }

    #[test]
    fn rational_inverse_t() {
        let f2 = Field::prime(2).unwrap();
        let xi = LaurentSeries::monomial(&f2, 1, 1);
        let w = EnumerationWindow::new(1, 1, 4, Filter::All).unwrap();
        let e = estimate_wn(&xi, &w, &PrecisionBudget::default(), 1).unwrap();
        assert_eq!(e.value, Some(Ratio::from_integer(1)));
        assert!(e.zero_hits > 0);
        assert_eq!(e.per_level.last().unwrap().1, Ratio::new(1, 4));
    }

    #[test]
    fn wstar_mahler_and_inequality() {
        let budget = PrecisionBudget::default();
        let xi = mahler(3);
        let w = EnumerationWindow::new(1, 1, 9, Filter::All).unwrap();
        let e = estimate_wn_star(&xi, &w, &budget, 2).unwrap();
        assert_eq!(e.value, Some(Ratio::from_integer(2)));
        let f2 = Field::prime(2).unwrap();
        let xi = mixed(&f2);
        for n in [1, 2] {
            let w = EnumerationWindow::new(n, 1, 3, Filter::All).unwrap();
            let s = estimate_wn_star(&xi, &w, &budget, 1).unwrap();
            let a = estimate_wn(&xi, &w, &budget, 1).unwrap();
            assert!(s.value.unwrap() <= a.value.unwrap());
        }
    }

    fn exhaustive_star(xi: &LaurentSeries, w: &EnumerationWindow) -> Acc<RootWitness> {
        let f = xi.field();
        let cc = w.coeff_count(f).unwrap();
        let mut acc = Acc::empty();
        for i in 1..w.tuples(w.n + 1, f).unwrap() {
            let p = xpoly_at(i, w.n, cc, f.q());
            let h = p.height_log().unwrap_or(0) as u32;
            if h > 0 {
                acc = acc.merge(score_star(&p, h, i, None, xi, &PrecisionBudget::default()));
            }
        }
        acc
    }

    #[test]
    fn wstar_pruning_matches_exhaustive_scoring() {
        let f2 = Field::prime(2).unwrap();
        // close to 0, which only height-zero polynomials reach
        let small = crate::random::series(&f2, 4, 64);
        let cases = [(small, true), (mixed(&f2), false), (mahler(2), false)];
        for (xi, fallback) in cases {
            for n in 1..=2 {
                let w = EnumerationWindow::new(n, 1, 3, Filter::All).unwrap();
                let e = estimate_wn_star(&xi, &w, &PrecisionBudget::default(), 1).unwrap();
                let full = exhaustive_star(&xi, &w);
                assert_eq!(e.value, full.best.as_ref().map(|c| c.ratio), "n={n}");
                if fallback {
                    assert_eq!(e.per_level, full.per_level(), "n={n}");
                }
            }
        }
    }

    #[test]
    fn what_pigeonhole_floor() {
        let budget = PrecisionBudget::default();
        let f3 = Field::prime(3).unwrap();
        let xi = mixed(&f3);
        let n = 2;
        let w = EnumerationWindow::new(n, 2, 3, Filter::All).unwrap();
        let e = estimate_what(&xi, &w, &budget, 2).unwrap();
        for (h, r) in &e.per_level {
            assert!(*r >= Ratio::new(n as i64 * *h as i64 - n as i64 - 1, *h as i64));
        }
        assert_eq!(e.value, e.per_level.iter().map(|x| x.1).min());
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let budget = PrecisionBudget::default();
        let f2 = Field::prime(2).unwrap();
        let xi = mixed(&f2);
        let w = EnumerationWindow::new(2, 1, 3, Filter::All).unwrap();
        let a = estimate_wn(&xi, &w, &budget, 1).unwrap();
        let b = estimate_wn(&xi, &w, &budget, 4).unwrap();
        assert_eq!(a.value, b.value);
        assert_eq!(a.witness.unwrap().format(&f2), b.witness.unwrap().format(&f2));
    }
}
