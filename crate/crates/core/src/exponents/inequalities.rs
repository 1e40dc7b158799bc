//! Per-window exponent inequalities and split-polynomial bounds.

use num_rational::Ratio;

use super::estimate::{estimate_wn, estimate_wn_star};
use super::identities::random_series;
use super::report::VerificationReport;
use super::window::{EnumerationWindow, Filter};
use crate::error::Result;
use crate::field::Field;
use crate::laurent::{LaurentSeries, PrecisionBudget};
use crate::random::{self, Rng};
use crate::roots::closest_root;
use crate::tpoly::{RatFn, TPoly};
use crate::xpoly::XPoly;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InequalityCounts {
    pub closest_root: usize,
    pub split_bounds: usize,
    /// Random series in the statistical check.
    pub metric_seeds: usize,
}

impl Default for InequalityCounts {
    fn default() -> Self {
        InequalityCounts { closest_root: 200, split_bounds: 500, metric_seeds: 30 }
    }
}

/// A polynomial split over F_q(T) into primitive linear factors with
/// distinct roots.
#[derive(Debug, Clone)]
pub struct SplitPoly {
    pub poly: XPoly,
    pub roots: Vec<RatFn>,
}

pub fn random_split(rng: &mut Rng, f: &Field, m: usize) -> Result<SplitPoly> {
    let mut roots: Vec<RatFn> = Vec::new();
    let mut poly = XPoly::constant(TPoly::one());
    while roots.len() < m {
        let dc = random::below(rng, 3) as usize;
        let c = random::tpoly_exact(rng, f, dc).monic(f);
        let b = random::tpoly(rng, f, 3);
        if b.gcd(&c, f)? != TPoly::one() {
            continue;
        }
        let r = RatFn::new(b.clone(), c.clone(), f)?;
        if roots.contains(&r) {
            continue;
        }
        poly = poly.mul(&XPoly::from_coeffs(vec![b.neg(f), c]), f);
        roots.push(r);
    }
    Ok(SplitPoly { poly, roots })
}

fn nu_diff(xi: &LaurentSeries, r: &RatFn, budget: &PrecisionBudget) -> Result<Option<i64>> {
    let a = LaurentSeries::from_ratfn(xi.field(), r);
    xi.sub(&a)?.valuation_in(budget)
}

fn split_fields() -> Result<[Field; 2]> {
    Ok([Field::prime(2)?, Field::prime(3)?])
}

/// `0 < |ξ - α| <= |P(ξ)| H(P)^{n-2}` for the closest root `α`.
fn closest_root_check(seed: u64, count: usize, budget: &PrecisionBudget) -> Result<VerificationReport> {
    let mut rep = VerificationReport::new("closest_root");
    let mut rng = random::rng(seed ^ 0xc1);
    let fields = split_fields()?;
    for k in 0..count {
        let f = &fields[k % 2];
        let n = 2 + random::below(&mut rng, 2) as usize;
        let sp = random_split(&mut rng, f, n)?;
        let xi = random_series(&mut rng, f);
        let h = sp.poly.height_log()?;
        let vp = sp.poly.eval_in(&xi, budget)?.valuation()?;
        let mut best: Option<i64> = None;
        for r in &sp.roots {
            if let Some(v) = nu_diff(&xi, r, budget)? {
                best = Some(best.map_or(v, |b| b.max(v)));
            }
        }
        let searched = closest_root(&sp.poly, &xi, budget)?.1.log().map(|l| -l);
        let ok = match (best, vp) {
            (Some(d), Some(v)) => searched == Some(d) && d >= v - (n as i64 - 2) * h,
            _ => false,
        };
        rep.record(ok, || format!("q={} P={} xi={}", f.q(), sp.poly.format(f), xi.format()));
    }
    Ok(rep)
}

/// `|c_m Π_{i∈S} (ξ - α_i)| <= max(1, |ξ|)^m H(P)` for every nonempty `S`,
/// with the product estimates measured against `H(P)` and `|P(ξ)|`.
fn split_bounds(seed: u64, count: usize, budget: &PrecisionBudget) -> Result<(VerificationReport, VerificationReport)> {
    let mut rep = VerificationReport::new("split_product_bound");
    let mut gu = VerificationReport::new("split_product_estimates").informational();
    let mut worst_by_n = [0i64; 5];
    let mut rng = random::rng(seed ^ 0xe5);
    let fields = split_fields()?;
    let rhos = [0i64, -1, -3];
    let mut worst_upper = [0i64; 3];
    let mut worst_lower = [0i64; 3];
    for k in 0..count {
        let f = &fields[k % 2];
        let m = 1 + random::below(&mut rng, 4) as usize;
        let sp = random_split(&mut rng, f, m)?;
        let xi = random_series(&mut rng, f);
        let h = sp.poly.height_log()?;
        let lead = -(sp.poly.lead().deg().unwrap() as i64);
        let big = (-xi.valuation_in(budget)?.unwrap_or(0)).max(0);
        let nus: Vec<i64> = sp
            .roots
            .iter()
            .map(|r| nu_diff(&xi, r, budget).map(|v| v.unwrap_or(i64::MAX / 4)))
            .collect::<Result<_>>()?;
        // log_q |c_m| = deg c_m
        let mut ok = true;
        for s in 1u32..(1 << m) {
            let sum: i64 = (0..m).filter(|i| s >> i & 1 == 1).map(|i| -nus[i]).sum();
            ok &= -lead + sum <= m as i64 * big + h;
        }
        rep.record(ok, || format!("q={} P={} xi={}", f.q(), sp.poly.format(f), xi.format()));
        let vp = sp.poly.eval_in(&xi, budget)?.valuation()?.unwrap_or(i64::MAX / 4);
        let bound = (m * m) as i64;
        let mut within = true;
        for (t, &rho) in rhos.iter().enumerate() {
            let upper = -lead + nus.iter().map(|&v| (-v).max(rho)).sum::<i64>() - h;
            let lower = nus.iter().map(|&v| (-v).min(rho)).sum::<i64>() - (-vp - h);
            worst_upper[t] = worst_upper[t].max(upper.abs());
            worst_lower[t] = worst_lower[t].max(lower.abs());
            within &= upper.abs() <= bound;
            worst_by_n[m] = worst_by_n[m].max(upper.abs());
        }
        gu.record(within, || format!("q={} P={} xi={}", f.q(), sp.poly.format(f), xi.format()));
    }
    for (t, &rho) in rhos.iter().enumerate() {
        gu.measure(&format!("max_abs_log_ratio_upper_rho_q^{rho}"), worst_upper[t]);
        gu.measure(&format!("max_abs_log_ratio_lower_rho_q^{rho}"), worst_lower[t]);
    }
    for (m, w) in worst_by_n.iter().enumerate().skip(1) {
        gu.measure(&format!("max_abs_log_ratio_upper_n{m}"), w);
    }
    gu.measure("bound", "n^2");
    Ok((rep, gu))
}

/// A named series for window checks.
#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: String,
    pub series: LaurentSeries,
}

/// `w̃*_n <= w̃_n` on every series and window; the lower half
/// `w̃_n - n + 1 <= w̃*_n` is reported per series.
pub fn window_inequality(
    corpus: &[CorpusEntry],
    windows: &[EnumerationWindow],
    budget: &PrecisionBudget,
    workers: usize,
) -> Result<(VerificationReport, VerificationReport)> {
    let mut upper = VerificationReport::new("wstar_le_w");
    let mut lower = VerificationReport::new("w_minus_n_plus_1_le_wstar").informational();
    for e in corpus {
        for w in windows {
            let a = estimate_wn(&e.series, w, budget, workers)?;
            let s = estimate_wn_star(&e.series, w, budget, workers)?;
            let key = format!("{} {}", e.name, w);
            upper.record(
                match (s.value, a.value) {
                    (Some(s), Some(a)) => s <= a,
                    (None, _) => true,
                    _ => false,
                },
                || format!("{key}: w*={:?} w={:?}", s.value, a.value),
            );
            if let (Some(sv), Some(av)) = (s.value, a.value) {
                let gap = sv - (av - Ratio::from_integer(w.n as i64 - 1));
                lower.record(gap >= Ratio::from_integer(0), || format!("{key}: gap {gap}"));
                lower.measure(&key, format!("w={av} w*={sv} gap={gap}"));
            }
        }
    }
    Ok((upper, lower))
}

/// Median of the level-`h` exponent of `w̃_n` over seeded random series in F_2.
pub fn metric_median(seeds: usize, n: usize, h: u32, budget: &PrecisionBudget, workers: usize) -> Result<(Ratio<i64>, Vec<Ratio<i64>>)> {
    let f2 = Field::prime(2)?;
    let w = EnumerationWindow::new(n, 1, h, Filter::All)?;
    let mut vals = Vec::with_capacity(seeds);
    for s in 0..seeds as u64 {
        let xi = random::series(&f2, s, 64);
        let e = estimate_wn(&xi, &w, budget, workers)?;
        let v = e.per_level.iter().find(|(l, _)| *l == h).map_or(Ratio::from_integer(0), |(_, v)| *v);
        vals.push(v);
    }
    let mut sorted = vals.clone();
    sorted.sort();
    let k = sorted.len();
    let med = if k % 2 == 1 { sorted[k / 2] } else { (sorted[k / 2 - 1] + sorted[k / 2]) / 2 };
    Ok((med, vals))
}

fn metric_report(seeds: usize, budget: &PrecisionBudget, workers: usize) -> Result<VerificationReport> {
    let mut rep = VerificationReport::new("metric_median").informational();
    let (med, vals) = metric_median(seeds, 2, 5, budget, workers)?;
    rep.record(med >= Ratio::new(8, 5) && med <= Ratio::new(13, 5), || format!("median {med}"));
    rep.measure("median_w2_h5", med);
    rep.measure("values", vals.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","));
    Ok(rep)
}

/// Window inequalities on the corpus, split-polynomial bounds, and the
/// statistical check on random series.
pub fn verify_inequality_suite(
    corpus: &[CorpusEntry],
    windows: &[EnumerationWindow],
    seed: u64,
    counts: &InequalityCounts,
    workers: usize,
) -> Result<Vec<VerificationReport>> {
    let budget = PrecisionBudget::default();
    let (upper, lower) = window_inequality(corpus, windows, &budget, workers)?;
    let (est, gu) = split_bounds(seed, counts.split_bounds, &budget)?;
    Ok(vec![
        upper,
        closest_root_check(seed, counts.closest_root, &budget)?,
        est,
        gu,
        lower,
        metric_report(counts.metric_seeds, &budget, workers)?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_checks_pass() {
        let budget = PrecisionBudget::default();
        let r = closest_root_check(1, 40, &budget).unwrap();
        assert!(r.all_pass(), "{:?}", r.counterexamples.first());
        let (a, _) = split_bounds(1, 60, &budget).unwrap();
        assert!(a.all_pass(), "{:?}", a.counterexamples.first());
    }
}
