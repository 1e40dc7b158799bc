//! Simultaneous-approximation exponents `λ_n` and `λ̂_n`.

use std::cmp::Reverse;

use num_rational::Ratio;
use rayon::prelude::*;

use super::estimate::{pool, table_target, Acc, Cand, ExponentEstimate, Kind, Witness};
use super::power_table::PowerTable;
use super::window::{EnumerationWindow, Filter};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::laurent::{LaurentSeries, PrecisionBudget};
use crate::tpoly::{AbsValue, TPoly};

/// Monic polynomials of degree `1..=d`, by degree then code.
fn monic_multipliers(d: u32, f: &Field, budget: u64) -> Result<Vec<TPoly>> {
    let q = f.q() as u64;
    let total: u64 = (1..=d).map(|k| q.saturating_pow(k)).sum();
    if total > budget {
        return Err(Error::BudgetExceeded(format!("{total} multipliers exceed the enumeration budget {budget}")));
    }
    let mut out = Vec::with_capacity(total as usize);
    for k in 1..=d {
        for low in 0..q.pow(k) {
            out.push(TPoly::from_code(low + q.pow(k), f.q()));
        }
    }
    Ok(out)
}

/// `min_i ν({R ξ^i})` over `i = 1..n`, ignoring exact zeros; `Ok(None)` if
/// every fractional part vanishes, `Err` when precision runs out.
pub fn min_frac_val(tab: &PowerTable, r: &TPoly, n: usize, budget: &PrecisionBudget) -> Result<Option<i64>> {
    let mut best: Option<i64> = None;
    for i in 1..=n {
        let mut coeffs = vec![TPoly::zero(); n + 1];
        coeffs[i] = r.clone();
        let v = match tab.split(&coeffs).1 {
            Some(v) => Some(v),
            None => escalate_frac(tab.xi(), r, i, budget)?,
        };
        if let Some(v) = v {
            best = Some(best.map_or(v, |b| b.min(v)));
        }
    }
    Ok(best)
}

fn escalate_frac(xi: &LaurentSeries, r: &TPoly, i: usize, budget: &PrecisionBudget) -> Result<Option<i64>> {
    let mut last = Error::BelowPrecision { attempted: 0 };
    for factor in [2, 4] {
        let b = budget.scaled(factor);
        let x = xi.pow(i as u32)?.mul_tpoly(r);
        match x.frac_abs_in(&b) {
            Ok(AbsValue::Zero) => return Ok(None),
            Ok(AbsValue::Pow(e)) => return Ok(Some(-e)),
            Err(e) => last = e,
        }
    }
    Err(last)
}

fn lambda_window(n: usize, d_lo: u32, d_max: u32) -> Result<EnumerationWindow> {
    if d_lo == 0 {
        return Err(Error::Semantic("multiplier degree must be at least 1".into()));
    }
    EnumerationWindow::new(n, d_lo, d_max, Filter::All)
}

fn scan(
    xi: &LaurentSeries,
    w: &EnumerationWindow,
    budget: &PrecisionBudget,
    workers: usize,
) -> Result<Acc<TPoly>> {
    let f = xi.field();
    let tab = PowerTable::new(xi, w.n, w.h_max as usize, table_target(w.n, w.h_max), budget)?;
    let rs = monic_multipliers(w.h_max, f, w.budget)?;
    let q = f.q();
    Ok(pool(workers)?.install(|| {
        rs.par_iter()
            .fold(Acc::empty, |mut acc, r| {
                let d = r.deg().unwrap() as u32;
                match min_frac_val(&tab, r, w.n, budget) {
                    Ok(Some(v)) => acc.push(Cand { ratio: Ratio::new(v, d as i64), h: d, idx: r.code(q), item: r.clone() }),
                    Ok(None) => acc.zero_hits += 1,
                    Err(_) => acc.skipped += 1,
                }
                acc
            })
            .reduce(Acc::empty, Acc::merge)
    }))
}

/// `max (-log_q max_i ‖R ξ^i‖) / deg R` over `1 <= deg R <= d_max`.
pub fn estimate_lambda(
    xi: &LaurentSeries,
    n: usize,
    d_max: u32,
    budget: &PrecisionBudget,
    workers: usize,
) -> Result<ExponentEstimate> {
    let w = lambda_window(n, 1, d_max)?;
    let acc = scan(xi, &w, budget, workers)?;
    Ok(ExponentEstimate {
        kind: Kind::Lambda,
        value: acc.best.as_ref().map(|c| c.ratio),
        witness: acc.best.as_ref().map(|c| Witness::Multiplier(c.item.clone())),
        per_level: acc.per_level(),
        window: w,
        skipped: acc.skipped,
        zero_hits: acc.zero_hits,
        height_one: 0,
    })
}

/// For each `d` in `d_lo..=d_max`, the best `min_i ν({R ξ^i})` over
/// `1 <= deg R <= d`, divided by `d`; the value is the minimum over `d`.
pub fn estimate_lambda_hat(
    xi: &LaurentSeries,
    n: usize,
    d_lo: u32,
    d_max: u32,
    budget: &PrecisionBudget,
    workers: usize,
) -> Result<ExponentEstimate> {
    let w = lambda_window(n, d_lo, d_max)?;
    let acc = scan(xi, &w, budget, workers)?;
    // best ν per degree, then running maximum over degrees
    let mut running: Option<(i64, Reverse<u64>, TPoly)> = None;
    let mut per_level = Vec::new();
    let mut value: Option<(Ratio<i64>, TPoly)> = None;
    for d in 1..=d_max {
        if let Some(c) = acc.levels.get(&d) {
            let v = *c.ratio.numer() * d as i64 / *c.ratio.denom();
            let key = (v, Reverse(c.idx), c.item.clone());
            if running.as_ref().is_none_or(|r| (key.0, key.1) > (r.0, r.1)) {
                running = Some(key);
            }
        }
        if d < d_lo {
            continue;
        }
        if let Some(r) = &running {
            let e = Ratio::new(r.0, d as i64);
            per_level.push((d, e));
            if value.as_ref().is_none_or(|v| e < v.0) {
                value = Some((e, r.2.clone()));
            }
        }
    }
    Ok(ExponentEstimate {
        kind: Kind::LambdaHat,
        value: value.as_ref().map(|v| v.0),
        witness: value.map(|v| Witness::Multiplier(v.1)),
        per_level,
        window: w,
        skipped: acc.skipped,
        zero_hits: acc.zero_hits,
        height_one: 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Elem;

    fn mahler3() -> LaurentSeries {
        let f = Field::prime(3).unwrap();
        LaurentSeries::from_fn(
            &f,
            1,
            |k| {
                let mut k = k;
                while k % 3 == 0 {
                    k /= 3;
                }
                (k == 1) as Elem
            },
            64,
        )
    }

    #[test]
    fn mahler_lambda_one() {
        let xi = mahler3();
        let budget = PrecisionBudget::default();
        let tab = PowerTable::new(&xi, 1, 3, 64, &budget).unwrap();
        assert_eq!(min_frac_val(&tab, &TPoly::monomial(1, 3), 1, &budget).unwrap(), Some(6));
        let e = estimate_lambda(&xi, 1, 9, &budget, 2).unwrap();
        assert_eq!(e.value, Some(Ratio::from_integer(2)));
        assert_eq!(e.skipped, 0);
    }

    #[test]
    fn rational_exact_zeros_excluded() {
        let f2 = Field::prime(2).unwrap();
        let xi = LaurentSeries::monomial(&f2, 1, 1);
        let e = estimate_lambda(&xi, 1, 3, &PrecisionBudget::default(), 1).unwrap();
        // R = T^k makes every fractional part vanish; R = T + 1 gives ‖R/T‖ = q^{-1}
        assert!(e.zero_hits >= 3);
        assert_eq!(e.value, Some(Ratio::from_integer(1)));
    }

    #[test]
    fn lambda_hat_is_dominated() {
        let xi = mahler3();
        let budget = PrecisionBudget::default();
        let a = estimate_lambda(&xi, 2, 4, &budget, 1).unwrap();
        let b = estimate_lambda_hat(&xi, 2, 1, 4, &budget, 1).unwrap();
        assert!(b.value.unwrap() <= a.value.unwrap());
        assert_eq!(b.per_level.len(), 4);
    }
}
