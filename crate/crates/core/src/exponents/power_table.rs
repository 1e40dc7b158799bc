//! Dense windows of `ξ^0, ..., ξ^n` for fast evaluation of many polynomials.

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::laurent::{LaurentSeries, PrecisionBudget};
use crate::tpoly::TPoly;
use crate::xpoly::XPoly;

/// Outcome of evaluating `P(ξ)` on the table window.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Eval {
    /// `ν(P(ξ))`.
    Val(i64),
    /// `P(ξ) = 0`, certified.
    Zero,
    /// Precision exhausted at every escalation.
    Skipped,
}

#[derive(Debug, Clone)]
pub struct PowerTable {
    field: Field,
    /// Lowest index present in any power.
    lo: i64,
    /// Every power is known below this index.
    known: i64,
    /// `rows[i][k - lo]` is the coefficient of `T^{-k}` in `ξ^i`.
    rows: Vec<Vec<Elem>>,
    /// Largest coefficient degree the table serves.
    hmax: usize,
    xi: LaurentSeries,
    budget: PrecisionBudget,
}

impl PowerTable {
    /// Powers up to `ξ^n`, accurate enough that `Σ a_i ξ^i` with
    /// `deg a_i <= hmax` is known below index `target`.
    pub fn new(xi: &LaurentSeries, n: usize, hmax: usize, target: i64, budget: &PrecisionBudget) -> Result<Self> {
        let f = xi.field().clone();
        let need = target + hmax as i64;
        let mut powers = Vec::with_capacity(n + 1);
        let mut cur = LaurentSeries::one(&f);
        for i in 0..=n {
            if i > 0 {
                cur = cur.mul(xi)?;
            }
            let ext = cur.extend(need, budget).unwrap_or_else(|_| cur.clone());
            powers.push(ext);
        }
        let known = powers.iter().map(|s| s.prec()).min().unwrap().min(need);
        let lo = powers.iter().map(|s| s.start().min(known)).min().unwrap().min(0);
        let rows = powers
            .iter()
            .map(|s| (lo..known).map(|k| s.coeff(k).unwrap_or(0)).collect())
            .collect();
        Ok(PowerTable { field: f, lo, known, rows, hmax, xi: xi.clone(), budget: *budget })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn xi(&self) -> &LaurentSeries {
        &self.xi
    }

    /// Indices below this bound are exact in every combination.
    pub fn horizon(&self) -> i64 {
        self.known - self.hmax as i64
    }

    /// `-ν(ξ)` clipped at zero.
    pub fn log_abs_plus(&self) -> i64 {
        (0..self.rows[1].len()).find(|&k| self.rows[1][k] != 0).map_or(0, |k| (-(self.lo + k as i64)).max(0))
    }

    /// Coefficients of `Σ_{i≥first} a_i ξ^i` at indices `lo - hmax .. horizon`.
    fn combine(&self, coeffs: &[TPoly], first: usize) -> (i64, Vec<Elem>) {
        let f = &self.field;
        let base = self.lo - self.hmax as i64;
        let end = self.horizon();
        let len = (end - base).max(0) as usize;
        let mut out = vec![0 as Elem; len];
        for (i, a) in coeffs.iter().enumerate().skip(first) {
            let row = &self.rows[i];
            for (d, &c) in a.coeffs().iter().enumerate() {
                if c == 0 {
                    continue;
                }
                // T^d ξ^i at index k reads ξ^i at k + d
                for (slot, o) in out.iter_mut().enumerate() {
                    let src = base + slot as i64 + d as i64 - self.lo;
                    if src >= 0 && (src as usize) < row.len() {
                        let v = row[src as usize];
                        if v != 0 {
                            *o = f.add(*o, f.mul(c, v));
                        }
                    }
                }
            }
        }
        (base, out)
    }

    /// `(s, ν({S}))` for `S = Σ_{i≥1} a_i ξ^i`: the polynomial part and the
    /// valuation of the fractional part, `None` if it vanishes on the window.
    pub fn split(&self, coeffs: &[TPoly]) -> (TPoly, Option<i64>) {
        let (base, v) = self.combine(coeffs, 1);
        let top = (-base).max(0) as usize;
        let poly = TPoly::from_coeffs((0..=top).map(|d| v[(-(d as i64) - base) as usize]).collect());
        let frac = (1.max(base)..base + v.len() as i64).find(|&k| v[(k - base) as usize] != 0);
        (poly, frac)
    }

    /// `ν(P(ξ))` from the window, `None` if it vanishes there.
    pub fn val_on_window(&self, p: &XPoly) -> Option<i64> {
        let (base, v) = self.combine(p.coeffs(), 0);
        v.iter().position(|&c| c != 0).map(|k| base + k as i64)
    }

    /// Certified valuation, escalating to ×2 and ×4 budgets before skipping.
    pub fn certify(&self, p: &XPoly) -> Eval {
        if let Some(v) = self.val_on_window(p) {
            return Eval::Val(v);
        }
        self.escalate(p)
    }

    /// Certified valuation bypassing the table.
    pub fn escalate(&self, p: &XPoly) -> Eval {
        for factor in [2, 4] {
            match p.eval_in(&self.xi, &self.budget.scaled(factor)).and_then(|s| s.valuation()) {
                Ok(Some(v)) => return Eval::Val(v),
                Ok(None) => return Eval::Zero,
                Err(Error::BelowPrecision { .. }) => continue,
                Err(_) => return Eval::Skipped,
            }
        }
        Eval::Skipped
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_direct_evaluation() {
        let f3 = Field::prime(3).unwrap();
        let xi = LaurentSeries::from_fn(&f3, -1, |k| ((k * k + 1) % 3) as Elem, 80);
        let budget = PrecisionBudget::default();
        let tab = PowerTable::new(&xi, 2, 3, 40, &budget).unwrap();
        let p = XPoly::from_coeffs(vec![
            TPoly::from_coeffs(vec![1, 2]),
            TPoly::from_coeffs(vec![0, 0, 1]),
            TPoly::from_coeffs(vec![2, 0, 0, 1]),
        ]);
        let direct = p.eval(&xi).unwrap();
        let v = tab.val_on_window(&p).unwrap();
        assert_eq!(Some(v), direct.valuation().unwrap());
        let (s, frac) = tab.split(p.coeffs());
        let full = direct.sub(&LaurentSeries::from_tpoly(&f3, &p.coeff(0))).unwrap();
        let (s2, r2) = full.poly_part().unwrap();
        assert_eq!(s, s2);
        assert_eq!(frac, r2.valuation().unwrap());
    }

    #[test]
    fn escalation_certifies_rational_zero() {
        let f2 = Field::prime(2).unwrap();
        let xi = LaurentSeries::monomial(&f2, 1, 1);
        let tab = PowerTable::new(&xi, 1, 2, 16, &PrecisionBudget::default()).unwrap();
        let p = XPoly::from_coeffs(vec![TPoly::one(), TPoly::t()]);
        assert_eq!(tab.certify(&p), Eval::Zero);
    }
}
