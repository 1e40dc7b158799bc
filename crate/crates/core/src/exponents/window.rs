//! Enumeration windows and the canonical polynomial order.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factor::is_irreducible;
use crate::field::Field;
use crate::tpoly::TPoly;
use crate::xpoly::XPoly;

/// Default cap on the number of enumerated tuples.
pub const DEFAULT_ENUM_BUDGET: u64 = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Filter {
    All,
    Separable,
    Irreducible,
}

impl Filter {
    /// Whether `p` passes the filter.
    pub fn accepts(self, p: &XPoly, f: &Field) -> Result<bool> {
        match self {
            Filter::All => Ok(!p.is_zero()),
            Filter::Separable => Ok(p.is_nonconstant() && p.is_separable(f)?),
            Filter::Irreducible => Ok(p.is_nonconstant() && is_irreducible(p, f)?),
        }
    }
}

impl fmt::Display for Filter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Filter::All => "all",
            Filter::Separable => "separable",
            Filter::Irreducible => "irreducible",
        })
    }
}

impl FromStr for Filter {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(Filter::All),
            "separable" | "sep" => Ok(Filter::Separable),
            "irreducible" => Ok(Filter::Irreducible),
            _ => Err(Error::Semantic(format!("unknown filter {s:?}"))),
        }
    }
}

/// Polynomials of X-degree at most `n` with coefficient degrees at most
/// `h_max`; `h_min` is the first level reported by level-wise estimators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EnumerationWindow {
    pub n: usize,
    pub h_min: u32,
    pub h_max: u32,
    pub filter: Filter,
    #[serde(skip)]
    pub budget: u64,
}

impl EnumerationWindow {
    pub fn new(n: usize, h_min: u32, h_max: u32, filter: Filter) -> Result<Self> {
        let w = EnumerationWindow { n, h_min, h_max, filter, budget: DEFAULT_ENUM_BUDGET };
        w.validate()?;
        Ok(w)
    }

    pub fn with_budget(self, budget: u64) -> Self {
        EnumerationWindow { budget, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Semantic("window needs n >= 1".into()));
        }
        if self.h_min == 0 || self.h_min > self.h_max {
            return Err(Error::Semantic(format!("window needs 1 <= h_min <= h_max, got {}..{}", self.h_min, self.h_max)));
        }
        Ok(())
    }

    /// Number of coefficient choices, `q^{h_max+1}`.
    pub fn coeff_count(&self, f: &Field) -> Result<u64> {
        (f.q() as u64)
            .checked_pow(self.h_max + 1)
            .ok_or_else(|| Error::BudgetExceeded("coefficient range overflows".into()))
    }

    /// `(q^{h_max+1})^k`, checked against the budget.
    pub fn tuples(&self, k: usize, f: &Field) -> Result<u64> {
        let c = self.coeff_count(f)?;
        match c.checked_pow(k as u32) {
            Some(t) if t <= self.budget => Ok(t),
            _ => Err(Error::BudgetExceeded(format!(
                "{c}^{k} tuples exceed the enumeration budget {}",
                self.budget
            ))),
        }
    }
}

impl fmt::Display for EnumerationWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} h={}..{} filter={}", self.n, self.h_min, self.h_max, self.filter)
    }
}

/// The polynomial with canonical index `idx`: base-`q^{h_max+1}` digits,
/// leading coefficient most significant, each digit a [`TPoly`] code.
pub fn xpoly_at(idx: u64, n: usize, coeff_count: u64, q: u32) -> XPoly {
    let mut coeffs = Vec::with_capacity(n + 1);
    let mut r = idx;
    for _ in 0..=n {
        coeffs.push(TPoly::from_code(r % coeff_count, q));
        r /= coeff_count;
    }
    XPoly::from_coeffs(coeffs)
}

/// Canonical index of `p` within a window with `coeff_count` digits.
pub fn canonical_index(p: &XPoly, coeff_count: u64, q: u32) -> u64 {
    p.coeffs().iter().rev().fold(0u64, |acc, c| acc * coeff_count + c.code(q))
}

/// Every nonzero polynomial of the window passing its filter, in canonical order.
pub fn enum_xpolys(window: &EnumerationWindow, f: &Field) -> Result<impl Iterator<Item = XPoly>> {
    window.validate()?;
    let total = window.tuples(window.n + 1, f)?;
    let cc = window.coeff_count(f)?;
    let (n, q, filter) = (window.n, f.q(), window.filter);
    let f = f.clone();
    Ok((1..total)
        .map(move |i| xpoly_at(i, n, cc, q))
        .filter(move |p| filter.accepts(p, &f).unwrap_or(false)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        let f2 = Field::prime(2).unwrap();
        let w = EnumerationWindow::new(1, 1, 1, Filter::All).unwrap();
        assert_eq!(enum_xpolys(&w, &f2).unwrap().count(), 15);
    }

    #[test]
    fn separable_filter_drops_inseparable() {
        let f2 = Field::prime(2).unwrap();
        let w = EnumerationWindow::new(2, 1, 1, Filter::Separable).unwrap();
        let target = XPoly::from_coeffs(vec![TPoly::t(), TPoly::zero(), TPoly::one()]);
        assert!(enum_xpolys(&w, &f2).unwrap().all(|p| p != target));
        let all = EnumerationWindow { filter: Filter::All, ..w };
        assert!(enum_xpolys(&all, &f2).unwrap().any(|p| p == target));
    }

    #[test]
    fn order_is_deterministic_and_indexed() {
        let f3 = Field::prime(3).unwrap();
        let w = EnumerationWindow::new(1, 1, 1, Filter::All).unwrap();
        let a: Vec<XPoly> = enum_xpolys(&w, &f3).unwrap().collect();
        let b: Vec<XPoly> = enum_xpolys(&w, &f3).unwrap().collect();
        assert_eq!(a, b);
        for (i, p) in a.iter().enumerate() {
            assert_eq!(canonical_index(p, 9, 3), i as u64 + 1);
        }
    }

    #[test]
    fn budget() {
        let f3 = Field::prime(3).unwrap();
        let w = EnumerationWindow::new(2, 1, 9, Filter::All).unwrap();
        assert!(matches!(enum_xpolys(&w, &f3), Err(Error::BudgetExceeded(_))));
        assert!(EnumerationWindow::new(1, 3, 2, Filter::All).is_err());
    }
}
