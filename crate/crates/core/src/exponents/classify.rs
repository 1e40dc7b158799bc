//! Exponent tables with a heuristic class suggestion.

use num_rational::Ratio;

use super::estimate::{estimate_wn, ExponentEstimate};
use super::window::EnumerationWindow;
use crate::error::Result;
use crate::laurent::{LaurentSeries, Origin, PrecisionBudget};

pub const CLASS_DISCLAIMER: &str =
    "heuristic only: the classes are defined by limsup exponents, which finite windows cannot decide";

#[derive(Debug, Clone)]
pub struct ClassReport {
    pub tables: Vec<ExponentEstimate>,
    pub suggestion: String,
    pub disclaimer: &'static str,
}

/// `w̃_n` tables for every window and an A/S/T/U suggestion.
pub fn classify_report(
    xi: &LaurentSeries,
    windows: &[EnumerationWindow],
    budget: &PrecisionBudget,
    workers: usize,
) -> Result<ClassReport> {
    let tables = windows.iter().map(|w| estimate_wn(xi, w, budget, workers)).collect::<Result<Vec<_>>>()?;
    let first = |n: usize| {
        tables.iter().filter(|e| e.window.n == n).max_by_key(|e| e.window.h_max)
    };
    let degree = match xi.origin() {
        Origin::Algebraic(m) => m.deg_x(),
        Origin::Rational(_) => Some(1),
        Origin::Unknown => tables.iter().filter(|e| e.zero_hits > 0).map(|e| e.window.n).min(),
    };
    let w1 = first(1).and_then(|e| e.value);
    let w1_text = w1.map_or("n/a".to_string(), |v| v.to_string());
    let suggestion = if let Some(d) = degree {
        format!("algebraic/A-regime at n ≥ {d}, w_1 ≈ {w1_text}")
    } else if first(1).is_some_and(|e| {
        let top = e.per_level.iter().max_by_key(|(h, v)| (*v, *h));
        top.is_some_and(|&(h, v)| 2 * h >= e.window.h_max && v > Ratio::from_integer(2))
    }) {
        "U-regime: w_1 window estimates increase without visible bound".to_string()
    } else {
        let parts: Vec<String> = tables
            .iter()
            .filter_map(|e| e.value.map(|v| format!("w_{}≈{}", e.window.n, v)))
            .collect();
        format!("S-regime: w_n ≈ n ({})", parts.join(", "))
    };
    Ok(ClassReport { tables, suggestion, disclaimer: CLASS_DISCLAIMER })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::exponents::Filter;
    use crate::field::Field;
    use crate::random;

    fn windows(hmax: u32) -> Vec<EnumerationWindow> {
        vec![
            EnumerationWindow::new(1, 1, hmax, Filter::All).unwrap(),
            EnumerationWindow::new(2, 1, 4, Filter::All).unwrap(),
        ]
    }

    #[test]
    fn suggestions() {
        let b = PrecisionBudget::default();
        let f3 = Field::prime(3).unwrap();
        let f2 = Field::prime(2).unwrap();
        let m = classify_report(&corpus::mahler(&f3), &windows(6), &b, 2).unwrap();
        assert_eq!(m.suggestion, "algebraic/A-regime at n ≥ 3, w_1 ≈ 2");
        let fa = classify_report(&corpus::factorial(&f2), &windows(9), &b, 2).unwrap();
        assert!(fa.suggestion.starts_with("U-regime"), "{}", fa.suggestion);
        let r = classify_report(&random::series(&f2, 4, 64), &windows(9), &b, 2).unwrap();
        assert!(r.suggestion.starts_with("S-regime"), "{}", r.suggestion);
    }
}
