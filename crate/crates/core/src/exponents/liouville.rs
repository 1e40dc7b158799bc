//! Liouville cap `w_n(α) <= d - 1` on a finite window.

use num_rational::Ratio;

use super::estimate::{table_target, tail_hits};
use super::power_table::{Eval, PowerTable};
use super::report::VerificationReport;
use super::window::EnumerationWindow;
use crate::error::Result;
use crate::laurent::PrecisionBudget;
use crate::roots::AlgebraicSeries;

/// Every ratio `ν(P(α)) / h(P)` with `P(α) ≠ 0` against `d - 1`.
///
/// Levels `h >= h_min` are asserted exactly; lower levels are reported with
/// the measured slack constant `c = max(ν - (d-1) h)`.
pub fn liouville_check(
    alpha: &AlgebraicSeries,
    window: &EnumerationWindow,
    budget: &PrecisionBudget,
    workers: usize,
) -> Result<VerificationReport> {
    window.validate()?;
    let f = alpha.series.field();
    let cap = alpha.degree() as i64 - 1;
    let tab = PowerTable::new(&alpha.series, window.n, window.h_max as usize, table_target(window.n, window.h_max), budget)?;
    let mut rep = VerificationReport::new("liouville_cap");
    let (mut exact, mut slack, mut zeros, mut skipped, mut c) = (0u64, 0u64, 0u64, 0u64, 0i64);
    let mut top = Ratio::from_integer(0);
    for hit in tail_hits(&tab, window, workers)? {
        if hit.h == 0 || !window.filter.accepts(&hit.p, f)? {
            continue;
        }
        let v = match hit.eval {
            Eval::Val(v) => v,
            Eval::Zero => {
                zeros += 1;
                continue;
            }
            Eval::Skipped => {
                skipped += 1;
                continue;
            }
        };
        let h = hit.h as i64;
        let excess = v - cap * h;
        if excess <= 0 {
            exact += 1;
        } else {
            slack += 1;
            c = c.max(excess);
        }
        if hit.h >= window.h_min {
            top = top.max(Ratio::new(v, h));
            rep.record(excess <= 0, || format!("P={} ratio={}", hit.p.format(f), Ratio::new(v, h)));
        }
    }
    rep.measure("degree", alpha.degree());
    rep.measure("exact_passes", exact);
    rep.measure("slack_passes", slack);
    rep.measure("slack_constant", c);
    rep.measure("zero_hits", zeros);
    rep.measure("skipped", skipped);
    rep.measure("max_ratio_from_h_min", top);
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::mahler_minpoly;
    use crate::exponents::Filter;
    use crate::field::Field;
    use crate::roots::{algebraic_series, Branch};

    #[test]
    fn mahler_cap() {
        let f3 = Field::prime(3).unwrap();
        let alpha = algebraic_series(&mahler_minpoly(&f3), Branch { val: 1, lead: None }, &f3, 64).unwrap();
        let w = EnumerationWindow::new(1, 3, 9, Filter::All).unwrap();
        let r = liouville_check(&alpha, &w, &Default::default(), 2).unwrap();
        assert!(r.instances > 0 && r.all_pass(), "{:?}", r.counterexamples.first());
        assert_eq!(r.measured["max_ratio_from_h_min"], "2");
    }

    #[test]
    fn rational_cap() {
        let f2 = Field::prime(2).unwrap();
        let m = crate::xpoly::XPoly::from_coeffs(vec![crate::tpoly::TPoly::one(), crate::tpoly::TPoly::t().add(&crate::tpoly::TPoly::one(), &f2)]);
        let alpha = algebraic_series(&m, Branch { val: 1, lead: None }, &f2, 64).unwrap();
        let w = EnumerationWindow::new(1, 2, 4, Filter::All).unwrap();
        let r = liouville_check(&alpha, &w, &Default::default(), 2).unwrap();
        assert!(r.measured["zero_hits"] != "0");
        assert_eq!(r.measured["skipped"], "0");
    }
}
