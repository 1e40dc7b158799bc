//! Checks of the separable reduction and the inseparable-product reduction.

use super::report::VerificationReport;
use crate::error::{Error, Result};
use crate::factor::factor;
use crate::field::Field;
use crate::laurent::{LaurentSeries, PrecisionBudget};
use crate::random::{self, Rng};
use crate::reduce::{pr_reduce, separable_reduce};
use crate::tpoly::TPoly;
use crate::xpoly::XPoly;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReductionCounts {
    pub cartop: usize,
    pub pr: usize,
}

impl Default for ReductionCounts {
    fn default() -> Self {
        ReductionCounts { cartop: 300, pr: 100 }
    }
}

/// Cap on generation attempts per requested instance.
const ATTEMPTS: usize = 200;

fn nu(p: &XPoly, xi: &LaurentSeries, budget: &PrecisionBudget) -> Result<Option<i64>> {
    p.eval_in(xi, budget)?.valuation()
}

/// `Q(X^{p^j})` with the constant term cancelling the polynomial part of
/// the rest, so that `|P(ξ)| < 1`.
pub(crate) fn sharp_inseparable(rng: &mut Rng, f: &Field, xi: &LaurentSeries, j: u32, m: usize, h: usize) -> XPoly {
    let pj = (f.p() as usize).pow(j);
    let mut coeffs = vec![TPoly::zero(); m * pj + 1];
    for k in 1..=m {
        coeffs[k * pj] = random::tpoly(rng, f, h);
    }
    if coeffs[m * pj].is_zero() {
        coeffs[m * pj] = TPoly::one();
    }
    let p = XPoly::from_coeffs(coeffs.clone());
    if let Ok(v) = p.eval(xi) {
        if let Ok((s, _)) = v.poly_part() {
            coeffs[0] = s.neg(f);
        }
    }
    XPoly::from_coeffs(coeffs)
}

fn cartop(seed: u64, count: usize, budget: &PrecisionBudget) -> Result<VerificationReport> {
    let mut rep = VerificationReport::new("cartop_reduction");
    let mut rng = random::rng(seed ^ 0xca);
    let fields = [Field::prime(2)?, Field::prime(3)?];
    let mut collapsed = 0u64;
    let mut degenerate = 0u64;
    let mut out_of_condition = 0u64;
    let mut attempts = 0;
    while (rep.instances as usize) < count && attempts < count * ATTEMPTS {
        attempts += 1;
        let f = &fields[attempts % 2];
        let xi = random::series(f, random::below(&mut rng, u32::MAX) as u64, 64);
        let j = if f.p() == 2 { 1 + random::below(&mut rng, 2) } else { 1 };
        let m = 1 + random::below(&mut rng, 2) as usize;
        let h = 1 + random::below(&mut rng, 3) as usize;
        let p = sharp_inseparable(&mut rng, f, &xi, j, m, h);
        let hp = p.height_log()?;
        let vp = match nu(&p, &xi, budget)? {
            Some(v) if hp >= 1 && v >= hp => v,
            _ => {
                out_of_condition += 1;
                continue;
            }
        };
        match separable_reduce(&p, &xi, budget) {
            Ok((q, trace)) => {
                let hq = q.height_log()?;
                let vq = nu(&q, &xi, budget)?;
                let ok = q.is_p_reduced(f)?
                    && trace.steps.iter().all(|s| s.certificate_holds(f))
                    && q.deg_x() <= p.deg_x()
                    // |Q(ξ)| <= H(Q)^{-w} with w = ν(P(ξ)) / h(P)
                    && vq.is_some_and(|v| v * hp >= vp * hq);
                rep.record(ok, || format!("q={} P={} xi={} Q={}", f.q(), p.format(f), xi.format(), q.format(f)));
            }
            Err(Error::ConstantCollapse) => collapsed += 1,
            Err(Error::DegenerateHeight) => degenerate += 1,
            Err(e) => rep.record(false, || format!("q={} P={} xi={} error={e}", f.q(), p.format(f), xi.format())),
        }
    }
    rep.quarantined = collapsed + degenerate;
    rep.measure("constant_collapse", collapsed);
    rep.measure("degenerate_height", degenerate);
    rep.measure("rejected_out_of_condition", out_of_condition);
    let ok = worked_cartop(budget)?;
    rep.record(ok, || "worked instance X^2+T^2+T at T^-1".into());
    Ok(rep)
}

fn worked_cartop(budget: &PrecisionBudget) -> Result<bool> {
    let f2 = Field::prime(2)?;
    let xi = LaurentSeries::monomial(&f2, 1, 1);
    let p = XPoly::from_coeffs(vec![TPoly::from_coeffs(vec![0, 1, 1]), TPoly::zero(), TPoly::one()]);
    let (q, _) = separable_reduce(&p, &xi, budget)?;
    Ok(q == XPoly::from_coeffs(vec![TPoly::t(), TPoly::one()]))
}

/// An irreducible polynomial in `X^p` of X-degree `p m`.
fn irreducible_inseparable(rng: &mut Rng, f: &Field, m: usize) -> Result<XPoly> {
    let p = f.p() as usize;
    loop {
        let mut coeffs = vec![TPoly::zero(); m * p + 1];
        for k in 0..=m {
            coeffs[k * p] = random::tpoly(rng, f, 2);
        }
        if coeffs[m * p].is_zero() || coeffs[0].is_zero() {
            continue;
        }
        let g = XPoly::from_coeffs(coeffs);
        if factor(&g, f)?.is_irreducible() {
            return Ok(g);
        }
    }
}

/// The four conclusions for `(r, P0)` from `P`.
pub fn pr_conditions(p: &XPoly, r: u32, p0: &XPoly, xi: &LaurentSeries, budget: &PrecisionBudget) -> Result<[bool; 4]> {
    let f = xi.field();
    let pr = (f.p() as i64).pow(r);
    let has_separable = factor(p0, f)?.factors.iter().any(|(g, _)| !g.derivative(f).is_zero());
    let deg_ok = pr * p0.deg_x().unwrap_or(0) as i64 <= p.deg_x().unwrap_or(0) as i64;
    let v = nu(p, xi, budget)?;
    let v0 = nu(p0, xi, budget)?;
    // 0 < |P0(ξ)|^{p^r} < q^{p^r - 1} |P(ξ)|
    let small = matches!((v0, v), (Some(v0), Some(v)) if -pr * v0 < pr - 1 - v);
    let height = pr * p0.height_log()? <= p.height_log()?;
    Ok([has_separable, deg_ok, small, height])
}

fn pr(seed: u64, count: usize, budget: &PrecisionBudget) -> Result<VerificationReport> {
    let mut rep = VerificationReport::new("pr_reduction");
    let mut rng = random::rng(seed ^ 0x9e);
    let fields = [Field::prime(2)?, Field::prime(3)?];
    let mut collapsed = 0u64;
    let mut attempts = 0;
    while (rep.instances as usize) < count && attempts < count * ATTEMPTS {
        attempts += 1;
        let f = &fields[attempts % 2];
        let xi = random::series(f, random::below(&mut rng, u32::MAX) as u64, 64);
        let m = if f.p() == 2 { 1 + random::below(&mut rng, 2) as usize } else { 1 };
        let mut p = irreducible_inseparable(&mut rng, f, m)?;
        if random::below(&mut rng, 2) == 1 {
            let extra = irreducible_inseparable(&mut rng, f, 1)?;
            if p.deg_x().unwrap() + extra.deg_x().unwrap() <= 6 {
                p = p.mul(&extra, f);
            }
        }
        match pr_reduce(&p, &xi, budget) {
            Ok(red) => {
                let c = pr_conditions(&p, red.r, &red.p0, &xi, budget)?;
                rep.record(c.iter().all(|&b| b), || {
                    format!("q={} P={} xi={} r={} P0={} conditions={c:?}", f.q(), p.format(f), xi.format(), red.r, red.p0.format(f))
                });
            }
            Err(Error::ConstantCollapse) => collapsed += 1,
            Err(e) => rep.record(false, || format!("q={} P={} xi={} error={e}", f.q(), p.format(f), xi.format())),
        }
    }
    rep.quarantined = collapsed;
    rep.measure("constant_collapse", collapsed);
    let f2 = Field::prime(2)?;
    let xi = LaurentSeries::exact(&f2, 0, vec![1, 1]);
    let p = XPoly::from_coeffs(vec![TPoly::from_coeffs(vec![0, 1, 1]), TPoly::zero(), TPoly::one()]);
    let red = pr_reduce(&p, &xi, budget)?;
    let c = pr_conditions(&p, red.r, &red.p0, &xi, budget)?;
    let ok = red.r == 1 && red.p0 == XPoly::from_coeffs(vec![TPoly::t(), TPoly::one()]) && c.iter().all(|&b| b);
    rep.record(ok, || "worked instance X^2+T^2+T at 1+T^-1".into());
    Ok(rep)
}

/// Separable-reduction certificates and the four inseparable-product
/// conditions on generated instances; collapses are quarantined.
pub fn verify_reduction_suite(seed: u64, counts: &ReductionCounts) -> Result<Vec<VerificationReport>> {
    let budget = PrecisionBudget::default();
    Ok(vec![cartop(seed, counts.cartop, &budget)?, pr(seed, counts.pr, &budget)?])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_passes() {
        for r in verify_reduction_suite(5, &ReductionCounts { cartop: 30, pr: 15 }).unwrap() {
            assert!(r.all_pass(), "{}: {:?}", r.check, r.counterexamples.first());
            assert!(r.instances >= 16, "{} {}", r.check, r.instances);
        }
    }
}
