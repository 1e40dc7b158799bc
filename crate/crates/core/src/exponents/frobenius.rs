//! Witness transport between `ξ` and `ξ^p`.

use num_rational::Ratio;

use super::estimate::{estimate_what, estimate_wn, Witness};
use super::identities::small_fields;
use super::inequalities::CorpusEntry;
use super::report::VerificationReport;
use super::window::{EnumerationWindow, Filter};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::laurent::{LaurentSeries, PrecisionBudget};
use crate::random::{self, Rng};
use crate::reduce::separable_reduce;
use crate::tpoly::{AbsValue, TPoly};
use crate::xpoly::XPoly;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FrobeniusCounts {
    pub lift: usize,
    pub pullback: usize,
    pub lambda: usize,
}

impl Default for FrobeniusCounts {
    fn default() -> Self {
        FrobeniusCounts { lift: 200, pullback: 100, lambda: 100 }
    }
}

fn nu(p: &XPoly, xi: &LaurentSeries, budget: &PrecisionBudget) -> Result<Option<i64>> {
    p.eval_in(xi, budget)?.valuation()
}

fn fresh_series(rng: &mut Rng, f: &Field) -> LaurentSeries {
    let seed = random::below(rng, u32::MAX) as u64;
    let shift = random::below(rng, 3) as i64;
    random::series(f, seed, 64).shift(shift)
}

/// `ν(Q(ξ^p)) = p ν(P(ξ))` and `h(Q) = p h(P)` for `Q` the Frobenius lift.
fn lift_holds(p: &XPoly, xi: &LaurentSeries, budget: &PrecisionBudget) -> Result<bool> {
    let f = xi.field();
    let pp = f.p() as i64;
    let q = p.frobenius_lift(f);
    let a = nu(p, xi, budget)?;
    let b = nu(&q, &xi.frobenius(), budget)?;
    Ok(b == a.map(|v| v * pp) && q.height_log()? == pp * p.height_log()?)
}

fn lift_check(
    corpus: &[CorpusEntry],
    windows: &[EnumerationWindow],
    seed: u64,
    count: usize,
    budget: &PrecisionBudget,
    workers: usize,
) -> Result<VerificationReport> {
    let mut rep = VerificationReport::new("frobenius_witness_lift");
    let mut rng = random::rng(seed ^ 0xf1);
    let fields = small_fields()?;
    for k in 0..count {
        let f = &fields[k % fields.len()];
        let xi = fresh_series(&mut rng, f);
        let n = 1 + random::below(&mut rng, 3) as usize;
        let p = random::xpoly(&mut rng, f, n, 4);
        let ok = lift_holds(&p, &xi, budget)?;
        rep.record(ok, || format!("q={} P={} xi={}", f.q(), p.format(f), xi.format()));
    }
    for e in corpus {
        for w in windows {
            let est = estimate_wn(&e.series, w, budget, workers)?;
            if let Some(Witness::Poly(p)) = &est.witness {
                let ok = lift_holds(p, &e.series, budget)?;
                rep.record(ok, || format!("{} {w}: P={}", e.name, p.format(e.series.field())));
            }
        }
    }
    Ok(rep)
}

/// Level `h` of `ŵ` for `ξ` transports to level `p h` for `ξ^p`.
fn what_check(corpus: &[CorpusEntry], budget: &PrecisionBudget, workers: usize) -> Result<VerificationReport> {
    let mut rep = VerificationReport::new("frobenius_what_transport");
    for e in corpus {
        let f = e.series.field();
        let pp = f.p();
        let ns: &[usize] = match f.q() {
            2 => &[1, 2],
            3 => &[1],
            _ => &[],
        };
        for &n in ns {
            let hmax = 2u32;
            let base = estimate_what(&e.series, &EnumerationWindow::new(n, 1, hmax, Filter::All)?, budget, workers)?;
            let up_w = EnumerationWindow::new(n, 1, pp * hmax, Filter::All)?;
            let up = estimate_what(&e.series.frobenius(), &up_w, budget, workers)?;
            for &(h, v) in &base.per_level {
                let lifted = up.per_level.iter().find(|(l, _)| *l == pp * h).map(|x| x.1);
                rep.record(lifted.is_some_and(|u| u >= v), || {
                    format!("{} n={n} h={h}: {v} vs {lifted:?}", e.name)
                });
            }
        }
    }
    Ok(rep)
}

/// Pull a witness for `ξ^p` back to `ξ` through `X ↦ X^p` and separable
/// reduction; the reduced ratio is at least the original.
fn pullback_check(seed: u64, count: usize, budget: &PrecisionBudget, workers: usize) -> Result<VerificationReport> {
    let mut rep = VerificationReport::new("frobenius_pullback");
    let mut rng = random::rng(seed ^ 0xf3);
    let fields = [Field::prime(2)?, Field::prime(3)?];
    let mut draws = 0;
    while (rep.instances as usize) < count && draws < 20 * count {
        draws += 1;
        let f = &fields[draws % 2];
        let xi = fresh_series(&mut rng, f);
        let n = 1 + random::below(&mut rng, 2) as usize;
        let hmax = if f.q() == 2 { 3 } else { 2 };
        let xp = xi.frobenius();
        let est = estimate_wn(&xp, &EnumerationWindow::new(n, 1, hmax, Filter::All)?, budget, workers)?;
        let (Some(Witness::Poly(q)), Some(ratio)) = (est.witness, est.value) else {
            rep.quarantine();
            continue;
        };
        if ratio < Ratio::from_integer(1) {
            rep.quarantine();
            continue;
        }
        let pulled = q.expand_frobenius_x(f);
        match separable_reduce(&pulled, &xi, budget) {
            Ok((r, _)) => {
                let v = nu(&r, &xi, budget)?;
                let h = r.height_log()?;
                let ok = matches!(v, Some(v) if Ratio::new(v, h) >= ratio)
                    && r.deg_x().is_some_and(|d| d <= n);
                rep.record(ok, || format!("q={} Q={} R={} xi={}", f.q(), q.format(f), r.format(f), xi.format()));
            }
            Err(Error::ConstantCollapse | Error::DegenerateHeight) => rep.quarantine(),
            Err(e) => return Err(e),
        }
    }
    Ok(rep)
}

/// `min_i ν({R x^i})`, `None` when some fractional part is zero.
fn frac_val(r: &TPoly, x: &LaurentSeries, n: usize, budget: &PrecisionBudget) -> Result<Option<i64>> {
    let mut best = i64::MAX;
    let mut pw = LaurentSeries::one(x.field());
    for _ in 0..n {
        pw = pw.mul(x)?;
        match pw.mul_tpoly(r).frac_abs_in(budget)? {
            AbsValue::Zero => return Ok(None),
            AbsValue::Pow(e) => best = best.min(-e),
        }
    }
    Ok(Some(best))
}

/// `Q = Λ_j(R)` with `j ≡ deg R (mod p)`: `{Q ξ^i} = Λ_j({R ξ^{p i}})` and the
/// ratio for `ξ` is at least the ratio of `R` for `ξ^p`.
fn lambda_check(seed: u64, count: usize, budget: &PrecisionBudget) -> Result<VerificationReport> {
    let mut rep = VerificationReport::new("frobenius_lambda_transport");
    let mut rng = random::rng(seed ^ 0xf4);
    let fields = small_fields()?;
    for k in 0..count {
        let f = &fields[k % fields.len()];
        let p = f.p() as usize;
        let xi = fresh_series(&mut rng, f);
        let xp = xi.frobenius();
        let n = 1 + random::below(&mut rng, 2) as usize;
        let d = p + random::below(&mut rng, (7 - p) as u32) as usize;
        let r = random::monic(&mut rng, f, d);
        let j = d % p;
        let q = r.cartier(j, 1, f);
        let mut ok = q.is_monic() && q.deg() == Some((d - j) / p);
        let mut pw = LaurentSeries::one(f);
        let mut pwp = LaurentSeries::one(f);
        for _ in 0..n {
            pw = pw.mul(&xi)?;
            pwp = pwp.mul(&xp)?;
            let lhs = pw.mul_tpoly(&q).poly_part()?.1;
            let rhs = pwp.mul_tpoly(&r).poly_part()?.1.cartier(j as u32, 1);
            ok &= lhs.agrees_with(&rhs);
        }
        match (frac_val(&r, &xp, n, budget)?, frac_val(&q, &xi, n, budget)?) {
            (Some(vr), Some(vq)) => {
                ok &= Ratio::new(vq, (d - j) as i64 / p as i64) >= Ratio::new(vr, d as i64);
                rep.record(ok, || format!("q={} R={} xi={}", f.q(), r.format(f), xi.format()));
            }
            _ => rep.quarantine(),
        }
    }
    Ok(rep)
}

/// Transport of `w`, `ŵ` and `λ` witnesses under Frobenius.
pub fn verify_frobenius_suite(
    corpus: &[CorpusEntry],
    windows: &[EnumerationWindow],
    seed: u64,
    counts: &FrobeniusCounts,
    workers: usize,
) -> Result<Vec<VerificationReport>> {
    let budget = PrecisionBudget::default();
    Ok(vec![
        lift_check(corpus, windows, seed, counts.lift, &budget, workers)?,
        what_check(corpus, &budget, workers)?,
        pullback_check(seed, counts.pullback, &budget, workers)?,
        lambda_check(seed, counts.lambda, &budget)?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn transports_hold() {
        let f2 = Field::prime(2).unwrap();
        let corpus = vec![CorpusEntry { name: "mahler2".into(), series: corpus::mahler(&f2) }];
        let windows = vec![EnumerationWindow::new(1, 1, 3, Filter::All).unwrap()];
        let counts = FrobeniusCounts { lift: 30, pullback: 20, lambda: 30 };
        for r in verify_frobenius_suite(&corpus, &windows, 5, &counts, 2).unwrap() {
            assert!(r.all_pass(), "{}: {:?}", r.check, r.counterexamples.first());
            assert!(r.instances > 0, "{}", r.check);
        }
    }
}
