//! Continued fractions over F_q[T].

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::laurent::{LaurentSeries, PrecisionBudget};
use crate::tpoly::TPoly;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CFExpansion {
    /// `a_0, a_1, ...` with `deg a_k ≥ 1` for `k ≥ 1`.
    pub quotients: Vec<TPoly>,
    /// `(p_k, q_k)` with `q_k` monic.
    pub convergents: Vec<(TPoly, TPoly)>,
    /// The expansion ended because the value is rational.
    pub terminated: bool,
}

/// Convergents from the recurrence `p_k = a_k p_{k-1} + p_{k-2}`.
pub fn convergents_raw(quotients: &[TPoly], f: &Field) -> Vec<(TPoly, TPoly)> {
    let (mut p2, mut q2) = (TPoly::zero(), TPoly::one());
    let (mut p1, mut q1) = (TPoly::one(), TPoly::zero());
    let mut out = Vec::with_capacity(quotients.len());
    for a in quotients {
        let p = a.mul(&p1, f).add(&p2, f);
        let q = a.mul(&q1, f).add(&q2, f);
        out.push((p.clone(), q.clone()));
        (p2, q2, p1, q1) = (p1, q1, p, q);
    }
    out
}

/// The first `k + 1` partial quotients of `ξ` (fewer if `ξ` is rational).
pub fn cf_expand(xi: &LaurentSeries, k: usize, budget: &PrecisionBudget) -> Result<CFExpansion> {
    let f = xi.field().clone();
    let mut quotients = Vec::new();
    let mut x = xi.clone();
    let mut terminated = false;
    for i in 0..=k {
        let (a, frac) = x
            .with_growth(budget, |s| s.poly_part())
            .map_err(|_| Error::BelowPrecision { attempted: i as i64 })?;
        quotients.push(a);
        match frac.valuation_in(budget) {
            Ok(None) => {
                terminated = true;
                break;
            }
            Ok(Some(_)) => {}
            Err(_) => return Err(Error::BelowPrecision { attempted: i as i64 }),
        }
        if i < k {
            x = frac.inv()?;
        }
    }
    let convergents = convergents_raw(&quotients, &f)
        .into_iter()
        .map(|(p, q)| {
            let u = f.inv(q.lead()).expect("nonzero denominator");
            (p.scale(u, &f), q.scale(u, &f))
        })
        .collect();
    Ok(CFExpansion { quotients, convergents, terminated })
}

/// `|ξ - p_k/q_k| = |q_k|^{-1} |q_{k+1}|^{-1}` for every `k` with `q_{k+1}` known.
pub fn cf_exactness_check(xi: &LaurentSeries, exp: &CFExpansion, budget: &PrecisionBudget) -> Result<Vec<bool>> {
    if exp.quotients.len() < 2 {
        return Err(Error::TooFewQuotients);
    }
    let mut out = Vec::new();
    for k in 0..exp.convergents.len() - 1 {
        let (p, q) = &exp.convergents[k];
        let next = exp.convergents[k + 1].1.deg().unwrap() as i64;
        let diff = xi.mul_tpoly(q).sub(&LaurentSeries::from_tpoly(xi.field(), p))?;
        let v = diff.valuation_in(budget)?;
        out.push(v == Some(next));
    }
    Ok(out)
}

/// Degree-one exponent witnessed by convergents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct W1Estimate {
    /// Best `deg q_{k+1} / max(deg q_k, deg p_k)`, if any convergent qualifies.
    pub value: Option<Ratio<i64>>,
    /// Index `k` of the witnessing convergent.
    pub witness: Option<usize>,
    /// Per-convergent ratios `(k, ratio)`.
    pub per_k: Vec<(usize, Ratio<i64>)>,
    /// The value is rational (finite expansion).
    pub degenerate: bool,
}

pub fn cf_w1_estimate(exp: &CFExpansion) -> Result<W1Estimate> {
    if exp.quotients.len() < 3 && !exp.terminated {
        return Err(Error::TooFewQuotients);
    }
    let mut per_k = Vec::new();
    for k in 0..exp.convergents.len().saturating_sub(1) {
        let (p, q) = &exp.convergents[k];
        let h = q.deg().unwrap().max(p.deg().unwrap_or(0)) as i64;
        if h == 0 {
            continue;
        }
        let next = exp.convergents[k + 1].1.deg().unwrap() as i64;
        per_k.push((k, Ratio::new(next, h)));
    }
    let best = per_k.iter().copied().max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)));
    Ok(W1Estimate {
        value: best.map(|b| b.1),
        witness: best.map(|b| b.0),
        per_k,
        degenerate: exp.terminated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Elem;
    use crate::tpoly::RatFn;

    fn t(v: &[Elem]) -> TPoly {
        TPoly::from_coeffs(v.to_vec())
    }

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

    #[test]
    fn rational_expansion() {
        let f3 = Field::prime(3).unwrap();
        let r = RatFn::new(TPoly::t(), t(&[1, 0, 1]), &f3).unwrap();
        let xi = LaurentSeries::from_ratfn(&f3, &r);
        let e = cf_expand(&xi, 10, &PrecisionBudget::default()).unwrap();
        assert_eq!(e.quotients, vec![TPoly::zero(), TPoly::t(), TPoly::t()]);
        assert!(e.terminated);
        assert_eq!(e.convergents[1], (TPoly::one(), TPoly::t()));
        assert_eq!(cf_exactness_check(&xi, &e, &PrecisionBudget::default()).unwrap(), vec![true, true]);
        let w = cf_w1_estimate(&e).unwrap();
        assert!(w.degenerate);
    }

    #[test]
    fn inverse_t() {
        let f2 = Field::prime(2).unwrap();
        let xi = LaurentSeries::monomial(&f2, 1, 1);
        let e = cf_expand(&xi, 5, &PrecisionBudget::default()).unwrap();
        assert_eq!(e.quotients, vec![TPoly::zero(), TPoly::t()]);
        assert!(e.terminated);
    }

    #[test]
    fn mahler_expansion() {
        let xi = mahler(3);
        let budget = PrecisionBudget::default();
        let e = cf_expand(&xi, 6, &budget).unwrap();
        assert_eq!(e.quotients.len(), 7);
        assert!(e.quotients.iter().skip(1).all(|a| a.deg().unwrap() >= 1));
        assert!(cf_exactness_check(&xi, &e, &budget).unwrap().iter().all(|&b| b));
        let w = cf_w1_estimate(&e).unwrap();
        assert_eq!(w.value, Some(Ratio::from_integer(2)));
        assert_eq!(e.convergents[w.witness.unwrap()].1, TPoly::t());
        let at_t3 = w.per_k.iter().find(|(k, _)| e.convergents[*k].1 == TPoly::monomial(1, 3)).unwrap();
        assert_eq!(at_t3.1, Ratio::from_integer(2));
        assert_eq!(e.convergents[at_t3.0].0, t(&[1, 0, 1]));
        // Re-expanding the truncated continued fraction gives the same quotients.
        let (p, q) = e.convergents.last().unwrap().clone();
        let f = xi.field().clone();
        let r = LaurentSeries::from_ratfn(&f, &RatFn::new(p, q, &f).unwrap());
        let again = cf_expand(&r, 20, &budget).unwrap();
        assert_eq!(again.quotients, e.quotients);
    }

    #[test]
    fn too_few_quotients() {
        let f2 = Field::prime(2).unwrap();
        let e = CFExpansion { quotients: vec![TPoly::zero()], convergents: vec![], terminated: false };
        assert_eq!(cf_w1_estimate(&e).unwrap_err(), Error::TooFewQuotients);
        let xi = LaurentSeries::zero(&f2);
        assert_eq!(cf_exactness_check(&xi, &e, &PrecisionBudget::default()).unwrap_err(), Error::TooFewQuotients);
    }
}
