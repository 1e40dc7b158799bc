//! Reductions of inseparable polynomials through coefficientwise Cartier maps.

use crate::error::{Error, Result};
use crate::factor::factor;
use crate::field::Field;
use crate::laurent::{LaurentSeries, PrecisionBudget};
use crate::xpoly::XPoly;

/// Valuation of `P(ξ)`, `None` for a certified zero.
fn nu_at(p: &XPoly, xi: &LaurentSeries, budget: &PrecisionBudget) -> Result<Option<i64>> {
    if p.is_zero() {
        return Ok(None);
    }
    p.eval_in(xi, budget)?.valuation()
}

/// One Cartier step `P(X) = Q(X^{p^j}) ↦ G_s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionStep {
    pub j: u32,
    pub s: usize,
    pub before: XPoly,
    pub intermediate: XPoly,
    /// `ν(P(ξ))` for the polynomial entering the step.
    pub nu_before: i64,
    /// `ν(G_s(ξ))` for the selected index.
    pub nu_after: i64,
    /// `(s, ν(G_s(ξ)))` for every index, `None` when `G_s(ξ) = 0`.
    pub candidates: Vec<(usize, Option<i64>)>,
}

impl ReductionStep {
    /// `ν(P(ξ)) = min_s (-s + p^j ν(G_s(ξ)))`, attained at the selected `s`,
    /// and `p^j ν(G_s(ξ)) = ν(P(ξ)) + s`.
    pub fn certificate_holds(&self, f: &Field) -> bool {
        let pj = (f.p() as i64).pow(self.j);
        let v = self
            .candidates
            .iter()
            .filter_map(|&(s, nu)| nu.map(|n| -(s as i64) + pj * n))
            .min();
        v == Some(self.nu_before) && pj * self.nu_after == self.nu_before + self.s as i64
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ReductionTrace {
    pub steps: Vec<ReductionStep>,
}

/// Reduce `P` to a p-reduced polynomial `Q` with `|Q(ξ)|` controlled by `|P(ξ)|`.
pub fn separable_reduce(
    p: &XPoly,
    xi: &LaurentSeries,
    budget: &PrecisionBudget,
) -> Result<(XPoly, ReductionTrace)> {
    let f = xi.field().clone();
    if !p.is_nonconstant() {
        return Err(Error::ConstantPolynomial);
    }
    let mut nu = nu_at(p, xi, budget)?
        .ok_or_else(|| Error::PreconditionViolated("P(ξ) = 0".into()))?;
    let mut cur = p.clone();
    let mut trace = ReductionTrace::default();
    while !cur.is_p_reduced(&f)? {
        let (j, q) = cur.insep_decompose(&f)?;
        let pj = (f.p() as i64).pow(j);
        let mut candidates = Vec::with_capacity(pj as usize);
        let mut best: Option<(i64, usize, XPoly, i64)> = None;
        for s in 0..pj as usize {
            let g = q.coeff_cartier(s, j, &f);
            let nu_s = nu_at(&g, xi, budget)?;
            candidates.push((s, nu_s));
            if let Some(n) = nu_s {
                let v = -(s as i64) + pj * n;
                assert!(best.as_ref().is_none_or(|b| b.0 != v), "Cartier valuations must be distinct");
                if best.as_ref().is_none_or(|b| v < b.0) {
                    best = Some((v, s, g, n));
                }
            }
        }
        let (_, s, g, nu_g) = best.expect("P(ξ) ≠ 0 forces a nonzero component");
        if !g.is_nonconstant() {
            return Err(Error::ConstantCollapse);
        }
        trace.steps.push(ReductionStep {
            j,
            s,
            before: cur.clone(),
            intermediate: g.clone(),
            nu_before: nu,
            nu_after: nu_g,
            candidates,
        });
        cur = g;
        nu = nu_g;
    }
    if cur.height_log()? == 0 {
        return Err(Error::DegenerateHeight);
    }
    Ok((cur, trace))
}

/// Result of the inseparable-product reduction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrReduction {
    pub r: u32,
    pub p0: XPoly,
    /// Selected Cartier index at each level.
    pub selections: Vec<usize>,
}

fn all_factors_inseparable(p: &XPoly, f: &Field) -> Result<bool> {
    Ok(factor(p, f)?.factors.iter().all(|(g, _)| g.derivative(f).is_zero()))
}

/// Reduce a product of irreducible inseparable polynomials to one with a
/// separable factor.
pub fn pr_reduce(p: &XPoly, xi: &LaurentSeries, budget: &PrecisionBudget) -> Result<PrReduction> {
    let f = xi.field().clone();
    if !p.is_nonconstant() {
        return Err(Error::ConstantPolynomial);
    }
    if !all_factors_inseparable(p, &f)? {
        return Err(Error::PreconditionViolated("P has a separable irreducible factor".into()));
    }
    if nu_at(p, xi, budget)?.is_none() {
        return Err(Error::PreconditionViolated("P(ξ) = 0".into()));
    }
    let pf = f.p() as usize;
    let mut cur = p.clone();
    let mut selections = Vec::new();
    loop {
        let q = XPoly::from_coeffs(cur.coeffs().iter().step_by(pf).cloned().collect());
        let mut best: Option<(i64, usize, XPoly)> = None;
        for j in 0..pf {
            let a = q.coeff_cartier(j, 1, &f);
            if let Some(n) = nu_at(&a, xi, budget)? {
                let v = pf as i64 * n - j as i64;
                if best.as_ref().is_none_or(|b| v < b.0) {
                    best = Some((v, j, a));
                }
            }
        }
        let (_, j0, a) = best.expect("P(ξ) ≠ 0 forces a nonzero component");
        selections.push(j0);
        if !a.is_nonconstant() {
            return Err(Error::ConstantCollapse);
        }
        if !all_factors_inseparable(&a, &f)? {
            return Ok(PrReduction { r: selections.len() as u32, p0: a, selections });
        }
        cur = a;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Elem;
    use crate::tpoly::{AbsValue, TPoly};

    fn t(v: &[Elem]) -> TPoly {
        TPoly::from_coeffs(v.to_vec())
    }
    fn xp(v: &[&[Elem]]) -> XPoly {
        XPoly::from_coeffs(v.iter().map(|c| t(c)).collect())
    }

    #[test]
    fn cartop_worked_instance() {
        let f2 = Field::prime(2).unwrap();
        let budget = PrecisionBudget::default();
        let xi = LaurentSeries::monomial(&f2, 1, 1);
        let p = xp(&[&[0, 1, 1], &[], &[1]]);
        let (q, trace) = separable_reduce(&p, &xi, &budget).unwrap();
        assert_eq!(q, xp(&[&[0, 1], &[1]]));
        assert_eq!(trace.steps.len(), 1);
        assert!(trace.steps[0].certificate_holds(&f2));
        assert_eq!(q.abs_at(&xi, &budget).unwrap(), AbsValue::Pow(1));
        assert_eq!(p.abs_at(&xi, &budget).unwrap(), AbsValue::Pow(2));
    }

    #[test]
    fn cartop_identity_on_reduced_input() {
        let f3 = Field::prime(3).unwrap();
        let xi = LaurentSeries::monomial(&f3, 1, 1);
        let p = xp(&[&[1], &[0, 2], &[], &[0, 1]]);
        let (q, trace) = separable_reduce(&p, &xi, &PrecisionBudget::default()).unwrap();
        assert_eq!(q, p);
        assert!(trace.steps.is_empty());
    }

    #[test]
    fn pr_worked_instance() {
        let f2 = Field::prime(2).unwrap();
        let budget = PrecisionBudget::default();
        let xi = LaurentSeries::exact(&f2, 0, vec![1, 1]);
        let p = xp(&[&[0, 1, 1], &[], &[1]]);
        let red = pr_reduce(&p, &xi, &budget).unwrap();
        assert_eq!(red.r, 1);
        assert_eq!(red.p0, xp(&[&[0, 1], &[1]]));
        // |P0(ξ)|^2 = q^2 < q * |P(ξ)| = q^3, H(P0)^2 = q^2 <= H(P) = q^2
        assert_eq!(red.p0.abs_at(&xi, &budget).unwrap(), AbsValue::Pow(1));
        assert_eq!(p.abs_at(&xi, &budget).unwrap(), AbsValue::Pow(2));
    }

    #[test]
    fn pr_constant_collapse() {
        let f2 = Field::prime(2).unwrap();
        let xi = LaurentSeries::exact(&f2, 0, vec![1, 1]);
        let p = xp(&[&[0, 1], &[], &[1]]);
        assert_eq!(pr_reduce(&p, &xi, &PrecisionBudget::default()), Err(Error::ConstantCollapse));
    }

    #[test]
    fn pr_rejects_separable_factor() {
        let f2 = Field::prime(2).unwrap();
        let xi = LaurentSeries::monomial(&f2, 1, 1);
        let p = xp(&[&[0, 1], &[1]]).mul(&xp(&[&[0, 1], &[], &[1]]), &f2);
        assert!(matches!(pr_reduce(&p, &xi, &PrecisionBudget::default()), Err(Error::PreconditionViolated(_))));
    }
}
