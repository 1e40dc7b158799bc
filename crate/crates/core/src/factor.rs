//! Factorization of polynomials in F_q[T][X] by trial division.

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::tpoly::TPoly;
use crate::xpoly::XPoly;

/// Largest X-degree accepted by [`factor`].
pub const MAX_DEG_X: usize = 6;
/// Largest coefficient degree accepted by [`factor`].
pub const MAX_COEFF_DEG: usize = 12;
/// Cap on the number of trial divisors tried for one split.
const MAX_TRIALS: u64 = 1 << 22;

/// `P = unit * content * Π f_i^{m_i}` with primitive `f_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub unit: Elem,
    pub content: TPoly,
    pub factors: Vec<(XPoly, usize)>,
}

impl Factorization {
    pub fn is_irreducible(&self) -> bool {
        self.content == TPoly::one() && self.factors.len() == 1 && self.factors[0].1 == 1
    }

    /// Multiply everything back together.
    pub fn product(&self, f: &Field) -> XPoly {
        let mut acc = XPoly::constant(self.content.scale(self.unit, f));
        for (g, m) in &self.factors {
            acc = acc.mul(&g.pow(*m as u32, f), f);
        }
        acc
    }
}

fn check_bounds(p: &XPoly) -> Result<()> {
    let d = p.deg_x().ok_or(Error::ZeroPolynomial)?;
    let h = p.coeffs().iter().filter_map(|c| c.deg()).max().unwrap_or(0);
    if d > MAX_DEG_X || h > MAX_COEFF_DEG {
        return Err(Error::BudgetExceeded(format!(
            "factorization limited to deg_X <= {MAX_DEG_X} and coefficient degree <= {MAX_COEFF_DEG}, got {d} and {h}"
        )));
    }
    Ok(())
}

/// Complete factorization over F_q(T), normalized to primitive factors.
pub fn factor(p: &XPoly, f: &Field) -> Result<Factorization> {
    check_bounds(p)?;
    let content = p.content(f)?;
    let prim = p.primitive_part(f)?;
    // p = unit * content * prim
    let lead_ratio = p.lead().div_exact(&content.mul(&prim.lead(), f), f).expect("content divides");
    let unit = lead_ratio.lead();
    let mut factors = Vec::new();
    factor_primitive(&prim, f, &mut factors)?;
    factors.sort();
    let mut merged: Vec<(XPoly, usize)> = Vec::new();
    for (g, m) in factors {
        match merged.last_mut() {
            Some((h, k)) if *h == g => *k += m,
            _ => merged.push((g, m)),
        }
    }
    Ok(Factorization { unit, content, factors: merged })
}

/// `true` for primitive irreducible polynomials of positive X-degree.
pub fn is_irreducible(p: &XPoly, f: &Field) -> Result<bool> {
    let d = p.deg_x().ok_or(Error::ZeroPolynomial)?;
    if d == 0 || p.content(f)? != TPoly::one() {
        return Ok(false);
    }
    match d {
        1 => Ok(true),
        2 | 3 => Ok(linear_factor(p, f)?.is_none()),
        _ => Ok(factor(p, f)?.is_irreducible()),
    }
}

fn factor_primitive(p: &XPoly, f: &Field, out: &mut Vec<(XPoly, usize)>) -> Result<()> {
    let d = p.deg_x().unwrap_or(0);
    if d == 0 {
        return Ok(());
    }
    if d == 1 {
        out.push((p.primitive_part(f)?, 1));
        return Ok(());
    }
    let dp = p.derivative(f);
    if dp.is_zero() {
        let pf = f.p() as usize;
        let q = XPoly::from_coeffs(p.coeffs().iter().step_by(pf).cloned().collect());
        let mut inner = Vec::new();
        factor_primitive(&q.primitive_part(f)?, f, &mut inner)?;
        for (g, m) in inner {
            let roots: Option<Vec<TPoly>> = g.coeffs().iter().map(|c| c.pth_root(f)).collect();
            match roots {
                Some(r) => out.push((XPoly::from_coeffs(r).primitive_part(f)?, m * pf)),
                None => out.push((g.expand_frobenius_x(f).primitive_part(f)?, m)),
            }
        }
        return Ok(());
    }
    let g = p.gcd(&dp, f)?;
    if g.deg_x().unwrap_or(0) > 0 {
        let rest = p.div_exact(&g, f).ok_or_else(|| Error::PreconditionViolated("gcd does not divide".into()))?;
        factor_primitive(&g, f, out)?;
        factor_primitive(&rest.primitive_part(f)?, f, out)?;
        return Ok(());
    }
    split_squarefree(p, f, out)
}

fn split_squarefree(p: &XPoly, f: &Field, out: &mut Vec<(XPoly, usize)>) -> Result<()> {
    let d = p.deg_x().unwrap();
    if d == 1 {
        out.push((p.primitive_part(f)?, 1));
        return Ok(());
    }
    if let Some(lin) = linear_factor(p, f)? {
        let rest = p.div_exact(&lin, f).expect("root gives a factor");
        out.push((lin, 1));
        return split_squarefree(&rest.primitive_part(f)?, f, out);
    }
    for k in 2..=d / 2 {
        if let Some(g) = factor_of_degree(p, k, f)? {
            let rest = p.div_exact(&g, f).expect("trial divisor divides");
            split_squarefree(&g, f, out)?;
            return split_squarefree(&rest.primitive_part(f)?, f, out);
        }
    }
    out.push((p.primitive_part(f)?, 1));
    Ok(())
}

/// All units of F_q times all monic divisors of `a`.
fn divisors_with_units(a: &TPoly, f: &Field) -> Vec<TPoly> {
    let mut out = Vec::new();
    for d in a.monic_divisors(f) {
        for u in 1..f.q() {
            out.push(d.scale(u as Elem, f));
        }
    }
    out
}

/// A primitive linear factor `bX - a`, found by the rational root test.
pub fn linear_factor(p: &XPoly, f: &Field) -> Result<Option<XPoly>> {
    let a0 = p.coeff(0);
    if a0.is_zero() {
        return Ok(Some(XPoly::x()));
    }
    let n = p.deg_x().ok_or(Error::ZeroPolynomial)?;
    let an = p.lead();
    let nums = divisors_with_units(&a0, f);
    for b in an.monic_divisors(f) {
        for a in &nums {
            if a.gcd(&b, f)? != TPoly::one() {
                continue;
            }
            // Σ a_i a^i b^{n-i} = 0
            let mut acc = TPoly::zero();
            let mut apow = TPoly::one();
            let bpows: Vec<TPoly> = (0..=n).map(|k| b.pow(k as u32, f)).collect();
            for i in 0..=n {
                acc = acc.add(&p.coeff(i).mul(&apow, f).mul(&bpows[n - i], f), f);
                apow = apow.mul(a, f);
            }
            if acc.is_zero() {
                let lin = XPoly::from_coeffs(vec![a.neg(f), b.clone()]);
                return Ok(Some(lin.primitive_part(f)?));
            }
        }
    }
    Ok(None)
}

/// A factor of X-degree `k` by exhaustive trial within the Gauss height bound.
fn factor_of_degree(p: &XPoly, k: usize, f: &Field) -> Result<Option<XPoly>> {
    let h = p.height_log()? as u32;
    let q = f.q() as u64;
    let leads = p.lead().monic_divisors(f);
    let consts = divisors_with_units(&p.coeff(0), f);
    let middle = q.pow(h + 1);
    let total = (leads.len() as u64)
        .saturating_mul(consts.len() as u64)
        .saturating_mul(middle.saturating_pow(k as u32 - 1));
    if total > MAX_TRIALS {
        return Err(Error::BudgetExceeded(format!("{total} trial divisors of degree {k}")));
    }
    let mut codes = vec![0u64; k - 1];
    for lead in &leads {
        for c0 in &consts {
            codes.iter_mut().for_each(|c| *c = 0);
            loop {
                let mut coeffs = vec![c0.clone()];
                coeffs.extend(codes.iter().map(|&c| TPoly::from_code(c, q as u32)));
                coeffs.push(lead.clone());
                let g = XPoly::from_coeffs(coeffs);
                if p.div_exact(&g, f).is_some() {
                    return Ok(Some(g.primitive_part(f)?));
                }
                let mut i = 0;
                while i < codes.len() {
                    codes[i] += 1;
                    if codes[i] < middle {
                        break;
                    }
                    codes[i] = 0;
                    i += 1;
                }
                if i == codes.len() {
                    break;
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(v: &[Elem]) -> TPoly {
        TPoly::from_coeffs(v.to_vec())
    }
    fn xp(v: &[&[Elem]]) -> XPoly {
        XPoly::from_coeffs(v.iter().map(|c| t(c)).collect())
    }

    #[test]
    fn inseparable_irreducible() {
        let f2 = Field::prime(2).unwrap();
        let p = xp(&[&[0, 1, 1], &[], &[1]]);
        assert!(factor(&p, &f2).unwrap().is_irreducible());
        assert!(is_irreducible(&p, &f2).unwrap());
    }

    #[test]
    fn perfect_square() {
        let f2 = Field::prime(2).unwrap();
        let p = xp(&[&[1], &[], &[0, 0, 1]]);
        let fac = factor(&p, &f2).unwrap();
        assert_eq!(fac.factors, vec![(xp(&[&[1], &[0, 1]]), 2)]);
        assert_eq!(fac.product(&f2), p);
    }

    #[test]
    fn mahler_polynomial_is_irreducible() {
        let f3 = Field::prime(3).unwrap();
        let p = xp(&[&[1], &[0, 2], &[], &[0, 1]]);
        let fac = factor(&p, &f3).unwrap();
        assert!(fac.is_irreducible());
    }

    #[test]
    fn content_and_products() {
        let f3 = Field::prime(3).unwrap();
        let a = xp(&[&[0, 1], &[1]]);
        let b = xp(&[&[1, 0, 1], &[], &[0, 1]]);
        let p = a.mul(&b, &f3).mul(&a, &f3).scale(&t(&[0, 2]), &f3);
        let fac = factor(&p, &f3).unwrap();
        assert_eq!(fac.content, t(&[0, 1]));
        assert_eq!(fac.product(&f3), p);
        assert_eq!(fac.factors.iter().map(|(_, m)| m).sum::<usize>(), 3);
    }

    #[test]
    fn quartic_splits_into_quadratics() {
        let f2 = Field::prime(2).unwrap();
        let a = xp(&[&[0, 1], &[], &[1]]);
        let b = xp(&[&[1], &[1], &[0, 1]]);
        let p = a.mul(&b, &f2);
        let fac = factor(&p, &f2).unwrap();
        assert_eq!(fac.factors.len(), 2);
        assert_eq!(fac.product(&f2), p);
    }

    #[test]
    fn bounds_enforced() {
        let f2 = Field::prime(2).unwrap();
        assert!(matches!(factor(&XPoly::monomial(TPoly::one(), 7), &f2), Err(Error::BudgetExceeded(_))));
        let big = XPoly::from_coeffs(vec![TPoly::one(), TPoly::monomial(1, 14)]);
        assert!(matches!(factor(&big, &f2), Err(Error::BudgetExceeded(_))));
    }
}
