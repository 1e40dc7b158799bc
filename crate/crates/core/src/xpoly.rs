//! Polynomials in X over F_q[T].

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::laurent::{LaurentSeries, Origin, PrecisionBudget};
use crate::tpoly::{format_poly, AbsValue, RatFn, TPoly};

/// `Σ a_i(T) X^i`; `coeffs[i]` is `a_i`, no trailing zero coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct XPoly {
    coeffs: Vec<TPoly>,
}

impl XPoly {
    pub fn zero() -> Self {
        XPoly { coeffs: Vec::new() }
    }
    pub fn from_coeffs(mut coeffs: Vec<TPoly>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        XPoly { coeffs }
    }
    pub fn constant(c: TPoly) -> Self {
        Self::from_coeffs(vec![c])
    }
    /// `X`.
    pub fn x() -> Self {
        Self::from_coeffs(vec![TPoly::zero(), TPoly::one()])
    }
    /// `c X^k`.
    pub fn monomial(c: TPoly, k: usize) -> Self {
        let mut v = vec![TPoly::zero(); k + 1];
        v[k] = c;
        Self::from_coeffs(v)
    }

    pub fn coeffs(&self) -> &[TPoly] {
        &self.coeffs
    }
    pub fn coeff(&self, i: usize) -> TPoly {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    /// Degree in X, `None` for zero.
    pub fn deg_x(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }
    pub fn lead(&self) -> TPoly {
        self.coeffs.last().cloned().unwrap_or_default()
    }
    /// `true` if the polynomial has degree at least one in X.
    pub fn is_nonconstant(&self) -> bool {
        self.coeffs.len() >= 2
    }

    /// `H(P) = max |a_i|`.
    pub fn height(&self) -> Result<AbsValue> {
        self.coeffs.iter().map(|c| c.abs()).max().ok_or(Error::ZeroPolynomial)
    }
    /// `log_q H(P)`, the maximal coefficient degree.
    pub fn height_log(&self) -> Result<i64> {
        Ok(self.height()?.log().expect("nonzero polynomial"))
    }

    pub fn add(&self, o: &XPoly, f: &Field) -> XPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::from_coeffs((0..n).map(|i| self.coeff(i).add(&o.coeff(i), f)).collect())
    }
    pub fn sub(&self, o: &XPoly, f: &Field) -> XPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::from_coeffs((0..n).map(|i| self.coeff(i).sub(&o.coeff(i), f)).collect())
    }
    pub fn neg(&self, f: &Field) -> XPoly {
        Self::from_coeffs(self.coeffs.iter().map(|c| c.neg(f)).collect())
    }
    pub fn scale(&self, c: &TPoly, f: &Field) -> XPoly {
        Self::from_coeffs(self.coeffs.iter().map(|a| a.mul(c, f)).collect())
    }
    pub fn mul(&self, o: &XPoly, f: &Field) -> XPoly {
        if self.is_zero() || o.is_zero() {
            return XPoly::zero();
        }
        let mut out = vec![TPoly::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b, f), f);
            }
        }
        Self::from_coeffs(out)
    }
    pub fn pow(&self, e: u32, f: &Field) -> XPoly {
        (0..e).fold(XPoly::constant(TPoly::one()), |acc, _| acc.mul(self, f))
    }

    /// Formal derivative in X.
    pub fn derivative(&self, f: &Field) -> XPoly {
        Self::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.scale(f.from_int(i as i64), f))
                .collect(),
        )
    }

    /// Monic gcd of the coefficients.
    pub fn content(&self, f: &Field) -> Result<TPoly> {
        let mut g = TPoly::zero();
        for c in &self.coeffs {
            g = if g.is_zero() { c.monic(f) } else { g.gcd(c, f)? };
        }
        if g.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(g)
    }

    /// Divide by the content and make the leading coefficient monic in T.
    pub fn primitive_part(&self, f: &Field) -> Result<XPoly> {
        let c = self.content(f)?;
        let p = Self::from_coeffs(self.coeffs.iter().map(|a| a.div_exact(&c, f).unwrap()).collect());
        let u = f.inv(p.lead().lead())?;
        Ok(p.scale(&TPoly::constant(u), f))
    }

    /// Pseudo-remainder of `self` by `b` (up to a unit of F_q(T)).
    pub fn prem(&self, b: &XPoly, f: &Field) -> Result<XPoly> {
        let n = b.deg_x().ok_or(Error::DivisionByZero)?;
        let lb = b.lead();
        let mut r = self.clone();
        while let Some(m) = r.deg_x() {
            if m < n {
                break;
            }
            let lr = r.lead();
            let shifted = XPoly::monomial(lr, m - n).mul(b, f);
            r = r.scale(&lb, f).sub(&shifted, f);
        }
        Ok(r)
    }

    /// `true` if `self` divides `other` in F_q(T)[X].
    pub fn divides(&self, other: &XPoly, f: &Field) -> Result<bool> {
        Ok(other.prem(self, f)?.is_zero())
    }

    /// Exact quotient in F_q[T][X], `None` if `b` does not divide `self` there.
    pub fn div_exact(&self, b: &XPoly, f: &Field) -> Option<XPoly> {
        let n = b.deg_x()?;
        let lb = b.lead();
        let mut r = self.clone();
        let mut quot = vec![TPoly::zero(); self.coeffs.len().saturating_sub(n)];
        while let Some(m) = r.deg_x() {
            if m < n {
                return None;
            }
            let c = r.lead().div_exact(&lb, f)?;
            r = r.sub(&XPoly::monomial(c.clone(), m - n).mul(b, f), f);
            quot[m - n] = c;
        }
        Some(Self::from_coeffs(quot))
    }

    /// Primitive gcd over F_q(T), normalized like `primitive_part`.
    pub fn gcd(&self, other: &XPoly, f: &Field) -> Result<XPoly> {
        if self.is_zero() && other.is_zero() {
            return Err(Error::BothZero);
        }
        let (mut a, mut b) = (self.clone(), other.clone());
        if a.deg_x() < b.deg_x() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.prem(&b, f)?;
            a = b;
            b = if r.is_zero() { r } else { r.primitive_part(f)? };
        }
        a.primitive_part(f)
    }

    /// `true` iff `gcd(P, P')` is constant in X.
    pub fn is_separable(&self, f: &Field) -> Result<bool> {
        if !self.is_nonconstant() {
            return Err(Error::ConstantPolynomial);
        }
        let d = self.derivative(f);
        if d.is_zero() {
            return Ok(false);
        }
        Ok(self.gcd(&d, f)?.deg_x() == Some(0))
    }

    /// gcd of the exponents carrying nonzero coefficients.
    fn support_gcd(&self) -> usize {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .fold(0, |g, (i, _)| num_integer::gcd(g, i))
    }

    /// `true` iff the X-support gcd is not divisible by `p`.
    pub fn is_p_reduced(&self, f: &Field) -> Result<bool> {
        if !self.is_nonconstant() {
            return Err(Error::ConstantPolynomial);
        }
        Ok(!self.support_gcd().is_multiple_of(f.p() as usize))
    }

    /// `(j, Q)` with `P(X) = Q(X^{p^j})` and `j` maximal.
    pub fn insep_decompose(&self, f: &Field) -> Result<(u32, XPoly)> {
        if !self.is_nonconstant() {
            return Err(Error::ConstantPolynomial);
        }
        let p = f.p() as usize;
        let mut d = self.support_gcd();
        let (mut j, mut pj) = (0u32, 1usize);
        while d.is_multiple_of(p) {
            d /= p;
            j += 1;
            pj *= p;
        }
        let q = Self::from_coeffs(self.coeffs.iter().step_by(pj).cloned().collect());
        Ok((j, q))
    }

    /// Apply `Λ_s` (power `p^j`) to every coefficient.
    pub fn coeff_cartier(&self, s: usize, j: u32, f: &Field) -> XPoly {
        Self::from_coeffs(self.coeffs.iter().map(|c| c.cartier(s, j, f)).collect())
    }

    /// Coefficients replaced by `a_i(T)^p`.
    pub fn coeff_pth_power(&self, f: &Field) -> XPoly {
        Self::from_coeffs(self.coeffs.iter().map(|c| c.frobenius(f)).collect())
    }

    /// The polynomial `Q` with `Q(ξ^p) = P(ξ)^p` and `H(Q) = H(P)^p`.
    pub fn frobenius_lift(&self, f: &Field) -> XPoly {
        self.coeff_pth_power(f)
    }

    /// `X^i ↦ X^{p i}`, so that `Q(ξ) = P(ξ^p)`.
    pub fn expand_frobenius_x(&self, f: &Field) -> XPoly {
        let p = f.p() as usize;
        if self.is_zero() {
            return XPoly::zero();
        }
        let mut v = vec![TPoly::zero(); (self.coeffs.len() - 1) * p + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[i * p] = c.clone();
        }
        Self::from_coeffs(v)
    }

    /// Polynomial vanishing at `c ξ` whenever `self` vanishes at `ξ`.
    pub fn scale_root(&self, c: Elem, f: &Field) -> XPoly {
        let ci = f.inv(c).expect("nonzero scale");
        Self::from_coeffs(
            self.coeffs.iter().enumerate().map(|(i, a)| a.scale(f.pow(ci, i as u64), f)).collect(),
        )
    }

    /// `X^d P(1/X)`.
    pub fn reverse(&self) -> XPoly {
        Self::from_coeffs(self.coeffs.iter().rev().cloned().collect())
    }

    /// Exact value at a rational function.
    pub fn eval_ratfn(&self, r: &RatFn, f: &Field) -> RatFn {
        self.coeffs
            .iter()
            .rev()
            .fold(RatFn::zero(), |acc, c| acc.mul(r, f).add(&RatFn::from_poly(c.clone()), f))
    }

    /// Horner evaluation on the current window of `ξ`.
    pub fn eval(&self, xi: &LaurentSeries) -> Result<LaurentSeries> {
        let f = xi.field();
        let mut acc = LaurentSeries::zero(f);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(xi)?.add(&LaurentSeries::from_tpoly(f, c))?;
        }
        Ok(acc)
    }

    /// `P(ξ)` with its valuation certified, extending `ξ` as needed.
    /// Returns the certified zero when the origin of `ξ` proves `P(ξ) = 0`.
    pub fn eval_in(&self, xi: &LaurentSeries, budget: &PrecisionBudget) -> Result<LaurentSeries> {
        let f = xi.field();
        match xi.origin() {
            Origin::Rational(r) => return Ok(LaurentSeries::from_ratfn(f, &self.eval_ratfn(r, f))),
            Origin::Algebraic(m) if self.is_zero() || m.divides(self, f)? => {
                return Ok(LaurentSeries::zero(f));
            }
            _ => {}
        }
        xi.with_growth(budget, |s| {
            let v = self.eval(s)?;
            v.valuation()?;
            Ok(v)
        })
    }

    /// `|P(ξ)|`, certified.
    pub fn abs_at(&self, xi: &LaurentSeries, budget: &PrecisionBudget) -> Result<AbsValue> {
        Ok(self.eval_in(xi, budget)?.abs_val()?.1)
    }

    pub fn format(&self, f: &Field) -> String {
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let cs = c.format(f);
            let xs = match i {
                0 => String::new(),
                1 => "X".to_string(),
                _ => format!("X^{i}"),
            };
            parts.push(match (i, cs.as_str()) {
                (0, _) if cs.contains('+') => format!("({cs})"),
                (0, _) => cs,
                (_, "1") => xs,
                _ => format!("({cs})*{xs}"),
            });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join("+")
        }
    }
}

/// Render a univariate polynomial over F_q in the variable `X`.
pub fn format_fq_poly(coeffs: &[Elem], f: &Field) -> String {
    format_poly(coeffs, f, "X")
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
    fn height_examples() {
        let p = xp(&[&[1], &[1, 1], &[], &[0, 0, 1]]);
        assert_eq!(p.height().unwrap(), AbsValue::Pow(2));
        assert_eq!(xp(&[&[1]]).height().unwrap(), AbsValue::Pow(0));
        let mahler = xp(&[&[1], &[0, 2], &[], &[0, 1]]);
        assert_eq!(mahler.height().unwrap(), AbsValue::Pow(1));
        assert_eq!(XPoly::zero().height(), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn derivative_examples() {
        let f2 = Field::prime(2).unwrap();
        let f3 = Field::prime(3).unwrap();
        assert!(xp(&[&[0, 1], &[], &[1]]).derivative(&f2).is_zero());
        assert!(xp(&[&[0, 1], &[], &[], &[1]]).derivative(&f3).is_zero());
        let mahler = xp(&[&[1], &[0, 2], &[], &[0, 1]]);
        assert_eq!(mahler.derivative(&f3), xp(&[&[0, 2]]));
        assert_eq!(xp(&[&[], &[0, 1], &[1]]).derivative(&f2), xp(&[&[0, 1]]));
    }

    #[test]
    fn separability_examples() {
        let f2 = Field::prime(2).unwrap();
        let f3 = Field::prime(3).unwrap();
        assert!(!xp(&[&[0, 1], &[], &[1]]).is_separable(&f2).unwrap());
        assert!(xp(&[&[1], &[0, 2], &[], &[0, 1]]).is_separable(&f3).unwrap());
        let sq = xp(&[&[0, 1], &[1]]).pow(2, &f2).mul(&XPoly::x(), &f2);
        assert!(!sq.is_separable(&f2).unwrap());
        assert_eq!(xp(&[&[1]]).is_separable(&f2), Err(Error::ConstantPolynomial));
        // Support {1, p+1}: p-reduced yet not separable.
        let odd = xp(&[&[], &[0, 0, 1], &[], &[1]]);
        assert!(odd.is_p_reduced(&f2).unwrap());
        assert!(!odd.is_separable(&f2).unwrap());
    }

    #[test]
    fn mul_examples() {
        let f2 = Field::prime(2).unwrap();
        let f3 = Field::prime(3).unwrap();
        let a = xp(&[&[1], &[0, 1]]);
        let sq = a.mul(&a, &f2);
        assert_eq!(sq, xp(&[&[1], &[], &[0, 0, 1]]));
        assert_eq!(sq.height().unwrap(), AbsValue::Pow(2));
        let b = XPoly::x().mul(&xp(&[&[0, 1], &[1]]), &f2);
        assert_eq!(b, xp(&[&[], &[0, 1], &[1]]));
        let c = a.mul(&xp(&[&[0, 1], &[1]]), &f3);
        assert_eq!(c, xp(&[&[0, 1], &[1, 0, 1], &[0, 1]]));
        assert_eq!(c.height().unwrap(), AbsValue::Pow(2));
    }

    #[test]
    fn insep_decompose_examples() {
        let f2 = Field::prime(2).unwrap();
        let p = xp(&[&[0, 1], &[], &[], &[], &[1]]);
        assert_eq!(p.insep_decompose(&f2).unwrap(), (2, xp(&[&[0, 1], &[1]])));
        let p = xp(&[&[0, 1], &[1], &[1]]);
        assert_eq!(p.insep_decompose(&f2).unwrap(), (0, p.clone()));
        let p = xp(&[&[], &[], &[0, 1], &[], &[], &[], &[1]]);
        assert_eq!(p.insep_decompose(&f2).unwrap(), (1, xp(&[&[], &[0, 1], &[], &[1]])));
    }

    #[test]
    fn coeff_cartier_example() {
        let f2 = Field::prime(2).unwrap();
        let q = xp(&[&[0, 1, 1], &[1]]);
        assert_eq!(q.coeff_cartier(0, 1, &f2), xp(&[&[0, 1], &[1]]));
        assert_eq!(q.coeff_cartier(1, 1, &f2), xp(&[&[1]]));
    }

    #[test]
    fn eval_examples() {
        let f2 = Field::prime(2).unwrap();
        let budget = PrecisionBudget::default();
        let xi = LaurentSeries::monomial(&f2, 1, 1);
        let p = xp(&[&[0, 1, 1], &[], &[1]]);
        let v = p.eval_in(&xi, &budget).unwrap();
        assert!(v.truncate(10).agrees_with(&LaurentSeries::exact(&f2, -2, vec![1, 1, 0, 0, 1]).truncate(10)));
        assert_eq!(v.abs_val().unwrap().1, AbsValue::Pow(2));
        assert!(XPoly::x().eval(&xi).unwrap().agrees_with(&xi));
    }

    #[test]
    fn frobenius_maps() {
        let f2 = Field::prime(2).unwrap();
        let p = xp(&[&[1], &[0, 1]]);
        assert_eq!(p.frobenius_lift(&f2), xp(&[&[1], &[0, 0, 1]]));
        assert_eq!(p.coeff_pth_power(&f2), xp(&[&[1], &[0, 0, 1]]));
        assert_eq!(xp(&[&[0, 1], &[1]]).expand_frobenius_x(&f2), xp(&[&[0, 1], &[], &[1]]));
        assert_eq!(xp(&[&[1, 1]]).frobenius_lift(&f2), xp(&[&[1, 0, 1]]));
    }

    #[test]
    fn gcd_and_division() {
        let f3 = Field::prime(3).unwrap();
        let a = xp(&[&[0, 1], &[1]]);
        let b = xp(&[&[1], &[0, 1]]);
        let ab = a.mul(&b, &f3);
        assert_eq!(ab.div_exact(&a, &f3), Some(b.clone()));
        assert_eq!(ab.gcd(&a.mul(&a, &f3), &f3).unwrap(), a);
        assert!(a.divides(&ab, &f3).unwrap());
        assert!(!a.divides(&b, &f3).unwrap());
    }

    #[test]
    fn formatting() {
        let f3 = Field::prime(3).unwrap();
        let mahler = xp(&[&[1], &[0, 2], &[], &[0, 1]]);
        assert_eq!(mahler.format(&f3), "(T)*X^3+(2*T)*X+1");
        let w = xp(&[&[2, 0, 2], &[0, 0, 0, 1]]);
        assert_eq!(w.format(&f3), "(T^3)*X+(2*T^2+2)");
    }
}
