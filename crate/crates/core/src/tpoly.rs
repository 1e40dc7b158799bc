//! Polynomials in F_q[T], rational functions in F_q(T), and the exact
//! absolute values `q^e` they produce.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Elem, Field};

/// An absolute value `|x| = q^e` or `|0| = 0`, stored by its exponent.
///
/// Ordering follows the real numbers: `Zero` is below every power of q.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AbsValue {
    Zero,
    Pow(i64),
}

impl AbsValue {
    pub const ONE: AbsValue = AbsValue::Pow(0);

    /// `log_q |x|`, or `None` for zero.
    pub fn log(self) -> Option<i64> {
        match self {
            AbsValue::Zero => None,
            AbsValue::Pow(e) => Some(e),
        }
    }
    #[allow(clippy::should_implement_trait)]
    pub fn mul(self, other: AbsValue) -> AbsValue {
        match (self, other) {
            (AbsValue::Pow(a), AbsValue::Pow(b)) => AbsValue::Pow(a + b),
            _ => AbsValue::Zero,
        }
    }
    pub fn powi(self, k: i64) -> AbsValue {
        match self {
            AbsValue::Pow(a) => AbsValue::Pow(a * k),
            AbsValue::Zero => AbsValue::Zero,
        }
    }
}

impl fmt::Display for AbsValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AbsValue::Zero => write!(f, "0"),
            AbsValue::Pow(e) => write!(f, "q^{e}"),
        }
    }
}

/// Element of F_q[T]; `coeffs[k]` is the coefficient of `T^k`, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct TPoly {
    coeffs: Vec<Elem>,
}

impl PartialOrd for TPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Degree first, then coefficients from the top down.
impl Ord for TPoly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl TPoly {
    pub fn zero() -> Self {
        TPoly { coeffs: Vec::new() }
    }
    pub fn constant(c: Elem) -> Self {
        Self::from_coeffs(vec![c])
    }
    pub fn one() -> Self {
        Self::constant(1)
    }
    /// `c T^k`.
    pub fn monomial(c: Elem, k: usize) -> Self {
        let mut v = vec![0; k + 1];
        v[k] = c;
        Self::from_coeffs(v)
    }
    pub fn t() -> Self {
        Self::monomial(1, 1)
    }
    pub fn from_coeffs(mut coeffs: Vec<Elem>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        TPoly { coeffs }
    }
    /// Decode the base-q digits of `code` (digit k is the coefficient of T^k).
    pub fn from_code(mut code: u64, q: u32) -> Self {
        let mut v = Vec::new();
        while code > 0 {
            v.push((code % q as u64) as Elem);
            code /= q as u64;
        }
        TPoly { coeffs: v }
    }
    pub fn code(&self, q: u32) -> u64 {
        self.coeffs.iter().rev().fold(0u64, |acc, &c| acc * q as u64 + c as u64)
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }
    pub fn coeff(&self, k: usize) -> Elem {
        self.coeffs.get(k).copied().unwrap_or(0)
    }
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    /// Degree, `None` for the zero polynomial.
    pub fn deg(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }
    pub fn lead(&self) -> Elem {
        self.coeffs.last().copied().unwrap_or(0)
    }
    pub fn is_monic(&self) -> bool {
        self.lead() == 1
    }

    /// `|R| = q^{deg R}`, `|0| = 0`.
    pub fn abs(&self) -> AbsValue {
        match self.deg() {
            None => AbsValue::Zero,
            Some(d) => AbsValue::Pow(d as i64),
        }
    }

    pub fn add(&self, other: &TPoly, f: &Field) -> TPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::from_coeffs((0..n).map(|k| f.add(self.coeff(k), other.coeff(k))).collect())
    }
    pub fn sub(&self, other: &TPoly, f: &Field) -> TPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::from_coeffs((0..n).map(|k| f.sub(self.coeff(k), other.coeff(k))).collect())
    }
    pub fn neg(&self, f: &Field) -> TPoly {
        TPoly { coeffs: self.coeffs.iter().map(|&c| f.neg(c)).collect() }
    }
    pub fn scale(&self, c: Elem, f: &Field) -> TPoly {
        Self::from_coeffs(self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }
    pub fn mul(&self, other: &TPoly, f: &Field) -> TPoly {
        if self.is_zero() || other.is_zero() {
            return TPoly::zero();
        }
        let mut out = vec![0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Self::from_coeffs(out)
    }
    pub fn pow(&self, e: u32, f: &Field) -> TPoly {
        (0..e).fold(TPoly::one(), |acc, _| acc.mul(self, f))
    }
    /// Multiply by `T^k`.
    pub fn shift(&self, k: usize) -> TPoly {
        if self.is_zero() {
            return TPoly::zero();
        }
        let mut v = vec![0; k];
        v.extend_from_slice(&self.coeffs);
        TPoly { coeffs: v }
    }

    /// Euclidean division: `self = Q * b + R` with `deg R < deg b`.
    pub fn divmod(&self, b: &TPoly, f: &Field) -> Result<(TPoly, TPoly)> {
        let db = b.deg().ok_or(Error::DivisionByZero)?;
        let inv_lead = f.inv(b.lead())?;
        let mut r = self.coeffs.clone();
        if r.len() <= db {
            return Ok((TPoly::zero(), self.clone()));
        }
        let mut quot = vec![0; r.len() - db];
        for k in (db..r.len()).rev() {
            let c = f.mul(r[k], inv_lead);
            if c == 0 {
                continue;
            }
            quot[k - db] = c;
            for (i, &bc) in b.coeffs.iter().enumerate() {
                let idx = k - db + i;
                r[idx] = f.sub(r[idx], f.mul(c, bc));
            }
        }
        r.truncate(db);
        Ok((Self::from_coeffs(quot), Self::from_coeffs(r)))
    }

    /// Exact quotient, `None` if `b` does not divide `self`.
    pub fn div_exact(&self, b: &TPoly, f: &Field) -> Option<TPoly> {
        let (q, r) = self.divmod(b, f).ok()?;
        r.is_zero().then_some(q)
    }

    pub fn monic(&self, f: &Field) -> TPoly {
        if self.is_zero() {
            return TPoly::zero();
        }
        self.scale(f.inv(self.lead()).unwrap(), f)
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &TPoly, f: &Field) -> Result<TPoly> {
        if self.is_zero() && other.is_zero() {
            return Err(Error::BothZero);
        }
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.divmod(&b, f)?.1;
            a = b;
            b = r;
        }
        Ok(a.monic(f))
    }

    pub fn eval(&self, x: Elem, f: &Field) -> Elem {
        self.coeffs.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// `R(T)^p`, computed as `R^σ(T^p)` with σ the coefficient Frobenius.
    pub fn frobenius(&self, f: &Field) -> TPoly {
        self.substitute_pow(f.p() as usize, |c| f.frobenius(c))
    }

    /// `R(T^k)` with each coefficient mapped through `map`.
    pub fn substitute_pow(&self, k: usize, map: impl Fn(Elem) -> Elem) -> TPoly {
        if self.is_zero() {
            return TPoly::zero();
        }
        let mut v = vec![0; (self.coeffs.len() - 1) * k + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            v[i * k] = map(c);
        }
        Self::from_coeffs(v)
    }

    /// Cartier operator `Λ_s` for the power `p^j` on a polynomial:
    /// the coefficient of `T^m` in the result is the `p^j`-th root of the
    /// coefficient of `T^{p^j m + s}`.
    pub fn cartier(&self, s: usize, j: u32, f: &Field) -> TPoly {
        let pj = (f.p() as usize).pow(j);
        assert!(s < pj, "Cartier index out of range");
        Self::from_coeffs(
            self.coeffs
                .iter()
                .skip(s)
                .step_by(pj)
                .map(|&c| f.pth_root_iter(c, j))
                .collect(),
        )
    }

    /// The `p`-th root, if `self` is a `p`-th power.
    pub fn pth_root(&self, f: &Field) -> Option<TPoly> {
        let p = f.p() as usize;
        if !self.is_in_power_subring(p) {
            return None;
        }
        Some(Self::from_coeffs(
            self.coeffs.iter().step_by(p).map(|&c| f.pth_root(c)).collect(),
        ))
    }

    /// `true` if every exponent is a multiple of `k`.
    pub fn is_in_power_subring(&self, k: usize) -> bool {
        self.coeffs.iter().enumerate().all(|(i, &c)| c == 0 || i % k == 0)
    }

    /// All monic divisors, computed from a trial-division factorization.
    pub fn monic_divisors(&self, f: &Field) -> Vec<TPoly> {
        let mut divs = vec![TPoly::one()];
        for (pf, mult) in self.factor(f) {
            let mut next = Vec::with_capacity(divs.len() * (mult + 1));
            for d in &divs {
                let mut acc = d.clone();
                next.push(acc.clone());
                for _ in 0..mult {
                    acc = acc.mul(&pf, f);
                    next.push(acc.clone());
                }
            }
            divs = next;
        }
        divs.sort();
        divs
    }

    /// Monic irreducible factors with multiplicity by trial division.
    pub fn factor(&self, f: &Field) -> Vec<(TPoly, usize)> {
        let mut out = Vec::new();
        let mut rest = self.monic(f);
        if rest.deg().unwrap_or(0) == 0 {
            return out;
        }
        let q = f.q() as u64;
        let mut d = 1usize;
        while 2 * d <= rest.deg().unwrap() {
            let base = q.pow(d as u32);
            for code in 0..base {
                let cand = TPoly::from_code(base + code, q as u32);
                if !cand.is_monic() {
                    continue;
                }
                let mut mult = 0;
                while let Some(quo) = rest.div_exact(&cand, f) {
                    rest = quo;
                    mult += 1;
                }
                if mult > 0 {
                    out.push((cand, mult));
                }
                if 2 * d > rest.deg().unwrap() {
                    break;
                }
            }
            d += 1;
        }
        if rest.deg().unwrap() > 0 {
            match out.iter_mut().find(|(g, _)| *g == rest) {
                Some(e) => e.1 += 1,
                None => out.push((rest, 1)),
            }
        }
        out.sort();
        out
    }

    pub fn format(&self, f: &Field) -> String {
        format_poly(&self.coeffs, f, "T")
    }
}

/// Render coefficients (low to high) as `c*V^k + ...`, highest degree first.
pub(crate) fn format_poly(coeffs: &[Elem], f: &Field, var: &str) -> String {
    let mut parts = Vec::new();
    for (k, &c) in coeffs.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let cs = f.format(c);
        let cs = if cs.contains('+') { format!("({cs})") } else { cs };
        parts.push(match (k, c) {
            (0, _) => cs,
            (1, 1) => var.to_string(),
            (1, _) => format!("{cs}*{var}"),
            (k, 1) => format!("{var}^{k}"),
            (k, _) => format!("{cs}*{var}^{k}"),
        });
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join("+")
    }
}

/// Element of F_q(T) in canonical form: coprime, monic denominator.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RatFn {
    num: TPoly,
    den: TPoly,
}

impl RatFn {
    pub fn new(num: TPoly, den: TPoly, f: &Field) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RatFn { num, den: TPoly::one() });
        }
        let g = num.gcd(&den, f)?;
        let num = num.div_exact(&g, f).unwrap();
        let den = den.div_exact(&g, f).unwrap();
        let c = f.inv(den.lead())?;
        Ok(RatFn { num: num.scale(c, f), den: den.scale(c, f) })
    }
    pub fn from_poly(p: TPoly) -> Self {
        RatFn { num: p, den: TPoly::one() }
    }
    pub fn zero() -> Self {
        Self::from_poly(TPoly::zero())
    }
    pub fn num(&self) -> &TPoly {
        &self.num
    }
    pub fn den(&self) -> &TPoly {
        &self.den
    }
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    pub fn abs(&self) -> AbsValue {
        match (self.num.deg(), self.den.deg()) {
            (Some(a), Some(b)) => AbsValue::Pow(a as i64 - b as i64),
            _ => AbsValue::Zero,
        }
    }
    pub fn add(&self, o: &RatFn, f: &Field) -> RatFn {
        let num = self.num.mul(&o.den, f).add(&o.num.mul(&self.den, f), f);
        RatFn::new(num, self.den.mul(&o.den, f), f).unwrap()
    }
    pub fn sub(&self, o: &RatFn, f: &Field) -> RatFn {
        self.add(&o.neg(f), f)
    }
    pub fn neg(&self, f: &Field) -> RatFn {
        RatFn { num: self.num.neg(f), den: self.den.clone() }
    }
    pub fn mul(&self, o: &RatFn, f: &Field) -> RatFn {
        RatFn::new(self.num.mul(&o.num, f), self.den.mul(&o.den, f), f).unwrap()
    }
    pub fn inv(&self, f: &Field) -> Result<RatFn> {
        RatFn::new(self.den.clone(), self.num.clone(), f)
    }
    pub fn pow(&self, e: u32, f: &Field) -> RatFn {
        (0..e).fold(RatFn::from_poly(TPoly::one()), |acc, _| acc.mul(self, f))
    }
    pub fn format(&self, f: &Field) -> String {
        if self.den == TPoly::one() {
            self.num.format(f)
        } else {
            format!("({})/({})", self.num.format(f), self.den.format(f))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[Elem]) -> TPoly {
        TPoly::from_coeffs(v.to_vec())
    }

    #[test]
    fn absolute_values() {
        assert_eq!(p(&[0, 1, 0, 1]).abs(), AbsValue::Pow(3));
        assert_eq!(TPoly::zero().abs(), AbsValue::Zero);
        assert_eq!(p(&[2]).abs(), AbsValue::Pow(0));
        assert!(AbsValue::Zero < AbsValue::Pow(-100));
    }

    #[test]
    fn division_examples() {
        let f3 = Field::prime(3).unwrap();
        let f2 = Field::prime(2).unwrap();
        assert_eq!(p(&[1, 0, 1]).divmod(&p(&[0, 1]), &f3).unwrap(), (p(&[0, 1]), p(&[1])));
        assert_eq!(p(&[0, 1, 1]).divmod(&p(&[1, 1]), &f2).unwrap(), (p(&[0, 1]), TPoly::zero()));
        let a = p(&[1, 2, 0, 1]);
        assert_eq!(a.divmod(&TPoly::one(), &f3).unwrap(), (a.clone(), TPoly::zero()));
        assert_eq!(a.divmod(&TPoly::zero(), &f3), Err(Error::DivisionByZero));
    }

    #[test]
    fn gcd_examples() {
        let f2 = Field::prime(2).unwrap();
        let f3 = Field::prime(3).unwrap();
        assert_eq!(p(&[0, 1, 1]).gcd(&p(&[0, 1]), &f2).unwrap(), p(&[0, 1]));
        assert_eq!(p(&[2, 2]).gcd(&TPoly::zero(), &f3).unwrap(), p(&[1, 1]));
        // T^2 + 2 = (T + 1)(T + 2) over F_3, so T + 1 is the gcd.
        assert_eq!(p(&[2, 0, 1]).gcd(&p(&[1, 1]), &f3).unwrap(), p(&[1, 1]));
        assert_eq!(TPoly::zero().gcd(&TPoly::zero(), &f3), Err(Error::BothZero));
    }

    #[test]
    fn cartier_on_polynomials() {
        let f2 = Field::prime(2).unwrap();
        // T^2 + T: Λ_0 = T, Λ_1 = 1.
        let a = p(&[0, 1, 1]);
        assert_eq!(a.cartier(0, 1, &f2), p(&[0, 1]));
        assert_eq!(a.cartier(1, 1, &f2), p(&[1]));
    }

    #[test]
    fn factor_and_divisors() {
        let f2 = Field::prime(2).unwrap();
        let a = p(&[0, 1, 1]).mul(&p(&[1, 1, 1]), &f2).mul(&p(&[0, 1]), &f2);
        let fac = a.factor(&f2);
        assert_eq!(fac, vec![(p(&[0, 1]), 2), (p(&[1, 1]), 1), (p(&[1, 1, 1]), 1)]);
        assert_eq!(a.monic_divisors(&f2).len(), 2 * 3 * 2);
    }

    #[test]
    fn ratfn_canonical() {
        let f3 = Field::prime(3).unwrap();
        let r = RatFn::new(p(&[0, 2, 2]), p(&[0, 2]), &f3).unwrap();
        assert_eq!(r.num(), &p(&[1, 1]));
        assert_eq!(r.den(), &TPoly::one());
        assert_eq!(r.format(&f3), "T+1");
    }
}
