//! Precision-tracked Laurent series in `T^{-1}` over F_q.
//!
//! A series stores a dense window of coefficients `a_k` (the coefficient of
//! `T^{-k}`) for indices `start..prec`. Exact series have `prec == INF` and are
//! zero beyond the stored window. A series may carry a regenerator that
//! recomputes it at a larger working precision, and an origin that lets exact
//! zero tests succeed where a finite window cannot.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::tpoly::{AbsValue, RatFn, TPoly};
use crate::xpoly::XPoly;

/// Precision of an exact series.
pub const INF: i64 = i64::MAX / 8;

/// Working window used when a rational value is expanded without a request.
const DEFAULT_TERMS: i64 = 64;

pub type Regen = Arc<dyn Fn(i64) -> Result<LaurentSeries> + Send + Sync>;

/// What is known about the exact value behind a series window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Origin {
    Unknown,
    Rational(RatFn),
    /// A root of this irreducible primitive polynomial.
    Algebraic(Arc<XPoly>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OnExhaust {
    Error,
    ReturnUnknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrecisionBudget {
    pub max_terms: usize,
    pub on_exhaust: OnExhaust,
}

impl Default for PrecisionBudget {
    fn default() -> Self {
        PrecisionBudget { max_terms: 4096, on_exhaust: OnExhaust::Error }
    }
}

impl PrecisionBudget {
    pub fn new(max_terms: usize) -> Self {
        PrecisionBudget { max_terms: max_terms.max(1), ..Default::default() }
    }
    pub fn scaled(self, factor: usize) -> Self {
        PrecisionBudget { max_terms: self.max_terms * factor, ..self }
    }
    /// Apply the exhaustion policy: `Ok(None)` replaces `BelowPrecision`
    /// when the policy is to return unknown.
    pub fn settle<T>(&self, r: Result<T>) -> Result<Option<T>> {
        match r {
            Ok(v) => Ok(Some(v)),
            Err(Error::BelowPrecision { .. }) if self.on_exhaust == OnExhaust::ReturnUnknown => Ok(None),
            Err(e) => Err(e),
        }
    }
}

fn padd(p: i64, x: i64) -> i64 {
    if p >= INF {
        INF
    } else {
        p + x
    }
}

fn div_ceil(a: i64, b: i64) -> i64 {
    a.div_euclid(b) + i64::from(a.rem_euclid(b) != 0)
}

#[derive(Clone)]
pub struct LaurentSeries {
    field: Field,
    start: i64,
    coeffs: Vec<Elem>,
    prec: i64,
    origin: Origin,
    regen: Option<Regen>,
    level: i64,
}

impl fmt::Debug for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LaurentSeries")
            .field("start", &self.start)
            .field("coeffs", &self.coeffs)
            .field("prec", &self.prec)
            .field("origin", &self.origin)
            .field("extensible", &self.regen.is_some())
            .finish()
    }
}

impl LaurentSeries {
    fn raw(field: &Field, start: i64, coeffs: Vec<Elem>, prec: i64) -> Self {
        let mut s = LaurentSeries {
            field: field.clone(),
            start,
            coeffs,
            prec,
            origin: Origin::Unknown,
            regen: None,
            level: 0,
        };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        let lead = self.coeffs.iter().position(|&c| c != 0).unwrap_or(self.coeffs.len());
        self.coeffs.drain(..lead);
        self.start += lead as i64;
        if self.prec >= INF {
            while self.coeffs.last() == Some(&0) {
                self.coeffs.pop();
            }
            if self.coeffs.is_empty() {
                self.start = 0;
            }
        } else if self.coeffs.is_empty() {
            self.start = self.prec;
        }
    }

    /// Exact series with coefficients for indices `start..start+len`.
    pub fn exact(field: &Field, start: i64, coeffs: Vec<Elem>) -> Self {
        let mut s = Self::raw(field, start, coeffs, INF);
        s.origin = Origin::Rational(s.to_ratfn_exact());
        s
    }

    /// Finite window `start..prec`, unknown beyond.
    pub fn truncated(field: &Field, start: i64, mut coeffs: Vec<Elem>, prec: i64) -> Self {
        coeffs.resize((prec - start).max(0) as usize, 0);
        Self::raw(field, start, coeffs, prec)
    }

    pub fn zero(field: &Field) -> Self {
        Self::exact(field, 0, Vec::new())
    }
    pub fn one(field: &Field) -> Self {
        Self::exact(field, 0, vec![1])
    }
    /// `c T^{-k}`.
    pub fn monomial(field: &Field, c: Elem, k: i64) -> Self {
        Self::exact(field, k, vec![c])
    }
    pub fn from_tpoly(field: &Field, p: &TPoly) -> Self {
        let d = p.deg().map_or(0, |d| d as i64);
        let coeffs = (0..=d).rev().map(|k| p.coeff(k as usize)).collect();
        Self::exact(field, -d, coeffs)
    }

    /// Series produced by a regenerator called at working level `level`.
    pub fn from_regen(regen: Regen, level: i64) -> Result<Self> {
        let mut s = regen(level)?;
        s.regen = Some(regen);
        s.level = level;
        Ok(s)
    }

    /// Generator-backed series with `a_k = gen(k)` for `k >= start`.
    pub fn from_fn(
        field: &Field,
        start: i64,
        gen: impl Fn(i64) -> Elem + Send + Sync + 'static,
        prec: i64,
    ) -> Self {
        let field = field.clone();
        let gen = Arc::new(gen);
        let regen: Regen = Arc::new(move |m: i64| {
            let end = m.max(start);
            Ok(Self::truncated(&field, start, (start..end).map(|k| gen(k)).collect(), end))
        });
        Self::from_regen(regen, prec).expect("coefficient generators are infallible")
    }

    /// Expansion of a rational function, extensible on demand.
    pub fn from_rational(field: &Field, r: &RatFn, prec: i64) -> Self {
        let den = r.den();
        if den.coeffs().iter().filter(|&&c| c != 0).count() == 1 {
            let k = den.deg().unwrap() as i64;
            let mut s = Self::from_tpoly(field, r.num()).shift(-k);
            s.origin = Origin::Rational(r.clone());
            return s;
        }
        let (field, r) = (field.clone(), r.clone());
        let regen: Regen = Arc::new(move |m| Ok(Self::expand_rational(&field, &r, m)));
        Self::from_regen(regen, prec).expect("rational expansion is infallible")
    }

    /// Expansion of a rational function with a default working window.
    pub fn from_ratfn(field: &Field, r: &RatFn) -> Self {
        let v = match r.abs() {
            AbsValue::Pow(e) => -e,
            AbsValue::Zero => 0,
        };
        Self::from_rational(field, r, v.max(0) + DEFAULT_TERMS)
    }

    fn expand_rational(field: &Field, r: &RatFn, prec: i64) -> Self {
        let f = field;
        let (num, den) = (r.num(), r.den());
        let mut s = if num.is_zero() {
            Self::zero(f)
        } else {
            let dn = num.deg().unwrap() as i64;
            let dd = den.deg().unwrap() as i64;
            let start = dd - dn;
            let len = (prec - start).max(0) as usize;
            // Power series division in u = T^{-1} on the reversed polynomials.
            let nr = |m: usize| if m as i64 <= dn { num.coeff((dn - m as i64) as usize) } else { 0 };
            let dr = |m: usize| if m as i64 <= dd { den.coeff((dd - m as i64) as usize) } else { 0 };
            let inv0 = f.inv(dr(0)).unwrap();
            let mut c: Vec<Elem> = Vec::with_capacity(len);
            for m in 0..len {
                let mut acc = nr(m);
                for l in 1..=m.min(dd as usize) {
                    acc = f.sub(acc, f.mul(dr(l), c[m - l]));
                }
                c.push(f.mul(acc, inv0));
            }
            Self::truncated(f, start, c, prec.max(start))
        };
        s.origin = Origin::Rational(r.clone());
        s
    }

    fn to_ratfn_exact(&self) -> RatFn {
        let end = self.start + self.coeffs.len() as i64;
        let d = (end - 1).max(0);
        let mut num = vec![0; (d - self.start + 1).max(0) as usize];
        for (i, &c) in self.coeffs.iter().enumerate() {
            num[(d - (self.start + i as i64)) as usize] = c;
        }
        RatFn::new(TPoly::from_coeffs(num), TPoly::monomial(1, d as usize), &self.field)
            .expect("monomial denominator is nonzero")
    }

    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn origin(&self) -> &Origin {
        &self.origin
    }
    pub fn with_origin(mut self, origin: Origin) -> Self {
        self.origin = origin;
        self
    }
    pub fn is_exact(&self) -> bool {
        self.prec >= INF
    }
    pub fn is_extensible(&self) -> bool {
        self.regen.is_some()
    }
    /// First unknown index (`INF` for exact series).
    pub fn prec(&self) -> i64 {
        self.prec
    }
    /// Lower bound for the valuation; equal to it when the window is nonzero.
    pub fn start(&self) -> i64 {
        self.start
    }
    fn end(&self) -> i64 {
        self.start + self.coeffs.len() as i64
    }
    fn get(&self, k: i64) -> Elem {
        if k < self.start {
            0
        } else {
            self.coeffs.get((k - self.start) as usize).copied().unwrap_or(0)
        }
    }

    /// Coefficient of `T^{-k}`.
    pub fn coeff(&self, k: i64) -> Result<Elem> {
        if k >= self.prec {
            Err(Error::BelowPrecision { attempted: k })
        } else {
            Ok(self.get(k))
        }
    }

    /// Coefficients for indices `lo..hi`.
    pub fn coeffs_range(&self, lo: i64, hi: i64) -> Result<Vec<Elem>> {
        (lo..hi).map(|k| self.coeff(k)).collect()
    }

    fn certified_zero(&self) -> bool {
        match &self.origin {
            Origin::Rational(r) => r.is_zero(),
            _ => self.is_exact() && self.coeffs.is_empty(),
        }
    }

    /// Valuation on the current window; `None` is the certified zero.
    pub fn valuation(&self) -> Result<Option<i64>> {
        if !self.coeffs.is_empty() {
            Ok(Some(self.start))
        } else if self.certified_zero() {
            Ok(None)
        } else {
            Err(Error::BelowPrecision { attempted: self.prec })
        }
    }

    /// `(ν, |x|)` on the current window.
    pub fn abs_val(&self) -> Result<(Option<i64>, AbsValue)> {
        let v = self.valuation()?;
        Ok((v, v.map_or(AbsValue::Zero, |v| AbsValue::Pow(-v))))
    }

    /// The same series recomputed at a larger working level, if possible.
    pub fn grow(&self, budget: &PrecisionBudget) -> Option<LaurentSeries> {
        let regen = self.regen.as_ref()?;
        let cap = budget.max_terms as i64;
        if self.level >= cap {
            return None;
        }
        let m = (self.level.max(8) * 2).min(cap);
        let mut s = regen(m).ok()?;
        s.regen = Some(regen.clone());
        s.level = m;
        Some(s)
    }

    /// Evaluate `f`, growing the working precision while it reports
    /// `BelowPrecision`.
    pub fn with_growth<T>(
        &self,
        budget: &PrecisionBudget,
        mut f: impl FnMut(&LaurentSeries) -> Result<T>,
    ) -> Result<T> {
        let mut cur = self.clone();
        loop {
            match f(&cur) {
                Err(Error::BelowPrecision { attempted }) => match cur.grow(budget) {
                    Some(next) => cur = next,
                    None => return Err(Error::BelowPrecision { attempted }),
                },
                r => return r,
            }
        }
    }

    /// A copy known at least up to index `n`.
    pub fn extend(&self, n: i64, budget: &PrecisionBudget) -> Result<LaurentSeries> {
        let mut cur = self.clone();
        while cur.prec < n {
            cur = cur.grow(budget).ok_or(Error::BelowPrecision { attempted: n })?;
        }
        Ok(cur)
    }

    /// Restrict the window to indices below `prec`.
    pub fn truncate(&self, prec: i64) -> LaurentSeries {
        if prec >= self.prec {
            return self.clone();
        }
        let mut s = self.clone();
        let keep = (prec - s.start).max(0) as usize;
        s.coeffs.truncate(keep);
        s.coeffs.resize(keep, 0);
        s.prec = prec.max(s.start.min(prec));
        s.normalize();
        s
    }

    pub fn valuation_in(&self, budget: &PrecisionBudget) -> Result<Option<i64>> {
        self.with_growth(budget, |s| s.valuation())
    }

    pub fn abs_val_in(&self, budget: &PrecisionBudget) -> Result<(Option<i64>, AbsValue)> {
        self.with_growth(budget, |s| s.abs_val())
    }

    /// Working copy at level `m` (used by regenerators of derived series).
    fn at(&self, m: i64) -> Result<LaurentSeries> {
        match &self.regen {
            Some(r) if m > self.level => {
                let mut s = r(m)?;
                s.regen = Some(r.clone());
                s.level = m;
                Ok(s)
            }
            _ => Ok(self.clone()),
        }
    }

    fn check(&self, other: &LaurentSeries) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::SpecMismatch)
        }
    }

    /// Attach origin and regenerator to a freshly computed window.
    fn finish(mut self, origin: Origin, regen: Option<Regen>, level: i64) -> Self {
        if let Origin::Rational(r) = &origin {
            if !self.is_exact() {
                let (field, r2) = (self.field.clone(), r.clone());
                self.regen = Some(Arc::new(move |m| Ok(Self::expand_rational(&field, &r2, m))));
                self.level = level.max(self.prec);
                self.origin = origin;
                return self;
            }
        }
        self.origin = origin;
        self.regen = if self.is_exact() { None } else { regen };
        self.level = level;
        self
    }

    fn ratfn(&self) -> Option<&RatFn> {
        match &self.origin {
            Origin::Rational(r) => Some(r),
            _ => None,
        }
    }

    pub fn add(&self, other: &LaurentSeries) -> Result<LaurentSeries> {
        self.check(other)?;
        let f = &self.field;
        let start = self.start.min(other.start);
        let prec = self.prec.min(other.prec);
        let end = if prec >= INF { self.end().max(other.end()) } else { prec };
        let coeffs = (start..end).map(|k| f.add(self.get(k), other.get(k))).collect();
        let out = Self::raw(f, start, coeffs, prec);
        let origin = match (self.ratfn(), other.ratfn()) {
            (Some(a), Some(b)) => Origin::Rational(a.add(b, f)),
            _ => Origin::Unknown,
        };
        let regen = self.derived2(other, |a, b| a.add(b));
        Ok(out.finish(origin, regen, self.level.max(other.level)))
    }

    pub fn neg(&self) -> LaurentSeries {
        self.scale(self.field.neg(1))
    }

    pub fn sub(&self, other: &LaurentSeries) -> Result<LaurentSeries> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: Elem) -> LaurentSeries {
        let f = &self.field;
        let out = Self::raw(f, self.start, self.coeffs.iter().map(|&a| f.mul(a, c)).collect(), self.prec);
        let origin = match self.ratfn() {
            Some(r) => Origin::Rational(r.mul(&RatFn::from_poly(TPoly::constant(c)), f)),
            None if c != 0 => match &self.origin {
                Origin::Algebraic(m) => Origin::Algebraic(Arc::new(m.scale_root(c, f))),
                _ => Origin::Unknown,
            },
            None => Origin::Rational(RatFn::zero()),
        };
        let regen = self.derived1(move |a| Ok(a.scale(c)));
        out.finish(origin, regen, self.level)
    }

    /// Multiply by `T^k`.
    pub fn shift(&self, k: i64) -> LaurentSeries {
        let f = &self.field;
        let mut out = Self::raw(f, self.start - k, self.coeffs.clone(), padd(self.prec, -k));
        let origin = match self.ratfn() {
            Some(r) => {
                let t = if k >= 0 {
                    RatFn::from_poly(TPoly::monomial(1, k as usize))
                } else {
                    RatFn::from_poly(TPoly::monomial(1, (-k) as usize)).inv(f).unwrap()
                };
                Origin::Rational(r.mul(&t, f))
            }
            None => Origin::Unknown,
        };
        let regen = self.derived1(move |a| Ok(a.shift(k)));
        if self.is_exact() {
            out.origin = origin;
            return out;
        }
        out = out.finish(origin, regen, self.level);
        out
    }

    pub fn mul(&self, other: &LaurentSeries) -> Result<LaurentSeries> {
        self.check(other)?;
        let f = &self.field;
        let (sa, sb) = (self.start, other.start);
        let prec = padd(self.prec, sb).min(padd(other.prec, sa));
        let start = sa + sb;
        let end = if prec >= INF { self.end() + other.end() - 1 } else { prec };
        let len = (end - start).max(0) as usize;
        let mut out = vec![0 as Elem; len];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 || i >= len {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate().take(len - i) {
                if b != 0 {
                    out[i + j] = f.add(out[i + j], f.mul(a, b));
                }
            }
        }
        let res = Self::raw(f, start, out, prec.max(start.min(prec)));
        let origin = match (self.ratfn(), other.ratfn()) {
            (Some(a), Some(b)) => Origin::Rational(a.mul(b, f)),
            _ => Origin::Unknown,
        };
        let regen = self.derived2(other, |a, b| a.mul(b));
        Ok(res.finish(origin, regen, self.level.max(other.level)))
    }

    pub fn mul_tpoly(&self, p: &TPoly) -> LaurentSeries {
        self.mul(&Self::from_tpoly(&self.field, p)).expect("same field")
    }

    pub fn pow(&self, e: u32) -> Result<LaurentSeries> {
        let mut acc = Self::one(&self.field);
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Multiplicative inverse; `prec = prec_a - 2ν_a`.
    pub fn inv(&self) -> Result<LaurentSeries> {
        let f = &self.field;
        let v = match self.valuation() {
            Ok(Some(v)) => v,
            Ok(None) => return Err(Error::DivisionByZero),
            Err(e) => return Err(e),
        };
        if let Some(r) = self.ratfn() {
            let ri = r.inv(f)?;
            let prec = if self.is_exact() { self.end() - 2 * v + DEFAULT_TERMS } else { self.prec - 2 * v };
            return Ok(Self::from_rational(f, &ri, prec));
        }
        let len = (self.prec - v) as usize;
        let u0inv = f.inv(self.coeffs[0])?;
        let mut c: Vec<Elem> = Vec::with_capacity(len);
        for m in 0..len {
            let mut acc = if m == 0 { 1 } else { 0 };
            for l in 1..=m.min(self.coeffs.len() - 1) {
                acc = f.sub(acc, f.mul(self.coeffs[l], c[m - l]));
            }
            c.push(f.mul(acc, u0inv));
        }
        let out = Self::raw(f, -v, c, self.prec - 2 * v);
        let origin = match &self.origin {
            Origin::Algebraic(m) => Origin::Algebraic(Arc::new(m.reverse())),
            _ => Origin::Unknown,
        };
        let regen = self.derived1(|a| a.inv());
        Ok(out.finish(origin, regen, self.level))
    }

    pub fn div(&self, other: &LaurentSeries) -> Result<LaurentSeries> {
        self.mul(&other.inv()?)
    }

    /// `x^p`: index and precision scale by `p`.
    pub fn frobenius(&self) -> LaurentSeries {
        let f = &self.field;
        let p = f.p() as i64;
        let mut coeffs = vec![0; if self.coeffs.is_empty() { 0 } else { (self.coeffs.len() - 1) * p as usize + 1 }];
        for (i, &c) in self.coeffs.iter().enumerate() {
            coeffs[i * p as usize] = f.frobenius(c);
        }
        let prec = if self.is_exact() { INF } else { self.prec * p };
        let out = Self::raw(f, self.start * p, coeffs, prec);
        let origin = match &self.origin {
            Origin::Rational(r) => Origin::Rational(
                RatFn::new(r.num().frobenius(f), r.den().frobenius(f), f).unwrap(),
            ),
            Origin::Algebraic(m) => Origin::Algebraic(Arc::new(m.coeff_pth_power(f))),
            Origin::Unknown => Origin::Unknown,
        };
        let regen = self.regen.as_ref().map(|_| {
            let a = self.clone();
            Arc::new(move |m: i64| Ok(a.at(div_ceil(m, p))?.frobenius())) as Regen
        });
        out.finish(origin, regen, self.level * p)
    }

    /// `γ` with `γ^p = x`, provided every nonzero index is a multiple of `p`.
    pub fn pth_root(&self) -> Result<LaurentSeries> {
        let f = &self.field;
        let p = f.p() as i64;
        if let Some(k) = (0..self.coeffs.len())
            .map(|i| self.start + i as i64)
            .find(|&k| self.get(k) != 0 && k.rem_euclid(p) != 0)
        {
            return Err(Error::NotAPthPower { index: k });
        }
        let origin = match self.ratfn() {
            Some(r) => match (r.num().pth_root(f), r.den().pth_root(f)) {
                (Some(n), Some(d)) => Origin::Rational(RatFn::new(n, d, f)?),
                _ => {
                    let wide = Self::expand_rational(f, r, self.start + 4096);
                    let k = (wide.start..wide.prec)
                        .find(|&k| wide.get(k) != 0 && k.rem_euclid(p) != 0)
                        .unwrap_or(self.prec);
                    return Err(Error::NotAPthPower { index: k });
                }
            },
            None => Origin::Unknown,
        };
        let start = div_ceil(self.start, p);
        let prec = if self.is_exact() { INF } else { div_ceil(self.prec, p) };
        let end = if self.is_exact() { div_ceil(self.end(), p) } else { prec };
        let coeffs = (start..end).map(|k| f.pth_root(self.get(k * p))).collect();
        let out = Self::raw(f, start, coeffs, prec);
        let regen = self.regen.as_ref().map(|_| {
            let a = self.clone();
            Arc::new(move |m: i64| a.at(m * p)?.pth_root()) as Regen
        });
        Ok(out.finish(origin, regen, div_ceil(self.level, p)))
    }

    /// Cartier operator `Λ_i` for the power `Q = p^j`:
    /// `x = Σ_i T^i Λ_i(x)^Q`.
    pub fn cartier(&self, i: u32, j: u32) -> LaurentSeries {
        let f = &self.field;
        let qj = (f.p() as i64).pow(j);
        assert!((i as i64) < qj, "Cartier index out of range");
        let i = i as i64;
        let start = div_ceil(self.start + i, qj);
        let prec = if self.is_exact() { INF } else { div_ceil(self.prec + i, qj) };
        let end = if self.is_exact() { div_ceil(self.end() + i, qj) } else { prec };
        let coeffs = (start..end).map(|k| f.pth_root_iter(self.get(qj * k - i), j)).collect();
        let out = Self::raw(f, start, coeffs, prec);
        let origin = match self.ratfn() {
            Some(r) => {
                let d = r.den();
                let n = r.num().mul(&d.pow(qj as u32 - 1, f), f);
                Origin::Rational(RatFn::new(n.cartier(i as usize, j, f), d.clone(), f).unwrap())
            }
            None => Origin::Unknown,
        };
        let regen = self.regen.as_ref().map(|_| {
            let a = self.clone();
            Arc::new(move |m: i64| Ok(a.at(m * qj)?.cartier(i as u32, j))) as Regen
        });
        out.finish(origin, regen, div_ceil(self.level, qj))
    }

    /// Split into the polynomial part and the part with `ν ≥ 1`.
    pub fn poly_part(&self) -> Result<(TPoly, LaurentSeries)> {
        if self.prec <= 0 {
            return Err(Error::BelowPrecision { attempted: 0 });
        }
        let f = &self.field;
        let top = (-self.start).max(0) as usize;
        let poly = TPoly::from_coeffs((0..=top).map(|d| self.get(-(d as i64))).collect());
        let start = self.start.max(1);
        let end = if self.is_exact() { self.end().max(start) } else { self.prec };
        let frac = Self::raw(f, start, (start..end).map(|k| self.get(k)).collect(), self.prec);
        let origin = match self.ratfn() {
            Some(r) => Origin::Rational(r.sub(&RatFn::from_poly(poly.clone()), f)),
            None => Origin::Unknown,
        };
        let regen = self.derived1(|a| Ok(a.poly_part()?.1));
        Ok((poly, frac.finish(origin, regen, self.level)))
    }

    /// `‖x‖ = |Σ_{n≥1} a_n T^{-n}|` on the current window.
    pub fn frac_abs(&self) -> Result<AbsValue> {
        if let Some(k) = (self.start.max(1)..self.end()).find(|&k| self.get(k) != 0) {
            if k < self.prec {
                return Ok(AbsValue::Pow(-k));
            }
        }
        match self.ratfn() {
            Some(r) if r.den() == &TPoly::one() => Ok(AbsValue::Zero),
            _ if self.is_exact() => Ok(AbsValue::Zero),
            _ => Err(Error::BelowPrecision { attempted: self.prec }),
        }
    }

    pub fn frac_abs_in(&self, budget: &PrecisionBudget) -> Result<AbsValue> {
        self.with_growth(budget, |s| s.frac_abs())
    }

    /// `true` when both series agree on every index known to both.
    pub fn agrees_with(&self, other: &LaurentSeries) -> bool {
        let lo = self.start.min(other.start);
        let prec = self.prec.min(other.prec);
        let hi = if prec >= INF { self.end().max(other.end()) } else { prec };
        (lo..hi).all(|k| self.get(k) == other.get(k))
    }

    fn derived1(&self, op: impl Fn(&LaurentSeries) -> Result<LaurentSeries> + Send + Sync + 'static) -> Option<Regen> {
        self.regen.as_ref()?;
        let a = self.clone();
        Some(Arc::new(move |m| op(&a.at(m)?)))
    }

    fn derived2(
        &self,
        other: &LaurentSeries,
        op: impl Fn(&LaurentSeries, &LaurentSeries) -> Result<LaurentSeries> + Send + Sync + 'static,
    ) -> Option<Regen> {
        if self.regen.is_none() && other.regen.is_none() {
            return None;
        }
        let (a, b) = (self.clone(), other.clone());
        Some(Arc::new(move |m| op(&a.at(m)?, &b.at(m)?)))
    }

    /// Human-readable form, highest power of `T` first.
    pub fn format(&self) -> String {
        let f = &self.field;
        let mut parts = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let e = -(self.start + i as i64);
            let cs = f.format(c);
            let cs = if cs.contains('+') { format!("({cs})") } else { cs };
            parts.push(match (e, c) {
                (0, _) => cs,
                (1, 1) => "T".to_string(),
                (_, 1) => format!("T^{e}"),
                (1, _) => format!("{cs}*T"),
                _ => format!("{cs}*T^{e}"),
            });
        }
        let body = if parts.is_empty() { "0".to_string() } else { parts.join("+") };
        if self.is_exact() {
            body
        } else {
            format!("{body}+O(T^{})", -self.prec)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Field {
        Field::prime(2).unwrap()
    }
    fn f3() -> Field {
        Field::prime(3).unwrap()
    }
    fn f4() -> Field {
        Field::new(crate::field::FieldSpec::with_default_modulus(2, 2).unwrap()).unwrap()
    }

    #[test]
    fn abs_val_examples() {
        let x = LaurentSeries::exact(&f2(), -1, vec![1, 1, 1]);
        assert_eq!(x.abs_val().unwrap(), (Some(-1), AbsValue::Pow(1)));
        assert_eq!(LaurentSeries::zero(&f2()).abs_val().unwrap(), (None, AbsValue::Zero));
        let y = LaurentSeries::exact(&f3(), 3, vec![1, 0, 1]);
        assert_eq!(y.abs_val().unwrap(), (Some(3), AbsValue::Pow(-3)));
        let unknown = LaurentSeries::truncated(&f2(), 0, vec![0, 0], 2);
        assert_eq!(unknown.abs_val(), Err(Error::BelowPrecision { attempted: 2 }));
    }

    #[test]
    fn arithmetic_examples() {
        let f = f2();
        let x = LaurentSeries::exact(&f, 0, vec![1, 1]).inv().unwrap();
        assert_eq!(x.coeffs_range(0, 20).unwrap(), vec![1; 20]);
        let a = LaurentSeries::from_fn(&f, 1, |k| (k % 3 == 0) as Elem, 30);
        let s = a.add(&a).unwrap();
        assert!(s.coeffs_range(0, 30).unwrap().iter().all(|&c| c == 0));
        let g = f3();
        let t = LaurentSeries::exact(&g, 1, vec![1, 0, 1]).mul_tpoly(&TPoly::t());
        assert!(t.is_exact());
        assert!(t.agrees_with(&LaurentSeries::exact(&g, 0, vec![1, 0, 1])));
    }

    #[test]
    fn exact_cancellation_is_certified() {
        let f = f2();
        let a = LaurentSeries::exact(&f, -2, vec![1, 0, 1, 1]);
        assert_eq!(a.add(&a).unwrap().valuation().unwrap(), None);
        let r = LaurentSeries::from_rational(&f, &RatFn::new(TPoly::one(), TPoly::from_coeffs(vec![1, 1]), &f).unwrap(), 10);
        assert_eq!(r.sub(&r).unwrap().valuation().unwrap(), None);
    }

    #[test]
    fn frac_part_examples() {
        let f = f2();
        let x = LaurentSeries::exact(&f, -2, vec![1, 0, 1, 0, 0, 1]);
        assert_eq!(x.frac_abs().unwrap(), AbsValue::Pow(-3));
        assert_eq!(LaurentSeries::monomial(&f, 1, -5).frac_abs().unwrap(), AbsValue::Zero);
        assert_eq!(LaurentSeries::monomial(&f, 1, 1).frac_abs().unwrap(), AbsValue::Pow(-1));
    }

    #[test]
    fn frobenius_examples() {
        let g = f3();
        let x = LaurentSeries::exact(&g, 1, vec![1, 0, 1]);
        assert!(x.frobenius().agrees_with(&LaurentSeries::exact(&g, 3, vec![1, 0, 0, 0, 0, 0, 1])));
        assert_eq!(LaurentSeries::zero(&g).frobenius().valuation().unwrap(), None);
        let h = f4();
        // g^2 = g + 1, encoded as 3.
        let y = LaurentSeries::monomial(&h, 2, 1).frobenius();
        assert!(y.agrees_with(&LaurentSeries::monomial(&h, 3, 2)));
        let z = LaurentSeries::from_fn(&g, 1, |k| (k % 2) as Elem, 10).frobenius();
        assert_eq!(z.prec(), 30);
    }

    #[test]
    fn pth_root_examples() {
        let f = f2();
        let x = LaurentSeries::exact(&f, 2, vec![1, 0, 1]);
        assert!(x.pth_root().unwrap().agrees_with(&LaurentSeries::exact(&f, 1, vec![1, 1])));
        let g = f3();
        assert!(LaurentSeries::monomial(&g, 1, 3).pth_root().unwrap().agrees_with(&LaurentSeries::monomial(&g, 1, 1)));
        assert_eq!(LaurentSeries::monomial(&f, 1, 1).pth_root().unwrap_err(), Error::NotAPthPower { index: 1 });
    }

    #[test]
    fn cartier_examples() {
        let f = f2();
        let x = LaurentSeries::exact(&f, -1, vec![1, 1, 1, 1]);
        let expect = LaurentSeries::exact(&f, 0, vec![1, 1]);
        assert!(x.cartier(0, 1).agrees_with(&expect));
        assert!(x.cartier(1, 1).agrees_with(&expect));
        for (p, j) in [(2u32, 1u32), (2, 2), (3, 1)] {
            let fld = Field::prime(p).unwrap();
            let qj = (p as i64).pow(j);
            for i in 0..qj {
                let down = LaurentSeries::monomial(&fld, 1, qj - i).cartier(i as u32, j);
                assert!(down.agrees_with(&LaurentSeries::monomial(&fld, 1, 1)));
                let up = LaurentSeries::monomial(&fld, 1, -(qj + i)).cartier(i as u32, j);
                assert!(up.agrees_with(&LaurentSeries::monomial(&fld, 1, -1)));
            }
        }
    }

    #[test]
    fn rational_expansion() {
        let g = f3();
        let r = RatFn::new(TPoly::t(), TPoly::from_coeffs(vec![1, 0, 1]), &g).unwrap();
        let x = LaurentSeries::from_rational(&g, &r, 8);
        assert_eq!(x.coeffs_range(0, 8).unwrap(), vec![0, 1, 0, 2, 0, 1, 0, 2]);
        assert!(x.is_extensible());
        assert_eq!(x.extend(40, &PrecisionBudget::default()).unwrap().coeff(39).unwrap(), 2);
        let inv_t = RatFn::new(TPoly::one(), TPoly::t(), &g).unwrap();
        assert!(LaurentSeries::from_rational(&g, &inv_t, 5).agrees_with(&LaurentSeries::monomial(&g, 1, 1)));
        let t2 = LaurentSeries::from_rational(&g, &RatFn::from_poly(TPoly::monomial(1, 2)), 5);
        assert!(t2.is_exact());
        assert_eq!(t2.valuation().unwrap(), Some(-2));
    }

    #[test]
    fn poly_part_examples() {
        let f = f2();
        let x = LaurentSeries::exact(&f, -2, vec![1, 0, 1, 0, 0, 1]);
        let (p, frac) = x.poly_part().unwrap();
        assert_eq!(p, TPoly::from_coeffs(vec![1, 0, 1]));
        assert!(frac.agrees_with(&LaurentSeries::monomial(&f, 1, 3)));
        let (p, frac) = LaurentSeries::monomial(&f, 1, 1).poly_part().unwrap();
        assert!(p.is_zero());
        assert_eq!(frac.valuation().unwrap(), Some(1));
        let h = f4();
        let y = LaurentSeries::monomial(&h, 1, -1).add(&LaurentSeries::monomial(&h, 2, 2)).unwrap();
        let (p, frac) = y.poly_part().unwrap();
        assert_eq!(p, TPoly::t());
        assert!(frac.agrees_with(&LaurentSeries::monomial(&h, 2, 2)));
    }

    #[test]
    fn derived_series_extend() {
        let f = f2();
        let a = LaurentSeries::from_fn(&f, 1, |k| (k.count_ones() == 1) as Elem, 16);
        let b = a.mul(&a).unwrap().add(&a.shift(3)).unwrap();
        let wide = b.extend(200, &PrecisionBudget::default()).unwrap();
        assert!(wide.prec() >= 200);
        let a_wide = a.extend(400, &PrecisionBudget::default()).unwrap();
        let direct = a_wide.mul(&a_wide).unwrap().add(&a_wide.shift(3)).unwrap();
        assert!(wide.agrees_with(&direct));
    }

    #[test]
    fn budget_policy() {
        let f = f2();
        let z = LaurentSeries::from_fn(&f, 1, |_| 0, 8);
        let budget = PrecisionBudget::new(64);
        assert!(matches!(z.valuation_in(&budget), Err(Error::BelowPrecision { .. })));
        let lenient = PrecisionBudget { on_exhaust: OnExhaust::ReturnUnknown, ..budget };
        assert_eq!(lenient.settle(z.valuation_in(&lenient)).unwrap(), None);
    }
}
