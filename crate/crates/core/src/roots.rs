//! Roots in F_q((T^{-1})): Newton polygons, Hensel lifting, and
//! generator-backed algebraic series.

use std::fmt;
use std::sync::Arc;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::factor::{self, is_irreducible, linear_factor};
use crate::field::{Elem, Field};
use crate::laurent::{LaurentSeries, Origin, PrecisionBudget, Regen};
use crate::tpoly::{AbsValue, RatFn};
use crate::xpoly::XPoly;

/// Cap on the shift-and-rescale recursion for repeated residual roots.
const MAX_DEPTH: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewtonPolygon {
    /// Lower hull vertices `(i, ν(c_i))`.
    pub vertices: Vec<(usize, i64)>,
    /// `(slope, length)` left to right.
    pub segments: Vec<(Ratio<i64>, usize)>,
}

impl NewtonPolygon {
    /// Root valuations with multiplicity: the negated slopes.
    pub fn root_valuations(&self) -> Vec<(Ratio<i64>, usize)> {
        self.segments.iter().map(|&(s, l)| (-s, l)).collect()
    }
}

fn lower_hull(points: &[(usize, i64)]) -> NewtonPolygon {
    let mut hull: Vec<(usize, i64)> = Vec::new();
    for &pt in points {
        while hull.len() >= 2 {
            let (x1, y1) = hull[hull.len() - 2];
            let (x2, y2) = hull[hull.len() - 1];
            // drop the middle point unless it lies strictly below the chord
            let cross = (x2 as i64 - x1 as i64) * (pt.1 - y1) - (y2 - y1) * (pt.0 as i64 - x1 as i64);
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    let segments = hull
        .windows(2)
        .map(|w| {
            let len = w[1].0 - w[0].0;
            (Ratio::new(w[1].1 - w[0].1, len as i64), len)
        })
        .collect();
    NewtonPolygon { vertices: hull, segments }
}

/// Newton polygon of `P` with respect to `ν`.
pub fn newton_polygon(p: &XPoly) -> Result<NewtonPolygon> {
    if !p.is_nonconstant() {
        return Err(Error::ConstantPolynomial);
    }
    let pts: Vec<(usize, i64)> = p
        .coeffs()
        .iter()
        .enumerate()
        .filter_map(|(i, c)| c.deg().map(|d| (i, -(d as i64))))
        .collect();
    Ok(lower_hull(&pts))
}

/// Polynomial with exact Laurent coefficients.
type LPoly = Vec<LaurentSeries>;

fn to_lpoly(p: &XPoly, f: &Field) -> LPoly {
    p.coeffs().iter().map(|c| LaurentSeries::from_tpoly(f, c)).collect()
}

fn lpoly_eval(c: &[LaurentSeries], x: &LaurentSeries) -> Result<LaurentSeries> {
    let mut acc = LaurentSeries::zero(x.field());
    for a in c.iter().rev() {
        acc = acc.mul(x)?.add(a)?;
    }
    Ok(acc)
}

fn lpoly_derivative(c: &[LaurentSeries]) -> LPoly {
    c.iter()
        .enumerate()
        .skip(1)
        .map(|(i, a)| a.scale(a.field().from_int(i as i64)))
        .collect()
}

/// Coefficients of `P(Y + a)`.
fn taylor_shift(c: &[LaurentSeries], a: &LaurentSeries) -> Result<LPoly> {
    let mut b = c.to_vec();
    let n = b.len();
    for i in 0..n.saturating_sub(1) {
        for k in (i..n - 1).rev() {
            b[k] = b[k].add(&a.mul(&b[k + 1])?)?;
        }
    }
    Ok(b)
}

fn nu_exact(s: &LaurentSeries) -> Option<i64> {
    s.valuation().expect("exact series have certified valuations")
}

/// Exact Laurent polynomial made of the window of `s` below `prec`.
fn exact_below(s: &LaurentSeries, prec: i64) -> Result<LaurentSeries> {
    let lo = s.start().min(prec);
    Ok(LaurentSeries::exact(s.field(), lo, s.coeffs_range(lo, prec)?))
}

fn wide_budget(prec: i64) -> PrecisionBudget {
    PrecisionBudget::new((8 * prec.max(64)) as usize)
}

/// `a / b` for exact `a`, `b`, as an exact polynomial truncated below `prec`.
fn div_below(a: &LaurentSeries, b: &LaurentSeries, prec: i64) -> Result<LaurentSeries> {
    let va = nu_exact(a).unwrap_or(prec);
    let binv = b.inv()?;
    let binv = binv.extend(prec - va + 1, &wide_budget(prec))?;
    exact_below(&a.mul(&binv)?, prec)
}

/// Newton iteration on exact coefficients from an exact start. Returns the
/// root known below `target`, or the exact root when one is hit.
fn newton_iterate(c: &[LaurentSeries], y0: &LaurentSeries, target: i64) -> Result<LaurentSeries> {
    let dc = lpoly_derivative(c);
    let mut y = y0.clone();
    loop {
        let py = lpoly_eval(c, &y)?;
        let Some(v0) = nu_exact(&py) else { return Ok(y) };
        let dpy = lpoly_eval(&dc, &y)?;
        let v1 = nu_exact(&dpy).ok_or(Error::NewtonConditionFailed)?;
        if v0 <= 2 * v1 {
            return Err(Error::NewtonConditionFailed);
        }
        if v0 - v1 >= target {
            return Ok(y.truncate(target));
        }
        let delta = div_below(&py, &dpy, target)?;
        y = y.sub(&delta)?;
    }
}

/// Lift an approximate simple root of `P` to precision `target`.
pub fn hensel_lift(p: &XPoly, approx: &LaurentSeries, target: i64) -> Result<LaurentSeries> {
    let f = approx.field().clone();
    let start = exact_below(approx, approx.prec().min(target.max(approx.start() + 1)))?;
    let c = to_lpoly(p, &f);
    let py = lpoly_eval(&c, &start)?;
    let dpy = lpoly_eval(&lpoly_derivative(&c), &start)?;
    match (nu_exact(&py), nu_exact(&dpy)) {
        (None, _) => return Ok(start),
        (Some(v0), Some(v1)) if v0 > 2 * v1 => {}
        _ => return Err(Error::NewtonConditionFailed),
    }
    newton_iterate(&c, &start, target)
}

/// Generator-backed root: `shift + y` where `y` is the Newton limit from 0
/// for the shifted coefficients.
fn lifted_root(c: LPoly, shift: LaurentSeries, prec: i64) -> Result<LaurentSeries> {
    let f = shift.field().clone();
    let regen: Regen = Arc::new(move |m| {
        let y = newton_iterate(&c, &LaurentSeries::zero(&f), m)?;
        let r = shift.add(&y)?;
        Ok(if r.is_exact() { r } else { r.truncate(m) })
    });
    LaurentSeries::from_regen(regen, prec)
}

/// Roots of `f` over F_q with multiplicity.
fn fq_roots(coeffs: &[Elem], f: &Field) -> Vec<(Elem, usize)> {
    let mut out = Vec::new();
    for z in f.elements().filter(|&z| z != 0) {
        let mut cur = coeffs.to_vec();
        let mut m = 0;
        loop {
            // synthetic division by (Z - z)
            let n = cur.len();
            if n < 2 {
                break;
            }
            let mut quo = vec![0; n - 1];
            let mut acc = 0;
            for k in (0..n).rev() {
                acc = f.add(f.mul(acc, z), cur[k]);
                if k > 0 {
                    quo[k - 1] = acc;
                }
            }
            if acc != 0 {
                break;
            }
            m += 1;
            cur = quo;
        }
        if m > 0 {
            out.push((z, m));
        }
    }
    out
}

/// Roots of a squarefree separable polynomial given by exact coefficients,
/// restricted to valuation above `min_val` and offset by `shift`.
fn separable_roots(
    c: &LPoly,
    shift: &LaurentSeries,
    min_val: Option<i64>,
    depth: usize,
    prec: i64,
    out: &mut Vec<LaurentSeries>,
) -> Result<()> {
    if depth > MAX_DEPTH {
        return Err(Error::BudgetExceeded(format!("root descent deeper than {MAX_DEPTH}")));
    }
    let f = shift.field().clone();
    let first = c.iter().position(|a| nu_exact(a).is_some()).unwrap_or(c.len());
    if first > 0 {
        out.push(shift.clone());
    }
    let pts: Vec<(usize, i64)> = c
        .iter()
        .enumerate()
        .skip(first)
        .filter_map(|(i, a)| nu_exact(a).map(|v| (i, v)))
        .collect();
    if pts.len() < 2 {
        return Ok(());
    }
    let poly = lower_hull(&pts);
    for w in poly.vertices.windows(2) {
        let ((i0, y0), (i1, y1)) = (w[0], w[1]);
        let len = (i1 - i0) as i64;
        if (y1 - y0) % len != 0 {
            continue;
        }
        let v = -(y1 - y0) / len;
        if min_val.is_some_and(|m| v <= m) {
            continue;
        }
        let residual: Vec<Elem> = (i0..=i1)
            .map(|i| {
                let a = &c[i];
                if nu_exact(a) == Some(y0 - v * (i - i0) as i64) {
                    a.coeff(y0 - v * (i - i0) as i64).unwrap()
                } else {
                    0
                }
            })
            .collect();
        for (z, m) in fq_roots(&residual, &f) {
            let a = LaurentSeries::monomial(&f, z, v);
            let shifted = taylor_shift(c, &a)?;
            let new_shift = shift.add(&a)?;
            let c0 = nu_exact(&shifted[0]);
            let c1 = shifted.get(1).and_then(nu_exact);
            match (c0, c1) {
                (None, _) => out.push(new_shift),
                (Some(v0), Some(v1)) if m == 1 && v0 > 2 * v1 => {
                    out.push(lifted_root(shifted, new_shift, prec)?);
                }
                _ => separable_roots(&shifted, &new_shift, Some(v), depth + 1, prec, out)?,
            }
        }
    }
    Ok(())
}

fn within_factor_bounds(p: &XPoly) -> bool {
    p.deg_x().is_some_and(|d| d <= factor::MAX_DEG_X)
        && p.coeffs().iter().all(|c| c.deg().unwrap_or(0) <= factor::MAX_COEFF_DEG)
}

fn roots_inner(p: &XPoly, f: &Field, prec: i64, depth: usize, out: &mut Vec<LaurentSeries>) -> Result<()> {
    if depth > MAX_DEPTH {
        return Err(Error::BudgetExceeded(format!("root descent deeper than {MAX_DEPTH}")));
    }
    if !p.is_nonconstant() {
        return Ok(());
    }
    let dp = p.derivative(f);
    if dp.is_zero() {
        let pf = f.p() as i64;
        let q = XPoly::from_coeffs(p.coeffs().iter().step_by(pf as usize).cloned().collect());
        let mut inner = Vec::new();
        roots_inner(&q, f, prec * pf, depth + 1, &mut inner)?;
        for beta in inner {
            match beta.pth_root() {
                Ok(alpha) => out.push(alpha),
                Err(Error::NotAPthPower { .. }) => {}
                Err(e) => return Err(e),
            }
        }
        return Ok(());
    }
    let g = p.gcd(&dp, f)?;
    if g.is_nonconstant() {
        let rest = p.div_exact(&g, f).expect("primitive gcd divides");
        roots_inner(&g, f, prec, depth + 1, out)?;
        return roots_inner(&rest, f, prec, depth + 1, out);
    }
    let mut cur = p.clone();
    if within_factor_bounds(&cur) {
        while cur.is_nonconstant() {
            let Some(lin) = linear_factor(&cur, f)? else { break };
            let r = RatFn::new(lin.coeff(0).neg(f), lin.coeff(1), f)?;
            out.push(LaurentSeries::from_rational(f, &r, prec));
            cur = cur.div_exact(&lin, f).expect("linear factor divides");
        }
    }
    if cur.is_nonconstant() {
        separable_roots(&to_lpoly(&cur, f), &LaurentSeries::zero(f), None, 0, prec, out)?;
    }
    Ok(())
}

fn sort_key(s: &LaurentSeries, prec: i64) -> (i64, Vec<Elem>) {
    let v = s.start().min(prec);
    (v, s.coeffs_range(v, prec).unwrap_or_default())
}

/// All roots of `P` in F_q((T^{-1})), each known at least below `prec`.
pub fn base_roots(p: &XPoly, f: &Field, prec: i64) -> Result<Vec<LaurentSeries>> {
    if !p.is_nonconstant() {
        return Err(Error::ConstantPolynomial);
    }
    let mut raw = Vec::new();
    roots_inner(p, f, prec, 0, &mut raw)?;
    let budget = wide_budget(prec);
    let mut roots: Vec<LaurentSeries> = Vec::new();
    for r in raw {
        let r = r.extend(prec, &budget)?;
        if !roots.iter().any(|s| s.truncate(prec).agrees_with(&r.truncate(prec))) {
            roots.push(r);
        }
    }
    roots.sort_by_cached_key(|s| sort_key(s, prec));
    Ok(roots)
}

/// `(α, |ξ - α|)` minimizing the distance over the base-field roots of `P`.
pub fn closest_root(p: &XPoly, xi: &LaurentSeries, budget: &PrecisionBudget) -> Result<(LaurentSeries, AbsValue)> {
    let f = xi.field().clone();
    let prec = xi.prec().min(budget.max_terms as i64).max(32);
    let roots = base_roots(p, &f, prec)?;
    let mut best: Option<(LaurentSeries, AbsValue)> = None;
    for alpha in roots {
        let d = xi.sub(&alpha)?.abs_val_in(budget)?.1;
        if best.as_ref().is_none_or(|b| d < b.1) {
            best = Some((alpha, d));
        }
    }
    best.ok_or(Error::NoBaseRoot)
}

/// Selects one root by valuation and, optionally, leading coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Branch {
    pub val: i64,
    pub lead: Option<Elem>,
}

impl Branch {
    pub fn matches(&self, s: &LaurentSeries) -> bool {
        matches!(s.valuation(), Ok(Some(v)) if v == self.val)
            && self.lead.is_none_or(|l| s.coeff(self.val).ok() == Some(l))
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "val:{}", self.val)?;
        if let Some(l) = self.lead {
            write!(f, ",lead:{l}")?;
        }
        Ok(())
    }
}

/// A base-field root of an irreducible primitive polynomial.
#[derive(Debug, Clone)]
pub struct AlgebraicSeries {
    pub minpoly: XPoly,
    pub branch: Branch,
    pub series: LaurentSeries,
}

impl AlgebraicSeries {
    /// `H(α) = H(minpoly)`.
    pub fn height(&self) -> AbsValue {
        self.minpoly.height().expect("nonzero minimal polynomial")
    }
    pub fn degree(&self) -> usize {
        self.minpoly.deg_x().unwrap_or(0)
    }
}

/// The root of `minpoly` selected by `branch`, generator-backed.
pub fn algebraic_series(minpoly: &XPoly, branch: Branch, f: &Field, prec: i64) -> Result<AlgebraicSeries> {
    if !is_irreducible(minpoly, f)? {
        return Err(Error::Reducible);
    }
    let matching: Vec<LaurentSeries> =
        base_roots(minpoly, f, prec.max(branch.val + 1))?.into_iter().filter(|s| branch.matches(s)).collect();
    let series = match matching.len() {
        0 => return Err(Error::NoSuchBranch),
        1 => matching.into_iter().next().unwrap(),
        k => {
            return Err(Error::PreconditionViolated(format!("branch {branch} matches {k} roots")));
        }
    };
    let minpoly = minpoly.primitive_part(f)?;
    let series = series.with_origin(Origin::Algebraic(Arc::new(minpoly.clone())));
    Ok(AlgebraicSeries { minpoly, branch, series })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tpoly::TPoly;

    fn t(v: &[Elem]) -> TPoly {
        TPoly::from_coeffs(v.to_vec())
    }
    fn xp(v: &[&[Elem]]) -> XPoly {
        XPoly::from_coeffs(v.iter().map(|c| t(c)).collect())
    }
    fn mahler3() -> XPoly {
        xp(&[&[1], &[0, 2], &[], &[0, 1]])
    }

    #[test]
    fn newton_polygon_examples() {
        let np = newton_polygon(&mahler3()).unwrap();
        assert_eq!(np.vertices, vec![(0, 0), (1, -1), (3, -1)]);
        assert_eq!(np.segments, vec![(Ratio::from_integer(-1), 1), (Ratio::from_integer(0), 2)]);
        let np = newton_polygon(&xp(&[&[0, 2], &[1]])).unwrap();
        assert_eq!(np.root_valuations(), vec![(Ratio::from_integer(-1), 1)]);
    }

    #[test]
    fn mahler_roots() {
        let f3 = Field::prime(3).unwrap();
        let roots = base_roots(&mahler3(), &f3, 100).unwrap();
        assert_eq!(roots.len(), 3);
        let xi = roots.iter().find(|r| r.valuation().unwrap() == Some(1)).unwrap();
        for k in 1..100 {
            let expect = [1, 3, 9, 27, 81].contains(&k) as Elem;
            assert_eq!(xi.coeff(k).unwrap(), expect, "index {k}");
        }
        for c in [1, 2] {
            let shifted = xi.add(&LaurentSeries::monomial(&f3, c, 0)).unwrap();
            assert!(roots.iter().any(|r| r.truncate(100).agrees_with(&shifted.truncate(100))));
        }
    }

    #[test]
    fn hensel_examples() {
        let f2 = Field::prime(2).unwrap();
        let p = xp(&[&[1], &[0, 1]]);
        // X - T^{-1} cleared: T X - 1; from 0 the condition holds.
        let r = hensel_lift(&p, &LaurentSeries::zero(&f2), 20).unwrap();
        assert!(r.truncate(20).agrees_with(&LaurentSeries::monomial(&f2, 1, 1).truncate(20)));
        let f3 = Field::prime(3).unwrap();
        let r = hensel_lift(&mahler3(), &LaurentSeries::monomial(&f3, 1, 1), 243).unwrap();
        assert_eq!(r.prec(), 243);
        for k in 1..243 {
            assert_eq!(r.coeff(k).unwrap(), [1, 3, 9, 27, 81].contains(&k) as Elem);
        }
        let exact = LaurentSeries::monomial(&f2, 1, 1);
        assert!(hensel_lift(&p, &exact, 10).unwrap().agrees_with(&exact));
    }

    #[test]
    fn algebraic_series_examples() {
        let f3 = Field::prime(3).unwrap();
        let a = algebraic_series(&mahler3(), Branch { val: 1, lead: None }, &f3, 243).unwrap();
        let c = a.series.coeffs_range(0, 243).unwrap();
        for (k, &v) in c.iter().enumerate() {
            assert_eq!(v, [1, 3, 9, 27, 81, 243].contains(&k) as Elem);
        }
        let lin = algebraic_series(&xp(&[&[2], &[0, 1]]), Branch { val: 1, lead: None }, &f3, 10).unwrap();
        assert!(lin.series.truncate(10).agrees_with(&LaurentSeries::monomial(&f3, 1, 1).truncate(10)));
        assert_eq!(
            algebraic_series(&mahler3(), Branch { val: 5, lead: None }, &f3, 20).unwrap_err(),
            Error::NoSuchBranch
        );
        let red = xp(&[&[1], &[0, 1]]).mul(&xp(&[&[0, 1], &[1]]), &f3);
        assert_eq!(algebraic_series(&red, Branch { val: 1, lead: None }, &f3, 20).unwrap_err(), Error::Reducible);
    }

    #[test]
    fn roots_are_zero_of_polynomial() {
        let f3 = Field::prime(3).unwrap();
        let budget = PrecisionBudget::default();
        let a = algebraic_series(&mahler3(), Branch { val: 1, lead: None }, &f3, 50).unwrap();
        assert_eq!(mahler3().eval_in(&a.series, &budget).unwrap().valuation().unwrap(), None);
        let v = mahler3().eval(&a.series).unwrap();
        assert!(v.coeffs_range(-2, 40).unwrap().iter().all(|&c| c == 0));
    }

    #[test]
    fn inseparable_and_repeated_roots() {
        let f2 = Field::prime(2).unwrap();
        // (X + T)^2 X has roots -T and 0.
        let p = xp(&[&[0, 1], &[1]]).pow(2, &f2).mul(&XPoly::x(), &f2);
        let roots = base_roots(&p, &f2, 10).unwrap();
        assert_eq!(roots.len(), 2);
        // X^2 + T^2 + T: the square root of T^2 + T is not a Laurent series.
        assert!(base_roots(&xp(&[&[0, 1, 1], &[], &[1]]), &f2, 10).unwrap().is_empty());
        // X^2 + T^2 = (X + T)^2.
        let r = base_roots(&xp(&[&[0, 0, 1], &[], &[1]]), &f2, 10).unwrap();
        assert_eq!(r.len(), 1);
        assert!(r[0].agrees_with(&LaurentSeries::monomial(&f2, 1, -1)));
    }

    #[test]
    fn quadratic_with_hensel_roots() {
        // X^2 - (1 + T^{-1}) cleared: T X^2 - (T + 1) over F_3.
        let f3 = Field::prime(3).unwrap();
        let p = xp(&[&[2, 2], &[], &[0, 1]]);
        let roots = base_roots(&p, &f3, 30).unwrap();
        assert_eq!(roots.len(), 2);
        for r in &roots {
            let sq = r.mul(r).unwrap().truncate(30);
            let target = LaurentSeries::exact(&f3, 0, vec![1, 1]);
            assert!(sq.agrees_with(&target.truncate(30)));
        }
    }

    #[test]
    fn closest_root_picks_nearest() {
        let f3 = Field::prime(3).unwrap();
        // (X - T)(X - T - 1)(T X - 1)
        let p = xp(&[&[0, 2], &[1]]).mul(&xp(&[&[2, 2], &[1]]), &f3).mul(&xp(&[&[2], &[0, 1]]), &f3);
        let xi = LaurentSeries::exact(&f3, -1, vec![1, 1, 0, 1]);
        let (alpha, d) = closest_root(&p, &xi, &PrecisionBudget::default()).unwrap();
        assert!(alpha.agrees_with(&LaurentSeries::exact(&f3, -1, vec![1, 1])));
        assert_eq!(d, AbsValue::Pow(-2));
        let no_roots = xp(&[&[0, 1, 1], &[], &[1]]);
        let f2 = Field::prime(2).unwrap();
        let xi2 = LaurentSeries::monomial(&f2, 1, 1);
        assert_eq!(closest_root(&no_roots, &xi2, &PrecisionBudget::default()).unwrap_err(), Error::NoBaseRoot);
    }
}
