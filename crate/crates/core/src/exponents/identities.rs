//! Exact identity checks on random inputs.

use super::report::VerificationReport;
use crate::error::Result;
use crate::field::{Field, FieldSpec};
use crate::laurent::LaurentSeries;
use crate::random::{self, Rng};
use crate::tpoly::AbsValue;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IdentityCounts {
    /// Per field and per `j`.
    pub cartier: usize,
    pub semilinear: usize,
    pub gauss: usize,
    pub frobenius_lift: usize,
    pub ultrametric: usize,
    pub round_trip: usize,
}

impl Default for IdentityCounts {
    fn default() -> Self {
        IdentityCounts { cartier: 200, semilinear: 100, gauss: 1000, frobenius_lift: 200, ultrametric: 200, round_trip: 200 }
    }
}

pub(crate) fn small_fields() -> Result<Vec<Field>> {
    Ok(vec![Field::prime(2)?, Field::prime(3)?, Field::new(FieldSpec::with_default_modulus(2, 2)?)?])
}

/// A random series with a pole of order up to 3, known below index 60.
pub(crate) fn random_series(rng: &mut Rng, f: &Field) -> LaurentSeries {
    let seed = random::below(rng, u32::MAX) as u64;
    let shift = random::below(rng, 4) as i64;
    random::series(f, seed, 64).shift(shift).truncate(60)
}

fn cartier_sum(x: &LaurentSeries, j: u32) -> Result<LaurentSeries> {
    let f = x.field();
    let qj = f.p().pow(j);
    let mut acc = LaurentSeries::zero(f);
    for i in 0..qj {
        let mut part = x.cartier(i, j);
        for _ in 0..j {
            part = part.frobenius();
        }
        acc = acc.add(&part.shift(i as i64))?;
    }
    Ok(acc)
}

fn cartier_reconstruction(seed: u64, count: usize) -> Result<VerificationReport> {
    let mut rep = VerificationReport::new("cartier_reconstruction");
    let mut rng = random::rng(seed);
    for f in small_fields()? {
        for j in [1, 2] {
            for _ in 0..count {
                let x = random_series(&mut rng, &f);
                let y = cartier_sum(&x, j)?;
                let window = y.prec().min(x.prec()) - x.start();
                rep.record(y.agrees_with(&x) && window > 0, || format!("q={} j={j} x={}", f.q(), x.format()));
            }
        }
    }
    Ok(rep)
}

fn semilinearity(seed: u64, count: usize) -> Result<VerificationReport> {
    let mut rep = VerificationReport::new("cartier_semilinearity");
    let mut rng = random::rng(seed ^ 0x5e);
    for f in small_fields()? {
        let p = f.p();
        for _ in 0..count {
            let j = 1 + random::below(&mut rng, 2);
            let i = random::below(&mut rng, p.pow(j));
            let a = random_series(&mut rng, &f);
            let c = random_series(&mut rng, &f);
            let b = random::tpoly(&mut rng, &f, 3);
            let bq = LaurentSeries::from_tpoly(&f, &b.pow(p.pow(j), &f));
            let lhs = a.add(&bq.mul(&c)?)?.cartier(i, j);
            let rhs = a.cartier(i, j).add(&c.cartier(i, j).mul_tpoly(&b))?;
            rep.record(lhs.agrees_with(&rhs), || format!("q={} i={i} j={j} a={} b={} c={}", f.q(), a.format(), b.format(&f), c.format()));
        }
    }
    Ok(rep)
}

fn gauss(seed: u64, count: usize) -> Result<VerificationReport> {
    let mut rep = VerificationReport::new("gauss_multiplicativity");
    let mut rng = random::rng(seed ^ 0x6a);
    let fields = small_fields()?;
    for k in 0..count {
        let f = &fields[k % fields.len()];
        let n1 = random::below(&mut rng, 5) as usize;
        let n2 = random::below(&mut rng, 5) as usize;
        let a = random::xpoly(&mut rng, f, n1, 5);
        let b = random::xpoly(&mut rng, f, n2, 5);
        let ok = a.mul(&b, f).height()? == a.height()?.mul(b.height()?);
        rep.record(ok, || format!("q={} P={} Q={}", f.q(), a.format(f), b.format(f)));
    }
    Ok(rep)
}

fn frobenius_lift(seed: u64, count: usize) -> Result<VerificationReport> {
    let mut rep = VerificationReport::new("frobenius_lift");
    let mut rng = random::rng(seed ^ 0x7b);
    let fields = small_fields()?;
    for k in 0..count {
        let f = &fields[k % fields.len()];
        let p = f.p() as i64;
        let xi = random_series(&mut rng, f);
        let n = 1 + random::below(&mut rng, 3) as usize;
        let pp = random::xpoly(&mut rng, f, n, 4);
        let qq = pp.frobenius_lift(f);
        let lhs = qq.eval(&xi.frobenius())?;
        let rhs = pp.eval(&xi)?.frobenius();
        let heights = qq.height_log()? == p * pp.height_log()?;
        rep.record(lhs.agrees_with(&rhs) && heights, || format!("q={} P={} xi={}", f.q(), pp.format(f), xi.format()));
    }
    Ok(rep)
}

fn ultrametric(seed: u64, count: usize) -> Result<VerificationReport> {
    let mut rep = VerificationReport::new("ultrametric");
    let mut rng = random::rng(seed ^ 0x8c);
    let fields = small_fields()?;
    for k in 0..count {
        let f = &fields[k % fields.len()];
        let a = random_series(&mut rng, f);
        let b = random_series(&mut rng, f);
        let (va, vb) = (a.valuation()?, b.valuation()?);
        let abs = |v: Option<i64>| v.map_or(AbsValue::Zero, |v| AbsValue::Pow(-v));
        let (aa, ab) = (abs(va), abs(vb));
        let s = abs(a.add(&b)?.valuation().ok().flatten());
        let sum_ok = s <= aa.max(ab) && (aa == ab || s == aa.max(ab));
        let prod_ok = abs(a.mul(&b)?.valuation()?) == aa.mul(ab);
        rep.record(sum_ok && prod_ok, || format!("q={} a={} b={}", f.q(), a.format(), b.format()));
    }
    Ok(rep)
}

fn round_trip(seed: u64, count: usize) -> Result<VerificationReport> {
    let mut rep = VerificationReport::new("frobenius_root_round_trip");
    let mut rng = random::rng(seed ^ 0x9d);
    let fields = small_fields()?;
    for k in 0..count {
        let f = &fields[k % fields.len()];
        let x = random_series(&mut rng, f);
        let back = x.frobenius().pth_root()?;
        rep.record(back.agrees_with(&x) && back.prec() >= x.prec(), || format!("q={} x={}", f.q(), x.format()));
    }
    Ok(rep)
}

/// Cartier reconstruction and semilinearity, Gauss multiplicativity,
/// Frobenius lifts, ultrametric laws, and Frobenius/root round trips.
pub fn verify_identity_suite(seed: u64, counts: &IdentityCounts) -> Result<Vec<VerificationReport>> {
    Ok(vec![
        cartier_reconstruction(seed, counts.cartier)?,
        semilinearity(seed, counts.semilinear)?,
        gauss(seed, counts.gauss)?,
        frobenius_lift(seed, counts.frobenius_lift)?,
        ultrametric(seed, counts.ultrametric)?,
        round_trip(seed, counts.round_trip)?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_passes() {
        let counts = IdentityCounts { cartier: 10, semilinear: 10, gauss: 50, frobenius_lift: 20, ultrametric: 20, round_trip: 20 };
        for r in verify_identity_suite(3, &counts).unwrap() {
            assert!(r.all_pass(), "{}: {:?}", r.check, r.counterexamples.first());
            assert!(r.instances > 0);
        }
    }
}
