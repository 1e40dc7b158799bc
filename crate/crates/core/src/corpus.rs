//! Named generator-backed series.

use std::sync::Arc;

use crate::field::{Elem, Field};
use crate::laurent::{LaurentSeries, Origin};
use crate::tpoly::TPoly;
use crate::xpoly::XPoly;

/// Working window for freshly built corpus series.
pub const CORPUS_PREC: i64 = 64;

/// `T X^p - T X + 1`.
pub fn mahler_minpoly(f: &Field) -> XPoly {
    let p = f.p() as usize;
    let mut c = vec![TPoly::zero(); p + 1];
    c[0] = TPoly::one();
    c[1] = TPoly::t().neg(f);
    c[p] = c[p].add(&TPoly::t(), f);
    XPoly::from_coeffs(c)
}

/// `Σ_{k≥0} T^{-p^k}`, a root of [`mahler_minpoly`].
pub fn mahler(f: &Field) -> LaurentSeries {
    let p = f.p() as i64;
    LaurentSeries::from_fn(
        f,
        1,
        move |k| {
            let mut k = k;
            while k % p == 0 {
                k /= p;
            }
            (k == 1) as Elem
        },
        CORPUS_PREC,
    )
    .with_origin(Origin::Algebraic(Arc::new(mahler_minpoly(f))))
}

/// `Σ_{k≥1} T^{-k!}`.
pub fn factorial(f: &Field) -> LaurentSeries {
    LaurentSeries::from_fn(
        f,
        1,
        |k| {
            let mut m = 1i64;
            let mut i = 1i64;
            while m < k {
                i += 1;
                m *= i;
            }
            (m == k) as Elem
        },
        CORPUS_PREC,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn supports() {
        let f3 = Field::prime(3).unwrap();
        let m = mahler(&f3).extend(100, &Default::default()).unwrap();
        let ones: Vec<i64> = (1..100).filter(|&k| m.coeff(k).unwrap() == 1).collect();
        assert_eq!(ones, vec![1, 3, 9, 27, 81]);
        let fa = factorial(&f3).extend(800, &Default::default()).unwrap();
        let ones: Vec<i64> = (1..800).filter(|&k| fa.coeff(k).unwrap() == 1).collect();
        assert_eq!(ones, vec![1, 2, 6, 24, 120, 720]);
    }

    #[test]
    fn mahler_minpoly_vanishes() {
        for p in [2, 3] {
            let f = Field::prime(p).unwrap();
            let v = mahler_minpoly(&f).eval_in(&mahler(&f), &Default::default()).unwrap();
            assert_eq!(v.valuation().unwrap(), None);
        }
    }
}
