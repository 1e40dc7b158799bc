//! Seeded generators built on ChaCha8 with rejection onto F_q.

use std::sync::Arc;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::field::{Elem, Field};
use crate::laurent::{LaurentSeries, Regen};
use crate::tpoly::TPoly;
use crate::xpoly::XPoly;

pub type Rng = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform integer in `0..n` by rejection.
pub fn below(rng: &mut Rng, n: u32) -> u32 {
    let zone = u32::MAX - u32::MAX % n;
    loop {
        let x = rng.next_u32();
        if x < zone {
            return x % n;
        }
    }
}

/// Uniform element of F_q.
pub fn elem(rng: &mut Rng, f: &Field) -> Elem {
    below(rng, f.q()) as Elem
}

pub fn nonzero_elem(rng: &mut Rng, f: &Field) -> Elem {
    1 + below(rng, f.q() - 1) as Elem
}

/// Uniform polynomial of degree at most `d`.
pub fn tpoly(rng: &mut Rng, f: &Field, d: usize) -> TPoly {
    TPoly::from_coeffs((0..=d).map(|_| elem(rng, f)).collect())
}

/// Polynomial of degree exactly `d`.
pub fn tpoly_exact(rng: &mut Rng, f: &Field, d: usize) -> TPoly {
    let mut c: Vec<Elem> = (0..d).map(|_| elem(rng, f)).collect();
    c.push(nonzero_elem(rng, f));
    TPoly::from_coeffs(c)
}

pub fn monic(rng: &mut Rng, f: &Field, d: usize) -> TPoly {
    let mut c: Vec<Elem> = (0..d).map(|_| elem(rng, f)).collect();
    c.push(1);
    TPoly::from_coeffs(c)
}

/// Polynomial in X of degree exactly `n` with coefficient degrees at most `h`.
pub fn xpoly(rng: &mut Rng, f: &Field, n: usize, h: usize) -> XPoly {
    let mut c: Vec<TPoly> = (0..n).map(|_| tpoly(rng, f, h)).collect();
    let mut lead = tpoly(rng, f, h);
    while lead.is_zero() {
        lead = tpoly(rng, f, h);
    }
    c.push(lead);
    XPoly::from_coeffs(c)
}

/// The series `Σ_{k≥1} a_k T^{-k}` whose digits are successive draws from
/// the generator seeded with `seed`.
pub fn series(f: &Field, seed: u64, prec: i64) -> LaurentSeries {
    let field = f.clone();
    let regen: Regen = Arc::new(move |m: i64| {
        let mut r = rng(seed);
        let end = m.max(1);
        let coeffs = (1..end).map(|_| elem(&mut r, &field)).collect();
        Ok(LaurentSeries::truncated(&field, 1, coeffs, end))
    });
    LaurentSeries::from_regen(regen, prec).expect("random digits are infallible")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_prefix_stable() {
        let f3 = Field::prime(3).unwrap();
        let a = series(&f3, 42, 50);
        let b = series(&f3, 42, 200);
        assert_eq!(a.coeffs_range(1, 50).unwrap(), b.coeffs_range(1, 50).unwrap());
        let c = series(&f3, 43, 50);
        assert_ne!(a.coeffs_range(1, 50).unwrap(), c.coeffs_range(1, 50).unwrap());
    }

    #[test]
    fn uniform_digits() {
        let f4 = Field::new(crate::field::FieldSpec::with_default_modulus(2, 2).unwrap()).unwrap();
        let mut r = rng(1);
        let mut counts = [0u32; 4];
        for _ in 0..4000 {
            counts[elem(&mut r, &f4) as usize] += 1;
        }
        assert!(counts.iter().all(|&c| (800..1200).contains(&c)));
    }
}
