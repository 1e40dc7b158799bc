//! Arithmetic in the finite field F_q, q = p^f.
//!
//! Elements are stored as a single byte: the integer `sum r_i p^i` where
//! `(r_0, .., r_{f-1})` are the coordinates in the basis `1, g, .., g^{f-1}`
//! over F_p and `g` is a root of the field modulus. All operations go through
//! precomputed tables, so `q <= 256` is required.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Raw field element encoding (see module docs).
pub type Elem = u8;

/// Characteristic, degree and modulus of F_q.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    pub p: u32,
    pub f: u32,
    /// Monic modulus over F_p, coefficients low to high (length f + 1).
    /// Present iff `f > 1`.
    pub modulus: Option<Vec<u32>>,
}

impl FieldSpec {
    pub fn prime(p: u32) -> Self {
        FieldSpec { p, f: 1, modulus: None }
    }

    /// F_{p^f} with the first irreducible monic modulus in lexicographic order.
    pub fn with_default_modulus(p: u32, f: u32) -> Result<Self> {
        if f <= 1 {
            return Ok(Self::prime(p));
        }
        check_prime(p)?;
        let count = (p as u64).pow(f);
        for code in 0..count {
            let mut m = digits(code, p, f as usize);
            m.push(1);
            if is_irreducible_fp(&m, p) {
                return Ok(FieldSpec { p, f, modulus: Some(m) });
            }
        }
        Err(Error::InvalidField(format!("no irreducible polynomial of degree {f} over F_{p}")))
    }

    pub fn q(&self) -> u32 {
        self.p.pow(self.f)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p={}", self.p)?;
        if let Some(m) = &self.modulus {
            write!(f, ",f={},modulus=", self.f)?;
            let mut first = true;
            for (i, &c) in m.iter().enumerate().rev() {
                if c == 0 {
                    continue;
                }
                if !first {
                    write!(f, "+")?;
                }
                first = false;
                match (i, c) {
                    (0, c) => write!(f, "{c}")?,
                    (1, 1) => write!(f, "g")?,
                    (1, c) => write!(f, "{c}*g")?,
                    (i, 1) => write!(f, "g^{i}")?,
                    (i, c) => write!(f, "{c}*g^{i}")?,
                }
            }
        }
        Ok(())
    }
}

fn check_prime(p: u32) -> Result<()> {
    if p < 2 || (2..p).take_while(|d| d * d <= p).any(|d| p.is_multiple_of(d)) {
        return Err(Error::InvalidField(format!("{p} is not prime")));
    }
    Ok(())
}

fn digits(mut code: u64, p: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push((code % p as u64) as u32);
        code /= p as u64;
    }
    out
}

/// Remainder of `a` modulo monic `m` over F_p (both low to high).
fn rem_fp(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        if lead != 0 {
            for (i, &c) in m.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p - (lead * c) % p) % p;
            }
        }
        r.pop();
    }
    while r.last() == Some(&0) {
        r.pop();
    }
    r
}

/// Trial division by every monic polynomial of degree 1..=deg/2.
fn is_irreducible_fp(m: &[u32], p: u32) -> bool {
    let deg = m.len() - 1;
    for d in 1..=deg / 2 {
        for code in 0..(p as u64).pow(d as u32) {
            let mut cand = digits(code, p, d);
            cand.push(1);
            if rem_fp(m, &cand, p).is_empty() {
                return false;
            }
        }
    }
    true
}

#[derive(Debug)]
struct Tables {
    spec: FieldSpec,
    q: usize,
    add: Vec<Elem>,
    mul: Vec<Elem>,
    neg: Vec<Elem>,
    inv: Vec<Elem>,
    frob: Vec<Elem>,
    root: Vec<Elem>,
}

/// A constructed finite field; cheap to clone and share between threads.
#[derive(Clone)]
pub struct Field(Arc<Tables>);

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Field({})", self.0.spec)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.spec == other.0.spec
    }
}
impl Eq for Field {}

impl Field {
    pub fn new(spec: FieldSpec) -> Result<Self> {
        check_prime(spec.p)?;
        if spec.f == 0 {
            return Err(Error::InvalidField("extension degree must be >= 1".into()));
        }
        let q = (spec.p as u64)
            .checked_pow(spec.f)
            .filter(|&q| q <= 256)
            .ok_or_else(|| Error::InvalidField(format!("q = {}^{} exceeds 256", spec.p, spec.f)))?
            as usize;
        let p = spec.p;
        let f = spec.f as usize;
        let modulus = match (&spec.modulus, f) {
            (None, 1) => vec![0, 1],
            (Some(m), _) if f > 1 => {
                if m.len() != f + 1 || m[f] != 1 || m.iter().any(|&c| c >= p) {
                    return Err(Error::InvalidField("modulus must be monic of degree f".into()));
                }
                if !is_irreducible_fp(m, p) {
                    return Err(Error::InvalidField("modulus is reducible over F_p".into()));
                }
                m.clone()
            }
            (None, _) => return Err(Error::InvalidField("modulus required when f > 1".into())),
            (Some(_), _) => return Err(Error::InvalidField("modulus given for a prime field".into())),
        };
        let vecs: Vec<Vec<u32>> = (0..q as u64).map(|c| digits(c, p, f)).collect();
        let encode = |v: &[u32]| -> Elem {
            v.iter().rev().fold(0u32, |acc, &d| acc * p + d) as Elem
        };
        let mut add = vec![0; q * q];
        let mut mul = vec![0; q * q];
        for a in 0..q {
            for b in 0..q {
                let s: Vec<u32> = vecs[a].iter().zip(&vecs[b]).map(|(x, y)| (x + y) % p).collect();
                add[a * q + b] = encode(&s);
                let mut prod = vec![0u32; 2 * f - 1];
                for (i, &x) in vecs[a].iter().enumerate() {
                    for (j, &y) in vecs[b].iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                let mut r = rem_fp(&prod, &modulus, p);
                r.resize(f, 0);
                mul[a * q + b] = encode(&r);
            }
        }
        let neg = (0..q)
            .map(|a| (0..q).find(|&b| add[a * q + b] == 0).unwrap() as Elem)
            .collect();
        let inv = (0..q)
            .map(|a| if a == 0 { 0 } else { (1..q).find(|&b| mul[a * q + b] == 1).unwrap() as Elem })
            .collect();
        let pow = |a: usize, e: u32| -> Elem {
            let mut r = 1usize;
            for _ in 0..e {
                r = mul[r * q + a] as usize;
            }
            r as Elem
        };
        let frob: Vec<Elem> = (0..q).map(|a| pow(a, p)).collect();
        let mut root = vec![0; q];
        for a in 0..q {
            root[frob[a] as usize] = a as Elem;
        }
        Ok(Field(Arc::new(Tables { spec, q, add, mul, neg, inv, frob, root })))
    }

    pub fn prime(p: u32) -> Result<Self> {
        Self::new(FieldSpec::prime(p))
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.0.spec
    }
    pub fn p(&self) -> u32 {
        self.0.spec.p
    }
    pub fn q(&self) -> u32 {
        self.0.q as u32
    }
    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.0.q as Elem
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        self.0.add[a as usize * self.0.q + b as usize]
    }
    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.0.neg[b as usize])
    }
    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        self.0.neg[a as usize]
    }
    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.0.mul[a as usize * self.0.q + b as usize]
    }
    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a == 0 {
            Err(Error::DivisionByZero)
        } else {
            Ok(self.0.inv[a as usize])
        }
    }
    pub fn pow(&self, a: Elem, mut e: u64) -> Elem {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }
    /// x ↦ x^p.
    #[inline]
    pub fn frobenius(&self, a: Elem) -> Elem {
        self.0.frob[a as usize]
    }
    /// The unique r with r^p = a.
    #[inline]
    pub fn pth_root(&self, a: Elem) -> Elem {
        self.0.root[a as usize]
    }
    /// The unique r with r^(p^j) = a.
    pub fn pth_root_iter(&self, a: Elem, j: u32) -> Elem {
        (0..j).fold(a, |x, _| self.pth_root(x))
    }
    /// The image of an integer in the prime field.
    pub fn from_int(&self, n: i64) -> Elem {
        n.rem_euclid(self.p() as i64) as Elem
    }

    /// Coordinates of `a` over F_p in the basis 1, g, .., g^{f-1}.
    pub fn coords(&self, a: Elem) -> Vec<u32> {
        digits(a as u64, self.p(), self.0.spec.f as usize)
    }
    pub fn from_coords(&self, c: &[u32]) -> Result<Elem> {
        let p = self.p();
        if c.len() > self.0.spec.f as usize {
            return Err(Error::InvalidField("too many coordinates".into()));
        }
        Ok(c.iter().rev().fold(0u32, |acc, &d| acc * p + d % p) as Elem)
    }

    /// Human-readable element: an integer for prime fields, a polynomial in `g` otherwise.
    pub fn format(&self, a: Elem) -> String {
        if self.0.spec.f == 1 {
            return a.to_string();
        }
        let c = self.coords(a);
        let mut parts = Vec::new();
        for (i, &d) in c.iter().enumerate().rev() {
            if d == 0 {
                continue;
            }
            parts.push(match (i, d) {
                (0, d) => d.to_string(),
                (1, 1) => "g".to_string(),
                (1, d) => format!("{d}*g"),
                (i, 1) => format!("g^{i}"),
                (i, d) => format!("{d}*g^{i}"),
            });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join("+")
        }
    }
}

/// A field element bundled with its field, for checked mixed-field arithmetic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FqElement {
    field: Field,
    value: Elem,
}

impl FqElement {
    pub fn new(field: &Field, value: Elem) -> Self {
        assert!((value as u32) < field.q(), "element out of range");
        FqElement { field: field.clone(), value }
    }
    pub fn value(&self) -> Elem {
        self.value
    }
    pub fn field(&self) -> &Field {
        &self.field
    }
    /// Residues in [0, p).
    pub fn repr(&self) -> Vec<u32> {
        self.field.coords(self.value)
    }
    fn same(&self, other: &Self) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::SpecMismatch)
        }
    }
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same(other)?;
        Ok(Self::new(&self.field, self.field.add(self.value, other.value)))
    }
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same(other)?;
        Ok(Self::new(&self.field, self.field.mul(self.value, other.value)))
    }
    pub fn inv(&self) -> Result<Self> {
        Ok(Self::new(&self.field, self.field.inv(self.value)?))
    }
    pub fn pow(&self, e: u64) -> Self {
        Self::new(&self.field, self.field.pow(self.value, e))
    }
    pub fn pth_root(&self) -> Self {
        Self::new(&self.field, self.field.pth_root(self.value))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f4() -> Field {
        Field::new(FieldSpec { p: 2, f: 2, modulus: Some(vec![1, 1, 1]) }).unwrap()
    }

    #[test]
    fn small_examples() {
        let f3 = Field::prime(3).unwrap();
        assert_eq!(f3.inv(2).unwrap(), 2);
        let f4 = f4();
        let g = f4.from_coords(&[0, 1]).unwrap();
        let g1 = f4.from_coords(&[1, 1]).unwrap();
        assert_eq!(f4.mul(g, g), g1);
        let f2 = Field::prime(2).unwrap();
        for k in 0..20 {
            assert_eq!(f2.pow(1, k), 1);
        }
        assert_eq!(f3.pth_root(2), 2);
        assert_eq!(f4.pth_root(g1), g);
        assert_eq!(f4.pth_root(0), 0);
        assert_eq!(f4.format(g1), "g+1");
    }

    #[test]
    fn frobenius_fixes_every_element() {
        for spec in [
            FieldSpec::prime(2),
            FieldSpec::prime(3),
            FieldSpec::prime(5),
            FieldSpec::with_default_modulus(2, 2).unwrap(),
            FieldSpec::with_default_modulus(3, 2).unwrap(),
            FieldSpec::with_default_modulus(2, 4).unwrap(),
            FieldSpec::with_default_modulus(2, 8).unwrap(),
        ] {
            let f = Field::new(spec).unwrap();
            let q = f.q() as u64;
            for x in f.elements() {
                assert_eq!(f.pow(x, q), x);
                assert_eq!(f.pow(f.pth_root(x), f.p() as u64), x);
                if x != 0 {
                    assert_eq!(f.mul(x, f.inv(x).unwrap()), 1);
                }
            }
        }
    }

    #[test]
    fn errors() {
        let f3 = Field::prime(3).unwrap();
        assert_eq!(f3.inv(0), Err(Error::DivisionByZero));
        let a = FqElement::new(&f3, 1);
        let b = FqElement::new(&f4(), 1);
        assert_eq!(a.add(&b), Err(Error::SpecMismatch));
        assert!(Field::prime(4).is_err());
        assert!(Field::new(FieldSpec { p: 2, f: 2, modulus: Some(vec![1, 0, 1]) }).is_err());
        assert!(Field::prime(257).is_err());
    }
}
