//! Text grammar for fields, polynomials and series specs.

use std::collections::BTreeMap;

use fqdio::factor::is_irreducible;
use fqdio::roots::Branch;
use fqdio::{Elem, Error, Field, FieldSpec, LaurentSeries, RatFn, Result, TPoly, XPoly};

/// Exponents of `(g, T, X)`.
type Mono = (u32, i64, u32);

/// Sparse polynomial in `g`, `T`, `X` with coefficients in `Z/p`.
#[derive(Debug, Clone, Default, PartialEq)]
struct Sparse(BTreeMap<Mono, i64>);

impl Sparse {
    fn constant(c: i64, p: i64) -> Self {
        let mut s = Sparse::default();
        s.push((0, 0, 0), c, p);
        s
    }
    fn var(m: Mono) -> Self {
        Sparse(BTreeMap::from([(m, 1)]))
    }
    fn push(&mut self, m: Mono, c: i64, p: i64) {
        let e = self.0.entry(m).or_insert(0);
        *e = (*e + c).rem_euclid(p);
        if *e == 0 {
            self.0.remove(&m);
        }
    }
    fn add(mut self, o: &Sparse, sign: i64, p: i64) -> Self {
        for (&m, &c) in &o.0 {
            self.push(m, sign * c, p);
        }
        self
    }
    fn mul(&self, o: &Sparse, p: i64) -> Self {
        let mut out = Sparse::default();
        for (&(a, b, c), &x) in &self.0 {
            for (&(d, e, g), &y) in &o.0 {
                out.push((a + d, b + e, c + g), x * y % p, p);
            }
        }
        out
    }
    /// The single monomial `T^k`, if that is what this is.
    fn as_t_power(&self) -> Option<i64> {
        match self.0.iter().next() {
            Some(((0, k, 0), 1)) if self.0.len() == 1 => Some(*k),
            _ => None,
        }
    }
}

/// Which variables an expression may use.
#[derive(Debug, Clone, Copy)]
struct Vars {
    g: bool,
    t: bool,
    x: bool,
    neg_t: bool,
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    offset: usize,
    p: i64,
    vars: Vars,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.offset + self.pos, msg: msg.into() })
    }
    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }
    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }
    fn int(&mut self) -> Result<i64> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected an integer");
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| Error::Parse { pos: self.offset + start, msg: "integer out of range".into() })
    }

    fn expr(&mut self) -> Result<Sparse> {
        let neg = self.eat(b'-');
        let mut acc = Sparse::default().add(&self.term()?, if neg { -1 } else { 1 }, self.p);
        loop {
            let sign = if self.eat(b'+') {
                1
            } else if self.eat(b'-') {
                -1
            } else {
                return Ok(acc);
            };
            acc = acc.add(&self.term()?, sign, self.p);
        }
    }

    fn term(&mut self) -> Result<Sparse> {
        let mut acc = self.factor()?;
        while self.eat(b'*') {
            acc = acc.mul(&self.factor()?, self.p);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Sparse> {
        let base = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let at = self.pos;
        let neg = self.eat(b'-');
        let e = self.int()?;
        if neg {
            return match base.as_t_power() {
                Some(k) if self.vars.neg_t && k == 1 => Ok(Sparse::var((0, -e, 0))),
                _ => Err(Error::Parse { pos: self.offset + at, msg: "negative exponent only allowed on T".into() }),
            };
        }
        let mut out = Sparse::constant(1, self.p);
        for _ in 0..e {
            out = out.mul(&base, self.p);
        }
        Ok(out)
    }

    fn atom(&mut self) -> Result<Sparse> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return self.err("expected ')'");
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => Ok(Sparse::constant(self.int()?, self.p)),
            Some(b'g') if self.vars.g => {
                self.pos += 1;
                Ok(Sparse::var((1, 0, 0)))
            }
            Some(b'T') if self.vars.t => {
                self.pos += 1;
                Ok(Sparse::var((0, 1, 0)))
            }
            Some(b'X') if self.vars.x => {
                self.pos += 1;
                Ok(Sparse::var((0, 0, 1)))
            }
            Some(_) => self.err(format!("unexpected '{}'", self.peek().unwrap() as char)),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parse `text` up to the first byte in `stop` (or the end); returns the
/// value and the number of bytes consumed.
fn parse_prefix(text: &str, offset: usize, p: u32, vars: Vars, stop: &[u8]) -> Result<(Sparse, usize)> {
    let mut ps = Parser { s: text.as_bytes(), pos: 0, offset, p: p as i64, vars };
    let v = ps.expr()?;
    match ps.peek() {
        None => Ok((v, ps.pos)),
        Some(c) if stop.contains(&c) => Ok((v, ps.pos)),
        Some(c) => ps.err(format!("unexpected '{}'", c as char)),
    }
}

fn parse_all(text: &str, offset: usize, p: u32, vars: Vars) -> Result<Sparse> {
    if text.is_empty() {
        return Err(Error::Parse { pos: offset, msg: "empty expression".into() });
    }
    Ok(parse_prefix(text, offset, p, vars, &[])?.0)
}

fn vars(f: &Field, t: bool, x: bool) -> Vars {
    Vars { g: f.spec().f > 1, t, x, neg_t: false }
}

fn coeff(f: &Field, ge: u32, c: i64) -> Result<Elem> {
    let base = if ge == 0 { 1 } else { f.pow(f.from_coords(&[0, 1])?, ge as u64) };
    Ok(f.mul(f.from_int(c), base))
}

/// `(T exponent, X exponent) -> element`.
fn collect(s: &Sparse, f: &Field) -> Result<BTreeMap<(i64, u32), Elem>> {
    let mut out: BTreeMap<(i64, u32), Elem> = BTreeMap::new();
    for (&(ge, te, xe), &c) in &s.0 {
        let e = out.entry((te, xe)).or_insert(0);
        *e = f.add(*e, coeff(f, ge, c)?);
    }
    out.retain(|_, c| *c != 0);
    Ok(out)
}

fn to_tpoly(m: &BTreeMap<(i64, u32), Elem>, x: u32) -> TPoly {
    let deg = m.keys().filter(|k| k.1 == x).map(|k| k.0).max().unwrap_or(0).max(0) as usize;
    let mut c = vec![0; deg + 1];
    for (&(te, _), &v) in m.iter().filter(|(k, _)| k.1 == x) {
        c[te as usize] = v;
    }
    TPoly::from_coeffs(c)
}

fn tpoly_at(text: &str, offset: usize, f: &Field) -> Result<TPoly> {
    let m = collect(&parse_all(text, offset, f.p(), vars(f, true, false))?, f)?;
    Ok(to_tpoly(&m, 0))
}

fn xpoly_at(text: &str, offset: usize, f: &Field) -> Result<XPoly> {
    let m = collect(&parse_all(text, offset, f.p(), vars(f, true, true))?, f)?;
    let dx = m.keys().map(|k| k.1).max().unwrap_or(0);
    Ok(XPoly::from_coeffs((0..=dx).map(|x| to_tpoly(&m, x)).collect()))
}

fn elem_at(text: &str, offset: usize, f: &Field) -> Result<Elem> {
    let m = collect(&parse_all(text, offset, f.p(), vars(f, false, false))?, f)?;
    Ok(m.get(&(0, 0)).copied().unwrap_or(0))
}

/// `p=3` or `p=2,f=2[,modulus=g^2+g+1]`.
pub fn parse_field(text: &str) -> Result<FieldSpec> {
    let (mut p, mut deg, mut modulus) = (None, 1u32, None);
    let mut offset = 0;
    for part in text.split(',') {
        let Some((k, v)) = part.split_once('=') else {
            return Err(Error::Parse { pos: offset, msg: "expected key=value".into() });
        };
        let voff = offset + k.len() + 1;
        let num = |v: &str| {
            v.parse::<u32>().map_err(|_| Error::Parse { pos: voff, msg: "expected a positive integer".into() })
        };
        match k {
            "p" => p = Some(num(v)?),
            "f" => deg = num(v)?,
            "modulus" => modulus = Some((v, voff)),
            _ => return Err(Error::Parse { pos: offset, msg: format!("unknown key '{k}'") }),
        }
        offset += part.len() + 1;
    }
    let p = p.ok_or(Error::Parse { pos: 0, msg: "missing p".into() })?;
    let spec = match modulus {
        None => FieldSpec::with_default_modulus(p, deg)?,
        Some((v, voff)) => {
            let g = Vars { g: true, t: false, x: false, neg_t: false };
            let s = parse_all(v, voff, p, g)?;
            let top = s.0.keys().map(|k| k.0).max().unwrap_or(0);
            let mut c = vec![0u32; top as usize + 1];
            for (&(ge, _, _), &v) in &s.0 {
                c[ge as usize] = v as u32;
            }
            if top != deg || c[top as usize] != 1 {
                return Err(Error::Semantic(format!("modulus must be monic of degree {deg}")));
            }
            FieldSpec { p, f: deg, modulus: if deg > 1 { Some(c) } else { None } }
        }
    };
    Field::new(spec.clone())?;
    Ok(spec)
}

pub fn parse_elem(text: &str, f: &Field) -> Result<Elem> {
    elem_at(text, 0, f)
}

/// A polynomial in `T`, e.g. `T^3+2*T+1`.
pub fn parse_tpoly(text: &str, f: &Field) -> Result<TPoly> {
    tpoly_at(text, 0, f)
}

/// A polynomial in `X` over F_q[T], e.g. `(T)*X^3+(2*T)*X+1`.
pub fn parse_xpoly(text: &str, f: &Field) -> Result<XPoly> {
    xpoly_at(text, 0, f)
}

/// `num` or `num/den`.
fn ratfn_at(text: &str, offset: usize, f: &Field) -> Result<RatFn> {
    let v = vars(f, true, false);
    let (num, used) = parse_prefix(text, offset, f.p(), v, b"/")?;
    let num = to_tpoly(&collect(&num, f)?, 0);
    let den = if used < text.len() {
        tpoly_at(&text[used + 1..], offset + used + 1, f)?
    } else {
        TPoly::one()
    };
    if den.is_zero() {
        return Err(Error::Semantic("zero denominator".into()));
    }
    RatFn::new(num, den, f)
}

pub fn parse_ratfn(text: &str, f: &Field) -> Result<RatFn> {
    ratfn_at(text, 0, f)
}

/// Finite Laurent polynomial in `T` with exponents of either sign.
fn literal_at(text: &str, offset: usize, f: &Field) -> Result<(i64, Vec<Elem>)> {
    let v = Vars { neg_t: true, ..vars(f, true, false) };
    let m = collect(&parse_all(text, offset, f.p(), v)?, f)?;
    let Some(lo) = m.keys().map(|k| -k.0).min() else {
        return Ok((0, Vec::new()));
    };
    let hi = m.keys().map(|k| -k.0).max().unwrap();
    Ok((lo, (lo..=hi).map(|k| m.get(&(-k, 0)).copied().unwrap_or(0)).collect()))
}

pub fn parse_literal(text: &str, f: &Field) -> Result<LaurentSeries> {
    let (start, coeffs) = literal_at(text, 0, f)?;
    Ok(LaurentSeries::exact(f, start, coeffs))
}

/// A named or parameterized series.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeriesSpec {
    Rational(RatFn),
    Algebraic { minpoly: XPoly, branch: Branch },
    Mahler,
    Factorial,
    /// `Σ c_i T^{-(start+i)}`, exact.
    Literal { start: i64, coeffs: Vec<Elem> },
    Random { seed: u64 },
}

fn branch_at(text: &str, offset: usize, f: &Field) -> Result<Branch> {
    let mut val = None;
    let mut lead = None;
    let mut off = offset;
    for part in text.split(',') {
        let Some((k, v)) = part.split_once(':') else {
            return Err(Error::Parse { pos: off, msg: "expected val:<int> or lead:<elem>".into() });
        };
        let voff = off + k.len() + 1;
        match k {
            "val" => {
                let (neg, digits) = v.strip_prefix('-').map_or((false, v), |d| (true, d));
                let n: i64 = digits
                    .parse()
                    .map_err(|_| Error::Parse { pos: voff, msg: "expected an integer".into() })?;
                val = Some(if neg { -n } else { n });
            }
            "lead" => lead = Some(elem_at(v, voff, f)?),
            _ => return Err(Error::Parse { pos: off, msg: format!("unknown branch key '{k}'") }),
        }
        off += part.len() + 1;
    }
    let val = val.ok_or(Error::Parse { pos: offset, msg: "missing val".into() })?;
    if lead == Some(0) {
        return Err(Error::Semantic("branch lead must be nonzero".into()));
    }
    Ok(Branch { val, lead })
}

impl SeriesSpec {
    pub fn parse(text: &str, f: &Field) -> Result<Self> {
        let (kind, rest, off) = match text.split_once(':') {
            Some((k, r)) => (k, Some(r), k.len() + 1),
            None => (text, None, text.len()),
        };
        let missing = || Error::Parse { pos: off, msg: format!("'{kind}' needs ':' and parameters") };
        match kind {
            "mahler" | "factorial" if rest.is_some() => {
                Err(Error::Parse { pos: off - 1, msg: format!("'{kind}' takes no parameters") })
            }
            "mahler" => Ok(SeriesSpec::Mahler),
            "factorial" => Ok(SeriesSpec::Factorial),
            "rational" => Ok(SeriesSpec::Rational(ratfn_at(rest.ok_or_else(missing)?, off, f)?)),
            "literal" => {
                let (start, coeffs) = literal_at(rest.ok_or_else(missing)?, off, f)?;
                Ok(SeriesSpec::Literal { start, coeffs })
            }
            "random" => {
                let r = rest.ok_or_else(missing)?;
                let seed = r
                    .strip_prefix("seed=")
                    .ok_or(Error::Parse { pos: off, msg: "expected seed=<int>".into() })?
                    .parse()
                    .map_err(|_| Error::Parse { pos: off + 5, msg: "expected an unsigned integer".into() })?;
                Ok(SeriesSpec::Random { seed })
            }
            "algebraic" => {
                let r = rest.ok_or_else(missing)?;
                let Some(body) = r.strip_prefix("poly=") else {
                    return Err(Error::Parse { pos: off, msg: "expected poly=".into() });
                };
                let Some((poly, branch)) = body.split_once(";branch=") else {
                    return Err(Error::Parse { pos: off + r.len(), msg: "expected ;branch=".into() });
                };
                let minpoly = xpoly_at(poly, off + 5, f)?;
                let branch = branch_at(branch, off + 5 + poly.len() + 8, f)?;
                if !minpoly.is_nonconstant() {
                    return Err(Error::Semantic("minimal polynomial must have positive degree in X".into()));
                }
                if !is_irreducible(&minpoly, f)? {
                    return Err(Error::Semantic("minimal polynomial is reducible".into()));
                }
                Ok(SeriesSpec::Algebraic { minpoly, branch })
            }
            _ => Err(Error::Parse { pos: 0, msg: format!("unknown series kind '{kind}'") }),
        }
    }

    /// Canonical text form; parsing it gives back `self`.
    pub fn format(&self, f: &Field) -> String {
        match self {
            SeriesSpec::Rational(r) => format!("rational:({})/({})", r.num().format(f), r.den().format(f)),
            SeriesSpec::Algebraic { minpoly, branch } => {
                let lead = branch.lead.map_or(String::new(), |l| format!(",lead:{}", f.format(l)));
                format!("algebraic:poly={};branch=val:{}{lead}", minpoly.format(f), branch.val)
            }
            SeriesSpec::Mahler => "mahler".into(),
            SeriesSpec::Factorial => "factorial".into(),
            SeriesSpec::Literal { start, coeffs } => {
                format!("literal:{}", LaurentSeries::exact(f, *start, coeffs.clone()).format())
            }
            SeriesSpec::Random { seed } => format!("random:seed={seed}"),
        }
    }

    /// The series, generator-backed where the kind allows.
    pub fn build(&self, f: &Field, prec: i64) -> Result<LaurentSeries> {
        Ok(match self {
            SeriesSpec::Rational(r) => LaurentSeries::from_rational(f, r, prec),
            SeriesSpec::Algebraic { minpoly, branch } => {
                fqdio::roots::algebraic_series(minpoly, *branch, f, prec)?.series
            }
            SeriesSpec::Mahler => fqdio::corpus::mahler(f),
            SeriesSpec::Factorial => fqdio::corpus::factorial(f),
            SeriesSpec::Literal { start, coeffs } => LaurentSeries::exact(f, *start, coeffs.clone()),
            SeriesSpec::Random { seed } => fqdio::random::series(f, *seed, prec),
        })
    }
}
