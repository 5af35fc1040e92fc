//! The global fields `Q(i)` and `F_q(t)` and their elements.
//!
//! Text grammar:
//! * Gaussian: `[-]INT[(+|-)[INT]i]` or `[-][INT]i`, optionally followed by
//!   `/INT`; no whitespace. Examples: `-6+8i`, `5/2`, `2i`, `1-i`.
//! * Function field: a polynomial in `t` with integer-coded coefficients,
//!   optionally `/` a second polynomial, then `@q`. Either side may be
//!   wrapped in parentheses. Examples: `2t^2+3t+4@5`, `(t+1)/t^2@5`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::fq::Fq;
use crate::gauss::GaussInt;
use crate::poly::FqPoly;
use crate::ring::RingElem;

/// Which global field the elements live in.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Field {
    Gaussian,
    /// `F_q(t)` with `q ≡ 1 (mod 4)`.
    FunctionField(Arc<Fq>),
}

impl Field {
    pub fn function_field(q: u64) -> Result<Field> {
        let fq = Fq::new(q)?;
        if q % 4 != 1 {
            return Err(Error::InvalidField(format!("q = {q} must be 1 mod 4 so that -1 is a square")));
        }
        debug_assert!(fq.sqrt_minus_one().is_some());
        Ok(Field::FunctionField(Arc::new(fq)))
    }

    pub fn fq(&self) -> Option<&Arc<Fq>> {
        match self {
            Field::Gaussian => None,
            Field::FunctionField(f) => Some(f),
        }
    }

    pub fn is_gaussian(&self) -> bool {
        matches!(self, Field::Gaussian)
    }

    pub fn ring_zero(&self) -> RingElem {
        match self {
            Field::Gaussian => RingElem::Gauss(GaussInt::zero()),
            Field::FunctionField(f) => RingElem::Poly(FqPoly::zero(f)),
        }
    }

    pub fn ring_one(&self) -> RingElem {
        self.ring_zero().one_like()
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem::from_ring(self.ring_zero())
    }

    pub fn one(&self) -> FieldElem {
        FieldElem::from_ring(self.ring_one())
    }

    pub fn from_int(&self, n: i64) -> FieldElem {
        FieldElem::from_ring(self.ring_zero().int_like(n))
    }

    /// A square root of `-1` in the global field.
    pub fn sqrt_minus_one(&self) -> FieldElem {
        match self {
            Field::Gaussian => FieldElem::from_ring(RingElem::Gauss(GaussInt::i())),
            Field::FunctionField(f) => {
                let r = f.sqrt_minus_one().expect("q = 1 mod 4");
                FieldElem::from_ring(RingElem::Poly(FqPoly::constant(f, r)))
            }
        }
    }

    /// Parses an element; a function-field element may omit its `@q`
    /// suffix here, but if present it must match.
    pub fn parse_elem(&self, s: &str) -> Result<FieldElem> {
        match self {
            Field::Gaussian => {
                if s.contains('@') {
                    return Err(Error::FieldMismatch);
                }
                parse_gaussian(s)
            }
            Field::FunctionField(f) => {
                let body = match s.rsplit_once('@') {
                    Some((body, q)) => {
                        let q: u64 = q.parse().map_err(|_| Error::Parse(format!("bad field suffix in '{s}'")))?;
                        if q != f.order() {
                            return Err(Error::FieldMismatch);
                        }
                        body
                    }
                    None => s,
                };
                parse_rational_function(body, f)
            }
        }
    }

    pub(crate) fn check(&self, x: &FieldElem) -> Result<()> {
        if x.field() == *self {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Gaussian => write!(f, "gaussian"),
            Field::FunctionField(fq) => write!(f, "fq:{}", fq.order()),
        }
    }
}

impl FromStr for Field {
    type Err = Error;
    fn from_str(s: &str) -> Result<Field> {
        if s == "gaussian" {
            return Ok(Field::Gaussian);
        }
        match s.strip_prefix("fq:").map(str::parse::<u64>) {
            Some(Ok(q)) => Field::function_field(q),
            _ => Err(Error::Parse(format!("unknown field '{s}' (expected gaussian or fq:<q>)"))),
        }
    }
}

/// A global field element in reduced form `num / den`.
///
/// Gaussian backend: `den` is a positive rational integer and
/// `gcd(re(num), im(num), den) = 1`. Function-field backend: `den` is monic
/// and coprime to `num`. Zero is `0 / 1`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FieldElem {
    num: RingElem,
    den: RingElem,
}

impl FieldElem {
    pub fn from_ring(x: RingElem) -> Self {
        let den = x.one_like();
        FieldElem { num: x, den }
    }

    pub fn from_gauss(x: GaussInt) -> Self {
        Self::from_ring(RingElem::Gauss(x))
    }

    pub fn from_poly(x: FqPoly) -> Self {
        Self::from_ring(RingElem::Poly(x))
    }

    /// `num / den` reduced to canonical form.
    pub fn new(num: RingElem, den: RingElem) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroInput);
        }
        if num.is_zero() {
            return Ok(Self::from_ring(num));
        }
        Ok(match (num, den) {
            (RingElem::Gauss(n), RingElem::Gauss(d)) => {
                let n = &n * &d.conj();
                let d = d.norm();
                let g = n.re.gcd(&n.im).gcd(&d);
                FieldElem {
                    num: RingElem::Gauss(GaussInt { re: &n.re / &g, im: &n.im / &g }),
                    den: RingElem::Gauss(GaussInt::from_int(d / g)),
                }
            }
            (RingElem::Poly(n), RingElem::Poly(d)) => {
                let g = FqPoly::gcd(&n, &d);
                let n = n.div_exact(&g).expect("gcd divides");
                let d = d.div_exact(&g).expect("gcd divides");
                let inv = n.field().inv(d.leading()).expect("nonzero");
                FieldElem { num: RingElem::Poly(n.scale(inv)), den: RingElem::Poly(d.scale(inv)) }
            }
            _ => return Err(Error::FieldMismatch),
        })
    }

    pub fn num(&self) -> &RingElem {
        &self.num
    }

    pub fn den(&self) -> &RingElem {
        &self.den
    }

    pub fn field(&self) -> Field {
        match &self.num {
            RingElem::Gauss(_) => Field::Gaussian,
            RingElem::Poly(p) => Field::FunctionField(p.field().clone()),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroInput);
        }
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self * &o.inv()?)
    }

    pub fn square(&self) -> Self {
        self * self
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = FieldElem::from_ring(self.num.one_like());
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    /// Gaussian: `max(|re|, |im|)` over numerator and denominator.
    /// Function field: the larger of the two degrees.
    pub fn height(&self) -> BigInt {
        let h = |x: &RingElem| match x {
            RingElem::Gauss(g) => g.height(),
            RingElem::Poly(p) => BigInt::from(p.degree().unwrap_or(0)),
        };
        h(&self.num).max(h(&self.den))
    }

    /// `num * den`, which has the same square class as `self`.
    pub fn square_class_rep(&self) -> RingElem {
        &self.num * &self.den
    }

    /// A square root in the global field, if one exists.
    pub fn sqrt(&self) -> Option<Self> {
        let r = self.square_class_rep().sqrt()?;
        Self::new(r, self.den.clone()).ok()
    }

    /// True iff `self = y^2` for some `y` in the global field.
    pub fn is_global_square(&self) -> Result<bool> {
        if self.is_zero() {
            return Err(Error::ZeroInput);
        }
        let f = self.square_class_rep().factor()?;
        if f.primes.iter().any(|(_, e)| e % 2 == 1) {
            return Ok(false);
        }
        Ok(is_unit_square(&f.unit))
    }
}

/// Squares among units: `{±1}` in `Z[i]`, `F_q^{×2}` in `F_q[t]`.
pub(crate) fn is_unit_square(u: &RingElem) -> bool {
    match u {
        RingElem::Gauss(g) => g.is_rational(),
        RingElem::Poly(p) => p.field().is_square(p.leading()),
    }
}

impl Add<&FieldElem> for &FieldElem {
    type Output = FieldElem;
    fn add(self, o: &FieldElem) -> FieldElem {
        let num = &(&self.num * &o.den) + &(&o.num * &self.den);
        FieldElem::new(num, &self.den * &o.den).expect("nonzero denominators")
    }
}

impl Sub<&FieldElem> for &FieldElem {
    type Output = FieldElem;
    fn sub(self, o: &FieldElem) -> FieldElem {
        self + &(-o)
    }
}

impl Mul<&FieldElem> for &FieldElem {
    type Output = FieldElem;
    fn mul(self, o: &FieldElem) -> FieldElem {
        FieldElem::new(&self.num * &o.num, &self.den * &o.den).expect("nonzero denominators")
    }
}

impl Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        FieldElem { num: -&self.num, den: self.den.clone() }
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.num, &self.den) {
            (RingElem::Gauss(n), RingElem::Gauss(d)) => {
                write!(f, "{n}")?;
                if !d.re.is_one() {
                    write!(f, "/{}", d.re)?;
                }
                Ok(())
            }
            (RingElem::Poly(n), RingElem::Poly(d)) => {
                let wrap = |p: &FqPoly| {
                    if p.coeffs().iter().filter(|&&c| c != 0).count() > 1 {
                        format!("({p})")
                    } else {
                        p.to_string()
                    }
                };
                if d.is_one() {
                    write!(f, "{n}")?;
                } else {
                    write!(f, "{}/{}", wrap(n), wrap(d))?;
                }
                write!(f, "@{}", n.field().order())
            }
            _ => unreachable!("mixed representation"),
        }
    }
}

impl FromStr for FieldElem {
    type Err = Error;

    /// Infers the field from the presence of an `@q` suffix.
    fn from_str(s: &str) -> Result<FieldElem> {
        match s.rsplit_once('@') {
            Some((_, q)) => {
                let q: u64 = q.parse().map_err(|_| Error::Parse(format!("bad field suffix in '{s}'")))?;
                Field::function_field(q)?.parse_elem(s)
            }
            None => parse_gaussian(s),
        }
    }
}

fn parse_uint(s: &str, whole: &str) -> Result<BigInt> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse(format!("malformed element '{whole}'")));
    }
    Ok(s.parse().expect("digits"))
}

fn parse_gaussian(s: &str) -> Result<FieldElem> {
    let bad = || Error::Parse(format!("malformed element '{s}'"));
    let (num_s, den) = match s.split_once('/') {
        Some((n, d)) => {
            let d = parse_uint(d, s)?;
            if d.is_zero() {
                return Err(Error::ZeroInput);
            }
            (n, d)
        }
        None => (s, BigInt::one()),
    };
    let (neg, body) = match num_s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, num_s),
    };
    let signed = |v: BigInt, neg: bool| if neg { -v } else { v };
    let num = if let Some(im) = body.strip_suffix('i') {
        // either "[INT]i" or "INT(+|-)[INT]i"
        match im.rfind(['+', '-']) {
            Some(pos) => {
                let re = signed(parse_uint(&im[..pos], s)?, neg);
                let coef = &im[pos + 1..];
                let coef = if coef.is_empty() { BigInt::one() } else { parse_uint(coef, s)? };
                let im = if &im[pos..pos + 1] == "-" { -coef } else { coef };
                GaussInt { re, im }
            }
            None => {
                let coef = if im.is_empty() { BigInt::one() } else { parse_uint(im, s)? };
                GaussInt { re: BigInt::zero(), im: signed(coef, neg) }
            }
        }
    } else {
        if body.is_empty() {
            return Err(bad());
        }
        GaussInt::from_int(signed(parse_uint(body, s)?, neg))
    };
    FieldElem::new(RingElem::Gauss(num), RingElem::Gauss(GaussInt::from_int(den)))
}

fn strip_parens(s: &str) -> &str {
    s.strip_prefix('(').and_then(|r| r.strip_suffix(')')).unwrap_or(s)
}

fn parse_rational_function(s: &str, f: &Arc<Fq>) -> Result<FieldElem> {
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (parse_poly(strip_parens(n), f)?, parse_poly(strip_parens(d), f)?),
        None => (parse_poly(strip_parens(s), f)?, FqPoly::one(f)),
    };
    if d.is_zero() {
        return Err(Error::ZeroInput);
    }
    FieldElem::new(RingElem::Poly(n), RingElem::Poly(d))
}

fn parse_poly(s: &str, f: &Arc<Fq>) -> Result<FqPoly> {
    let bad = || Error::Parse(format!("malformed polynomial '{s}'"));
    if s.is_empty() {
        return Err(bad());
    }
    let mut acc = FqPoly::zero(f);
    let bytes = s.as_bytes();
    let mut start = 0;
    while start < s.len() {
        let mut end = start + 1;
        while end < s.len() && bytes[end] != b'+' && bytes[end] != b'-' {
            end += 1;
        }
        let term = &s[start..end];
        let (neg, term) = match term.as_bytes()[0] {
            b'-' => (true, &term[1..]),
            b'+' if start > 0 => (false, &term[1..]),
            _ => (false, term),
        };
        let (coef, deg) = match term.find('t') {
            Some(pos) => {
                let coef = if pos == 0 { BigInt::one() } else { parse_uint(&term[..pos], s)? };
                let deg = match &term[pos + 1..] {
                    "" => 1usize,
                    rest => {
                        let e = rest.strip_prefix('^').ok_or_else(bad)?;
                        parse_uint(e, s)?.try_into().map_err(|_| bad())?
                    }
                };
                (coef, deg)
            }
            None => (parse_uint(term, s)?, 0),
        };
        let c = if f.degree() == 1 {
            f.from_bigint(&coef)
        } else {
            let c: u64 = (&coef).try_into().map_err(|_| bad())?;
            if c >= f.order() {
                return Err(Error::Parse(format!("coefficient {c} out of range for F_{}", f.order())));
            }
            c
        };
        let c = if neg { f.neg(c) } else { c };
        acc = acc.add(&FqPoly::monomial(f, deg).scale(c));
        start = end;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> FieldElem {
        s.parse().unwrap()
    }

    #[test]
    fn gaussian_grammar_round_trips() {
        for s in ["-6+8i", "5/2", "2i", "-i", "i", "1-i", "0", "7", "3+2i/5", "-1-i"] {
            assert_eq!(q(s).to_string(), s, "{s}");
        }
        assert_eq!(q("4/2").to_string(), "2");
        assert_eq!(q("2+2i/4").to_string(), "1+i/2");
    }

    #[test]
    fn gaussian_grammar_rejects_garbage() {
        for s in ["6+i i", "", "+", "1+", "1/0", "2 ", "i2", "--1", "1/-2", "3++i"] {
            assert!(s.parse::<FieldElem>().is_err(), "{s}");
        }
    }

    #[test]
    fn polynomial_grammar() {
        assert_eq!(q("2t^2+3t+4@5").to_string(), "2t^2+3t+4@5");
        assert_eq!(q("t-1@5").to_string(), "t+4@5");
        assert_eq!(q("(t+1)/t^2@5").to_string(), "(t+1)/t^2@5");
        assert_eq!(q("2/2t@5").to_string(), "1/t@5");
        assert!("t^@5".parse::<FieldElem>().is_err());
        assert!("t@7".parse::<FieldElem>().is_err());
        assert!("9@9".parse::<FieldElem>().is_err());
    }

    #[test]
    fn denominators_are_canonical() {
        let x = FieldElem::new(RingElem::Gauss(GaussInt::one()), RingElem::Gauss(GaussInt::new(2, 1))).unwrap();
        assert_eq!(x.to_string(), "2-i/5");
        assert_eq!((&x * &q("2+i")).to_string(), "1");
    }

    #[test]
    fn global_squares() {
        assert!(q("-1").is_global_square().unwrap());
        assert!(!q("6").is_global_square().unwrap());
        assert!(q("2i").is_global_square().unwrap());
        assert!(q("9/4").is_global_square().unwrap());
        assert!(!q("i").is_global_square().unwrap());
        assert!(q("4@5").is_global_square().unwrap());
        assert!(!q("2@5").is_global_square().unwrap());
        assert!(!q("t@5").is_global_square().unwrap());
        assert_eq!(q("0").is_global_square(), Err(Error::ZeroInput));
        for s in ["-1", "2i", "9/4", "4@5", "-5+12i", "(t^2+2t+1)/4@5"] {
            let r = q(s).sqrt().unwrap();
            assert_eq!(r.square(), q(s), "{s}");
        }
        for s in ["6", "i", "2@5", "t@5"] {
            assert_eq!(q(s).sqrt(), None, "{s}");
        }
    }

    #[test]
    fn field_descriptors() {
        assert_eq!("gaussian".parse::<Field>().unwrap(), Field::Gaussian);
        assert_eq!("fq:5".parse::<Field>().unwrap().to_string(), "fq:5");
        assert!("fq:7".parse::<Field>().is_err());
        assert!("fq:6".parse::<Field>().is_err());
        assert!("fq:9".parse::<Field>().is_ok());
    }
}
