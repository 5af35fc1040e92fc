//! Gaussian integers `Z[i]` with arbitrary-precision components.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{factor_u64, sqrt_minus_one_mod};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct GaussInt {
    pub re: BigInt,
    pub im: BigInt,
}

impl GaussInt {
    pub fn new(re: impl Into<BigInt>, im: impl Into<BigInt>) -> Self {
        GaussInt { re: re.into(), im: im.into() }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        GaussInt { re: n.into(), im: BigInt::zero() }
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn i() -> Self {
        Self::new(0, 1)
    }

    pub fn units() -> [GaussInt; 4] {
        [Self::new(1, 0), Self::new(0, 1), Self::new(-1, 0), Self::new(0, -1)]
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_unit(&self) -> bool {
        self.norm().is_one()
    }

    pub fn is_rational(&self) -> bool {
        self.im.is_zero()
    }

    pub fn norm(&self) -> BigInt {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn conj(&self) -> Self {
        GaussInt { re: self.re.clone(), im: -&self.im }
    }

    /// `max(|re|, |im|)`
    pub fn height(&self) -> BigInt {
        self.re.abs().max(self.im.abs())
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        GaussInt { re: &self.re * k, im: &self.im * k }
    }

    /// Exact quotient, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &GaussInt) -> Option<GaussInt> {
        if d.is_zero() {
            return None;
        }
        let n = d.norm();
        let t = self * &d.conj();
        if t.re.is_multiple_of(&n) && t.im.is_multiple_of(&n) {
            Some(GaussInt { re: t.re / &n, im: t.im / n })
        } else {
            None
        }
    }

    /// Euclidean division with the quotient rounded to the nearest lattice
    /// point, so that `norm(r) <= norm(d) / 2`.
    pub fn div_rem(&self, d: &GaussInt) -> (GaussInt, GaussInt) {
        assert!(!d.is_zero(), "division by zero");
        let n = d.norm();
        let t = self * &d.conj();
        let round = |x: &BigInt| -> BigInt {
            // floor((2x + n) / 2n)
            let two_n: BigInt = &n * 2;
            let twice: BigInt = x * 2 + &n;
            twice.div_floor(&two_n)
        };
        let q = GaussInt { re: round(&t.re), im: round(&t.im) };
        let r = self - &(&q * d);
        (q, r)
    }

    pub fn gcd(a: &GaussInt, b: &GaussInt) -> GaussInt {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a
    }

    /// `(unit, canonical)` with `unit * canonical = self` and the canonical
    /// associate in the quadrant `re > 0, im >= 0`.
    pub fn canonical_associate(&self) -> Result<(GaussInt, GaussInt)> {
        if self.is_zero() {
            return Err(Error::ZeroInput);
        }
        for u in Self::units() {
            // self = u * c  <=>  c = self * u^{-1} = self * conj(u)
            let c = self * &u.conj();
            if c.re.is_positive() && !c.im.is_negative() {
                return Ok((u, c));
            }
        }
        unreachable!("exactly one associate lies in the first quadrant")
    }

    pub fn is_canonical(&self) -> bool {
        self.re.is_positive() && !self.im.is_negative()
    }

    pub fn pow(&self, e: u32) -> GaussInt {
        let mut acc = GaussInt::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Canonical ordering of primes and places: by norm, then `re`, then `im`.
    pub fn canonical_cmp(&self, other: &GaussInt) -> Ordering {
        (self.norm(), &self.re, &self.im).cmp(&(other.norm(), &other.re, &other.im))
    }

    /// Factorization into canonical primes, splitting each rational prime
    /// of the norm.
    pub fn factor(&self) -> Result<(GaussInt, Vec<(GaussInt, u32)>)> {
        if self.is_zero() {
            return Err(Error::ZeroInput);
        }
        let n = self.norm().to_u64().ok_or_else(|| Error::TooLarge(format!("norm of {self}")))?;
        let mut rest = self.clone();
        let mut primes: Vec<(GaussInt, u32)> = Vec::new();
        for (p, e) in factor_u64(n) {
            if p == 2 {
                primes.push((GaussInt::new(1, 1), e));
            } else if p % 4 == 3 {
                primes.push((GaussInt::from_int(p), e / 2));
            } else {
                let r = sqrt_minus_one_mod(p).expect("p = 1 mod 4");
                let g = GaussInt::gcd(&GaussInt::from_int(p), &GaussInt::new(r, 1));
                let (_, pi) = g.canonical_associate()?;
                let (_, pi_bar) = pi.conj().canonical_associate()?;
                let mut k = 0;
                let mut t = rest.clone();
                while let Some(q) = t.div_exact(&pi) {
                    t = q;
                    k += 1;
                    if k == e {
                        break;
                    }
                }
                if k > 0 {
                    primes.push((pi, k));
                }
                if e > k {
                    primes.push((pi_bar, e - k));
                }
            }
        }
        for (pi, e) in &primes {
            rest = rest.div_exact(&pi.pow(*e)).expect("prime power divides");
        }
        debug_assert!(rest.is_unit());
        primes.sort_by(|a, b| a.0.canonical_cmp(&b.0));
        Ok((rest, primes))
    }

    /// A square root in `Z[i]`, if `self` is a square there.
    pub fn sqrt(&self) -> Option<GaussInt> {
        let s = self.norm().sqrt();
        if &s * &s != self.norm() {
            return None;
        }
        // x^2 = (re + |z|) / 2, y^2 = (|z| - re) / 2, 2xy = im
        let x2: BigInt = (&s + &self.re) / 2;
        let y2: BigInt = (&s - &self.re) / 2;
        let (x, y) = (x2.sqrt(), y2.sqrt());
        let y = if self.im.is_negative() { -y } else { y };
        let r = GaussInt { re: x, im: y };
        (&r * &r == *self).then_some(r)
    }

    pub fn is_prime(&self) -> bool {
        match self.factor() {
            Ok((_, f)) => f.len() == 1 && f[0].1 == 1,
            Err(_) => false,
        }
    }

    /// Number of times `pi` divides `self`; `self` must be nonzero.
    pub fn valuation(&self, pi: &GaussInt) -> u32 {
        assert!(!self.is_zero());
        let mut k = 0;
        let mut t = self.clone();
        while let Some(q) = t.div_exact(pi) {
            t = q;
            k += 1;
        }
        k
    }
}

impl fmt::Display for GaussInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let im_part = |f: &mut fmt::Formatter<'_>, lead: bool| -> fmt::Result {
            let one = BigInt::one();
            let abs = self.im.abs();
            let sign = if self.im.is_negative() {
                "-"
            } else if lead {
                ""
            } else {
                "+"
            };
            if abs == one {
                write!(f, "{sign}i")
            } else {
                write!(f, "{sign}{abs}i")
            }
        };
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => im_part(f, true),
            (false, false) => {
                write!(f, "{}", self.re)?;
                im_part(f, false)
            }
        }
    }
}

impl Add<&GaussInt> for &GaussInt {
    type Output = GaussInt;
    fn add(self, o: &GaussInt) -> GaussInt {
        GaussInt { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}

impl Sub<&GaussInt> for &GaussInt {
    type Output = GaussInt;
    fn sub(self, o: &GaussInt) -> GaussInt {
        GaussInt { re: &self.re - &o.re, im: &self.im - &o.im }
    }
}

impl Mul<&GaussInt> for &GaussInt {
    type Output = GaussInt;
    fn mul(self, o: &GaussInt) -> GaussInt {
        GaussInt { re: &self.re * &o.re - &self.im * &o.im, im: &self.re * &o.im + &self.im * &o.re }
    }
}

impl Neg for &GaussInt {
    type Output = GaussInt;
    fn neg(self) -> GaussInt {
        GaussInt { re: -&self.re, im: -&self.im }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(re: i64, im: i64) -> GaussInt {
        GaussInt::new(re, im)
    }

    fn multiply_back(unit: &GaussInt, f: &[(GaussInt, u32)]) -> GaussInt {
        f.iter().fold(unit.clone(), |acc, (p, e)| &acc * &p.pow(*e))
    }

    #[test]
    fn canonical_associates() {
        assert_eq!(g(-5, 0).canonical_associate().unwrap(), (g(-1, 0), g(5, 0)));
        assert_eq!(g(0, 2).canonical_associate().unwrap(), (g(0, 1), g(2, 0)));
        assert_eq!(g(-1, -1).canonical_associate().unwrap(), (g(-1, 0), g(1, 1)));
        assert_eq!(g(0, 0).canonical_associate(), Err(Error::ZeroInput));
    }

    #[test]
    fn factor_examples() {
        let (u, f) = g(5, 0).factor().unwrap();
        assert_eq!(f, vec![(g(1, 2), 1), (g(2, 1), 1)]);
        assert_eq!(multiply_back(&u, &f), g(5, 0));

        let (u, f) = g(2, 0).factor().unwrap();
        assert_eq!((u.clone(), f.clone()), (g(0, -1), vec![(g(1, 1), 2)]));
        assert_eq!(multiply_back(&u, &f), g(2, 0));

        let (u, f) = g(6, 0).factor().unwrap();
        assert_eq!((u, f), (g(0, -1), vec![(g(1, 1), 2), (g(3, 0), 1)]));
        assert_eq!(g(0, 0).factor(), Err(Error::ZeroInput));
    }

    #[test]
    fn euclidean_remainder_is_small() {
        for (a, b) in [(g(17, -4), g(3, 2)), (g(-100, 7), g(-5, 9)), (g(1, 0), g(1, 1))] {
            let (q, r) = a.div_rem(&b);
            assert_eq!(&(&q * &b) + &r, a);
            assert!(r.norm() * 2 <= b.norm());
        }
    }

    #[test]
    fn square_roots() {
        for (re, im) in [(0, 0), (3, -4), (-7, 24), (0, 2), (-1, 0), (9, 0)] {
            let z = g(re, im);
            let r = z.sqrt().unwrap_or_else(|| panic!("{z}"));
            assert_eq!(&r * &r, z);
        }
        for (re, im) in [(2, 0), (0, 1), (3, 0), (1, 1), (-6, 8)] {
            assert_eq!(g(re, im).sqrt(), None, "{re}+{im}i");
        }
    }

    #[test]
    fn display() {
        assert_eq!(g(-6, 8).to_string(), "-6+8i");
        assert_eq!(g(2, -1).to_string(), "2-i");
        assert_eq!(g(0, -1).to_string(), "-i");
        assert_eq!(g(0, 2).to_string(), "2i");
        assert_eq!(g(0, 0).to_string(), "0");
        assert_eq!(g(1, 1).to_string(), "1+i");
    }
}
