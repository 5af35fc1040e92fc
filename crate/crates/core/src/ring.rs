//! The two Euclidean rings behind the global fields: `Z[i]` and `F_q[t]`.
//!
//! Mixing elements of different rings is a programming error and panics;
//! public entry points check field compatibility before getting here.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::Result;
use crate::gauss::GaussInt;
use crate::poly::FqPoly;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum RingElem {
    Gauss(GaussInt),
    Poly(FqPoly),
}

/// `unit * prod(prime^exp)`, primes canonical, strictly increasing.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Factorization {
    pub unit: RingElem,
    pub primes: Vec<(RingElem, u32)>,
}

impl Factorization {
    pub fn multiply_back(&self) -> RingElem {
        self.primes.iter().fold(self.unit.clone(), |acc, (p, e)| &acc * &p.pow(*e))
    }
}

macro_rules! both {
    ($a:expr, $b:expr, |$x:ident, $y:ident| $g:expr, $p:expr) => {
        match ($a, $b) {
            (RingElem::Gauss($x), RingElem::Gauss($y)) => RingElem::Gauss($g),
            (RingElem::Poly($x), RingElem::Poly($y)) => RingElem::Poly($p),
            _ => panic!("ring mismatch"),
        }
    };
}

impl RingElem {
    pub fn zero_like(&self) -> Self {
        match self {
            RingElem::Gauss(_) => RingElem::Gauss(GaussInt::zero()),
            RingElem::Poly(p) => RingElem::Poly(FqPoly::zero(p.field())),
        }
    }

    pub fn one_like(&self) -> Self {
        match self {
            RingElem::Gauss(_) => RingElem::Gauss(GaussInt::one()),
            RingElem::Poly(p) => RingElem::Poly(FqPoly::one(p.field())),
        }
    }

    /// The image of a rational integer.
    pub fn int_like(&self, n: i64) -> Self {
        match self {
            RingElem::Gauss(_) => RingElem::Gauss(GaussInt::from_int(n)),
            RingElem::Poly(p) => RingElem::Poly(FqPoly::constant(p.field(), p.field().from_i64(n))),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            RingElem::Gauss(g) => g.is_zero(),
            RingElem::Poly(p) => p.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        *self == self.one_like()
    }

    pub fn is_unit(&self) -> bool {
        match self {
            RingElem::Gauss(g) => g.is_unit(),
            RingElem::Poly(p) => p.is_unit(),
        }
    }

    pub fn unit_inverse(&self) -> Option<Self> {
        match self {
            RingElem::Gauss(g) if g.is_unit() => Some(RingElem::Gauss(g.conj())),
            RingElem::Poly(p) if p.is_unit() => {
                let inv = p.field().inv(p.leading())?;
                Some(RingElem::Poly(FqPoly::constant(p.field(), inv)))
            }
            _ => None,
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(self.one_like(), |acc, _| &acc * self)
    }

    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        match (self, d) {
            (RingElem::Gauss(a), RingElem::Gauss(b)) => {
                let (q, r) = a.div_rem(b);
                (RingElem::Gauss(q), RingElem::Gauss(r))
            }
            (RingElem::Poly(a), RingElem::Poly(b)) => {
                let (q, r) = a.div_rem(b);
                (RingElem::Poly(q), RingElem::Poly(r))
            }
            _ => panic!("ring mismatch"),
        }
    }

    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        match (self, d) {
            (RingElem::Gauss(a), RingElem::Gauss(b)) => a.div_exact(b).map(RingElem::Gauss),
            (RingElem::Poly(a), RingElem::Poly(b)) => a.div_exact(b).map(RingElem::Poly),
            _ => panic!("ring mismatch"),
        }
    }

    pub fn divides(&self, x: &Self) -> bool {
        x.div_exact(self).is_some()
    }

    pub fn gcd(&self, o: &Self) -> Self {
        both!(self, o, |a, b| GaussInt::gcd(a, b), FqPoly::gcd(a, b))
    }

    /// `(s, g)` with `s * self ≡ g (mod m)` and `g = gcd(self, m)`.
    pub fn ext_gcd(&self, m: &Self) -> (Self, Self) {
        let (mut r0, mut r1) = (self.clone(), m.clone());
        let (mut s0, mut s1) = (self.one_like(), self.zero_like());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s = &s0 - &(&q * &s1);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        (s0, r0)
    }

    /// Inverse modulo `m` when `self` is coprime to `m`.
    pub fn inverse_mod(&self, m: &Self) -> Option<Self> {
        let (s, g) = self.ext_gcd(m);
        let ginv = g.unit_inverse()?;
        Some((&s * &ginv).div_rem(m).1)
    }

    pub fn canonical_associate(&self) -> Result<(Self, Self)> {
        match self {
            RingElem::Gauss(g) => {
                let (u, c) = g.canonical_associate()?;
                Ok((RingElem::Gauss(u), RingElem::Gauss(c)))
            }
            RingElem::Poly(p) => {
                let (lc, c) = p.canonical_associate()?;
                Ok((RingElem::Poly(FqPoly::constant(p.field(), lc)), RingElem::Poly(c)))
            }
        }
    }

    pub fn is_canonical(&self) -> bool {
        match self {
            RingElem::Gauss(g) => g.is_canonical(),
            RingElem::Poly(p) => p.is_monic(),
        }
    }

    pub fn factor(&self) -> Result<Factorization> {
        Ok(match self {
            RingElem::Gauss(g) => {
                let (u, f) = g.factor()?;
                Factorization {
                    unit: RingElem::Gauss(u),
                    primes: f.into_iter().map(|(p, e)| (RingElem::Gauss(p), e)).collect(),
                }
            }
            RingElem::Poly(p) => {
                let (lc, f) = p.factor()?;
                Factorization {
                    unit: RingElem::Poly(FqPoly::constant(p.field(), lc)),
                    primes: f.into_iter().map(|(p, e)| (RingElem::Poly(p), e)).collect(),
                }
            }
        })
    }

    pub fn sqrt(&self) -> Option<Self> {
        match self {
            RingElem::Gauss(g) => g.sqrt().map(RingElem::Gauss),
            RingElem::Poly(p) => p.sqrt().map(RingElem::Poly),
        }
    }

    pub fn is_prime(&self) -> bool {
        match self {
            RingElem::Gauss(g) => g.is_prime(),
            RingElem::Poly(p) => p.is_irreducible(),
        }
    }

    pub fn valuation(&self, pi: &Self) -> u32 {
        match (self, pi) {
            (RingElem::Gauss(a), RingElem::Gauss(b)) => a.valuation(b),
            (RingElem::Poly(a), RingElem::Poly(b)) => a.valuation(b),
            _ => panic!("ring mismatch"),
        }
    }

    pub fn canonical_cmp(&self, o: &Self) -> Ordering {
        match (self, o) {
            (RingElem::Gauss(a), RingElem::Gauss(b)) => a.canonical_cmp(b),
            (RingElem::Poly(a), RingElem::Poly(b)) => a.canonical_cmp(b),
            _ => panic!("ring mismatch"),
        }
    }

    pub fn as_gauss(&self) -> Option<&GaussInt> {
        match self {
            RingElem::Gauss(g) => Some(g),
            RingElem::Poly(_) => None,
        }
    }

    pub fn as_poly(&self) -> Option<&FqPoly> {
        match self {
            RingElem::Poly(p) => Some(p),
            RingElem::Gauss(_) => None,
        }
    }
}

impl Add<&RingElem> for &RingElem {
    type Output = RingElem;
    fn add(self, o: &RingElem) -> RingElem {
        both!(self, o, |a, b| a + b, a.add(b))
    }
}

impl Sub<&RingElem> for &RingElem {
    type Output = RingElem;
    fn sub(self, o: &RingElem) -> RingElem {
        both!(self, o, |a, b| a - b, a.sub(b))
    }
}

impl Mul<&RingElem> for &RingElem {
    type Output = RingElem;
    fn mul(self, o: &RingElem) -> RingElem {
        both!(self, o, |a, b| a * b, a.mul(b))
    }
}

impl Neg for &RingElem {
    type Output = RingElem;
    fn neg(self) -> RingElem {
        match self {
            RingElem::Gauss(g) => RingElem::Gauss(-g),
            RingElem::Poly(p) => RingElem::Poly(p.neg()),
        }
    }
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingElem::Gauss(g) => write!(f, "{g}"),
            RingElem::Poly(p) => write!(f, "{p}"),
        }
    }
}
