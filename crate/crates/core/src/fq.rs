//! Finite fields `F_q`, `q = p^k`.
//!
//! Prime fields are computed directly modulo `p` and may be as large as a
//! `u64`. Proper extensions (`k > 1`) are tabulated through a primitive
//! element and are limited to `q < 2^16`. An element of an extension is
//! encoded as the integer `c_0 + c_1 p + ... + c_{k-1} p^{k-1}` of its
//! coordinates in the power basis of the defining polynomial.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::{is_prime_u64, mulmod, powmod, prime_power};
use crate::error::{Error, Result};

const MAX_EXTENSION_ORDER: u64 = 1 << 16;

#[derive(Clone)]
struct Tables {
    // exp[i] = g^i for i in 0..q-1, log[exp[i]] = i; log[0] unused.
    exp: Vec<u32>,
    log: Vec<u32>,
}

#[derive(Clone)]
pub struct Fq {
    p: u64,
    k: u32,
    q: u64,
    tables: Option<Tables>,
    sqrt_minus_one: Option<u64>,
}

impl PartialEq for Fq {
    fn eq(&self, other: &Self) -> bool {
        self.q == other.q
    }
}

impl Eq for Fq {}

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.q)
    }
}

impl Fq {
    pub fn new(q: u64) -> Result<Self> {
        let (p, k) = prime_power(q).ok_or(Error::InvalidField(format!("{q} is not a prime power")))?;
        debug_assert!(is_prime_u64(p));
        let tables = if k > 1 {
            if q >= MAX_EXTENSION_ORDER {
                return Err(Error::InvalidField(format!("extension field of order {q} is too large")));
            }
            Some(build_tables(p, k))
        } else {
            None
        };
        let mut field = Fq { p, k, q, tables, sqrt_minus_one: None };
        let minus_one = field.neg(1);
        field.sqrt_minus_one = field.sqrt(minus_one);
        Ok(field)
    }

    pub fn order(&self) -> u64 {
        self.q
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn sqrt_minus_one(&self) -> Option<u64> {
        self.sqrt_minus_one
    }

    /// Image of a rational integer in the prime subfield.
    pub fn from_i64(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }

    pub fn from_bigint(&self, n: &num_bigint::BigInt) -> u64 {
        let p = num_bigint::BigInt::from(self.p);
        let r = ((n % &p) + &p) % &p;
        r.to_u64().expect("residue fits in u64")
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        if self.k == 1 {
            let s = a as u128 + b as u128;
            return (s % self.p as u128) as u64;
        }
        self.digitwise(a, b, |x, y| (x + y) % self.p)
    }

    pub fn neg(&self, a: u64) -> u64 {
        if self.k == 1 {
            return if a == 0 { 0 } else { self.p - a };
        }
        self.digitwise(a, 0, |x, _| (self.p - x) % self.p)
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        match &self.tables {
            None => mulmod(a, b, self.p),
            Some(t) => {
                if a == 0 || b == 0 {
                    return 0;
                }
                let e = (t.log[a as usize] as u64 + t.log[b as usize] as u64) % (self.q - 1);
                t.exp[e as usize] as u64
            }
        }
    }

    pub fn inv(&self, a: u64) -> Option<u64> {
        if a == 0 {
            return None;
        }
        match &self.tables {
            None => Some(powmod(a, (self.p - 2) as u128, self.p)),
            Some(t) => {
                let e = (self.q - 1 - t.log[a as usize] as u64) % (self.q - 1);
                Some(t.exp[e as usize] as u64)
            }
        }
    }

    pub fn pow(&self, a: u64, e: &BigUint) -> u64 {
        if e.is_zero() {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let reduced = (e % (self.q - 1)).to_u64().unwrap_or(0);
        match &self.tables {
            None => powmod(a, reduced as u128, self.p),
            Some(t) => {
                let l = (t.log[a as usize] as u128 * reduced as u128) % (self.q as u128 - 1);
                t.exp[l as usize] as u64
            }
        }
    }

    pub fn is_square(&self, a: u64) -> bool {
        if a == 0 || self.p == 2 {
            return true;
        }
        self.pow(a, &BigUint::from((self.q - 1) / 2)) == 1
    }

    /// The square root with the smaller encoding, if one exists.
    pub fn sqrt(&self, a: u64) -> Option<u64> {
        if a == 0 {
            return Some(0);
        }
        if !self.is_square(a) {
            return None;
        }
        let root = match &self.tables {
            Some(t) => {
                let l = t.log[a as usize] as u64;
                if l.is_multiple_of(2) {
                    t.exp[(l / 2) as usize] as u64
                } else {
                    // odd log in a field of even q - 1 only happens for p = 2
                    t.exp[((l + self.q - 1) / 2) as usize] as u64
                }
            }
            None if self.p == 2 => a,
            None => tonelli_shanks(a, self.p),
        };
        Some(root.min(self.neg(root)))
    }

    /// All elements in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = u64> {
        0..self.q
    }

    fn digitwise(&self, a: u64, b: u64, op: impl Fn(u64, u64) -> u64) -> u64 {
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut scale = 1;
        for _ in 0..self.k {
            out += op(a % self.p, b % self.p) * scale;
            a /= self.p;
            b /= self.p;
            scale *= self.p;
        }
        out
    }
}

fn tonelli_shanks(a: u64, p: u64) -> u64 {
    let mut q = p - 1;
    let mut s = 0;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    let z = (2..p).find(|&z| powmod(z, ((p - 1) / 2) as u128, p) == p - 1).expect("nonresidue exists");
    let mut m = s;
    let mut c = powmod(z, q as u128, p);
    let mut t = powmod(a, q as u128, p);
    let mut r = powmod(a, q.div_ceil(2) as u128, p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mulmod(t2, t2, p);
            i += 1;
        }
        let b = powmod(c, 1u128 << (m - i - 1), p);
        m = i;
        c = mulmod(b, b, p);
        t = mulmod(t, c, p);
        r = mulmod(r, b, p);
    }
    r
}

// Finds a primitive monic polynomial of degree k over F_p and tabulates the
// powers of its root.
fn build_tables(p: u64, k: u32) -> Tables {
    let q = p.pow(k);
    let order = (q - 1) as usize;
    let encode = |v: &[u64]| v.iter().rev().fold(0u64, |acc, &c| acc * p + c);
    'candidate: for tail in 0..q {
        // x^k + c_{k-1} x^{k-1} + ... + c_0, coefficients read from `tail`
        let mut low = Vec::with_capacity(k as usize);
        let mut t = tail;
        for _ in 0..k {
            low.push(t % p);
            t /= p;
        }
        if low[0] == 0 {
            continue;
        }
        let mut exp = Vec::with_capacity(order);
        let mut log = vec![u32::MAX; q as usize];
        let mut cur = vec![0u64; k as usize];
        cur[0] = 1;
        for i in 0..order {
            let code = encode(&cur);
            if log[code as usize] != u32::MAX {
                continue 'candidate;
            }
            log[code as usize] = i as u32;
            exp.push(code as u32);
            // multiply by x and reduce with x^k = -(c_{k-1} x^{k-1} + ... + c_0)
            let top = cur[k as usize - 1];
            for j in (1..k as usize).rev() {
                cur[j] = (cur[j - 1] + p - mulmod(top, low[j], p)) % p;
            }
            cur[0] = (p - mulmod(top, low[0], p)) % p;
        }
        if encode(&cur) == 1 {
            return Tables { exp, log };
        }
    }
    unreachable!("a primitive polynomial of every degree exists")
}

/// Exponent `(n - 1) / 2` for `n = q^deg`, as a big integer.
pub(crate) fn half_order_minus_one(q: u64, deg: u32) -> BigUint {
    (BigUint::from(q).pow(deg) - BigUint::one()) / 2u32
}
