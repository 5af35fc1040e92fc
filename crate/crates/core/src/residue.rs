//! Residue fields `κ_v = F[T]/(m)` where `F` is a prime field or the
//! constant field `F_q`, and `m` is monic irreducible.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::One;

use crate::fq::Fq;
use crate::poly::FqPoly;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ResidueField {
    base: Arc<Fq>,
    modulus: FqPoly,
    // render `T` as `i` (inert Gaussian primes, where T is the image of i)
    imaginary: bool,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ResidueElem {
    value: FqPoly,
    imaginary: bool,
}

impl ResidueField {
    pub(crate) fn new(base: Arc<Fq>, modulus: FqPoly, imaginary: bool) -> Self {
        debug_assert!(modulus.is_monic());
        ResidueField { base, modulus, imaginary }
    }

    pub fn base(&self) -> &Arc<Fq> {
        &self.base
    }

    pub fn modulus(&self) -> &FqPoly {
        &self.modulus
    }

    pub fn extension_degree(&self) -> u32 {
        self.modulus.degree().expect("nonzero modulus") as u32
    }

    pub fn order(&self) -> BigUint {
        BigUint::from(self.base.order()).pow(self.extension_degree())
    }

    pub fn characteristic(&self) -> u64 {
        self.base.characteristic()
    }

    pub fn elem(&self, p: FqPoly) -> ResidueElem {
        ResidueElem { value: p.rem(&self.modulus), imaginary: self.imaginary }
    }

    pub fn zero(&self) -> ResidueElem {
        self.elem(FqPoly::zero(&self.base))
    }

    pub fn one(&self) -> ResidueElem {
        self.elem(FqPoly::one(&self.base))
    }

    pub fn add(&self, a: &ResidueElem, b: &ResidueElem) -> ResidueElem {
        self.elem(a.value.add(&b.value))
    }

    pub fn mul(&self, a: &ResidueElem, b: &ResidueElem) -> ResidueElem {
        self.elem(a.value.mul(&b.value))
    }

    pub fn neg(&self, a: &ResidueElem) -> ResidueElem {
        self.elem(a.value.neg())
    }

    pub fn pow(&self, a: &ResidueElem, e: &BigUint) -> ResidueElem {
        self.elem(a.value.pow_mod(e, &self.modulus))
    }

    pub fn inv(&self, a: &ResidueElem) -> Option<ResidueElem> {
        if a.is_zero() {
            return None;
        }
        let r = crate::ring::RingElem::Poly(a.value.clone());
        let m = crate::ring::RingElem::Poly(self.modulus.clone());
        let inv = r.inverse_mod(&m)?;
        Some(self.elem(inv.as_poly().expect("polynomial").clone()))
    }

    /// Euler's criterion; every element is a square in characteristic 2.
    pub fn is_square(&self, a: &ResidueElem) -> bool {
        if a.is_zero() || self.characteristic() == 2 {
            return true;
        }
        let e = (self.order() - BigUint::one()) / 2u32;
        self.pow(a, &e).is_one()
    }

    /// Quadratic character `a^((|κ| - 1) / 2)` as `±1`; `a` nonzero, odd
    /// characteristic.
    pub fn quadratic_character(&self, a: &ResidueElem) -> i8 {
        if self.is_square(a) {
            1
        } else {
            -1
        }
    }

    /// All elements, in the order of their coefficient encodings.
    pub fn elements(&self) -> Vec<ResidueElem> {
        let total = self.base.order().pow(self.extension_degree());
        (0..total).map(|n| self.elem_from_index(n)).collect()
    }

    fn elem_from_index(&self, mut n: u64) -> ResidueElem {
        let q = self.base.order();
        let c = (0..self.extension_degree())
            .map(|_| {
                let c = n % q;
                n /= q;
                c
            })
            .collect();
        self.elem(FqPoly::new(self.base.clone(), c))
    }

    /// A square root (the one with the smaller encoding), if any.
    pub fn sqrt(&self, a: &ResidueElem) -> Option<ResidueElem> {
        if a.is_zero() {
            return Some(a.clone());
        }
        if !self.is_square(a) {
            return None;
        }
        let root = if self.characteristic() == 2 {
            // Frobenius is bijective: sqrt(a) = a^(|κ|/2)
            self.pow(a, &(self.order() / 2u32))
        } else {
            self.tonelli_shanks(a)
        };
        debug_assert_eq!(self.mul(&root, &root), *a);
        let other = self.neg(&root);
        Some(if other.encoding_key() < root.encoding_key() { other } else { root })
    }

    fn tonelli_shanks(&self, a: &ResidueElem) -> ResidueElem {
        let order_minus_one = self.order() - BigUint::one();
        let mut q = order_minus_one.clone();
        let mut s = 0u32;
        while !q.bit(0) {
            q >>= 1;
            s += 1;
        }
        let z = (1..)
            .map(|n| self.elem_from_index(n))
            .find(|x| !self.is_square(x))
            .expect("odd-order field has nonsquares");
        let mut m = s;
        let mut c = self.pow(&z, &q);
        let mut t = self.pow(a, &q);
        let mut r = self.pow(a, &((&q + 1u32) / 2u32));
        while !t.is_one() {
            let mut i = 0;
            let mut t2 = t.clone();
            while !t2.is_one() {
                t2 = self.mul(&t2, &t2);
                i += 1;
            }
            let b = self.pow(&c, &(BigUint::one() << (m - i - 1)));
            m = i;
            c = self.mul(&b, &b);
            t = self.mul(&t, &c);
            r = self.mul(&r, &b);
        }
        r
    }
}

impl ResidueElem {
    pub fn value(&self) -> &FqPoly {
        &self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.value.is_one()
    }

    fn encoding_key(&self) -> (usize, Vec<u64>) {
        (self.value.coeffs().len(), self.value.coeffs().iter().rev().copied().collect())
    }
}

impl fmt::Display for ResidueElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.imaginary {
            let (a, b) = (self.value.coeff(0), self.value.coeff(1));
            return match (a, b) {
                (a, 0) => write!(f, "{a}"),
                (0, 1) => write!(f, "i"),
                (0, b) => write!(f, "{b}i"),
                (a, 1) => write!(f, "{a}+i"),
                (a, b) => write!(f, "{a}+{b}i"),
            };
        }
        write!(f, "{}", self.value)
    }
}
