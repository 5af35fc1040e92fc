//! Polynomials over `F_q` and their factorization (Cantor-Zassenhaus).

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fq::Fq;

/// Coefficients are stored lowest degree first with no trailing zeros; the
/// zero polynomial has no coefficients.
#[derive(Clone)]
pub struct FqPoly {
    field: Arc<Fq>,
    coeffs: Vec<u64>,
}

impl PartialEq for FqPoly {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.coeffs == other.coeffs
    }
}

impl Eq for FqPoly {}

impl Hash for FqPoly {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.order().hash(state);
        self.coeffs.hash(state);
    }
}

impl fmt::Debug for FqPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self, self.field.order())
    }
}

impl FqPoly {
    pub fn new(field: Arc<Fq>, mut coeffs: Vec<u64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        debug_assert!(coeffs.iter().all(|&c| c < field.order()));
        FqPoly { field, coeffs }
    }

    pub fn zero(field: &Arc<Fq>) -> Self {
        Self::new(field.clone(), vec![])
    }

    pub fn constant(field: &Arc<Fq>, c: u64) -> Self {
        Self::new(field.clone(), vec![c])
    }

    pub fn one(field: &Arc<Fq>) -> Self {
        Self::constant(field, 1)
    }

    /// The monomial `t^n`.
    pub fn monomial(field: &Arc<Fq>, n: usize) -> Self {
        let mut c = vec![0; n + 1];
        c[n] = 1;
        Self::new(field.clone(), c)
    }

    pub fn field(&self) -> &Arc<Fq> {
        &self.field
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_unit(&self) -> bool {
        self.coeffs.len() == 1
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    pub fn scale(&self, c: u64) -> Self {
        let f = &self.field;
        Self::new(f.clone(), self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn add(&self, o: &Self) -> Self {
        let f = &self.field;
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new(f.clone(), (0..n).map(|i| f.add(self.coeff(i), o.coeff(i))).collect())
    }

    pub fn neg(&self) -> Self {
        let f = &self.field;
        Self::new(f.clone(), self.coeffs.iter().map(|&a| f.neg(a)).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(&self.field);
        }
        let f = &self.field;
        let mut out = vec![0u64; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Self::new(f.clone(), out)
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(&self.field), |acc, _| acc.mul(self))
    }

    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let f = &self.field;
        let dd = d.coeffs.len() - 1;
        let inv_lead = f.inv(d.leading()).expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(f), self.clone());
        }
        let mut quot = vec![0u64; rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = f.mul(rem[i + dd], inv_lead);
            quot[i] = c;
            if c == 0 {
                continue;
            }
            for (j, &b) in d.coeffs.iter().enumerate() {
                rem[i + j] = f.sub(rem[i + j], f.mul(c, b));
            }
        }
        rem.truncate(dd);
        (Self::new(f.clone(), quot), Self::new(f.clone(), rem))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.div_rem(d).1
    }

    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    /// `(leading coefficient, monic associate)`.
    pub fn canonical_associate(&self) -> Result<(u64, Self)> {
        if self.is_zero() {
            return Err(Error::ZeroInput);
        }
        let lc = self.leading();
        let inv = self.field.inv(lc).expect("nonzero");
        Ok((lc, self.scale(inv)))
    }

    /// Monic gcd (zero only when both inputs are zero).
    pub fn gcd(a: &Self, b: &Self) -> Self {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.canonical_associate().expect("nonzero").1
        }
    }

    pub fn derivative(&self) -> Self {
        let f = &self.field;
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &a)| f.mul(a, f.from_i64((i as u64 % f.characteristic()) as i64)))
            .collect();
        Self::new(f.clone(), c)
    }

    pub fn pow_mod(&self, e: &BigUint, m: &Self) -> Self {
        let mut acc = Self::one(&self.field).rem(m);
        let base = self.rem(m);
        for i in (0..e.bits()).rev() {
            acc = acc.mul(&acc).rem(m);
            if e.bit(i) {
                acc = acc.mul(&base).rem(m);
            }
        }
        acc
    }

    /// A square root, if `self` is a square (odd characteristic).
    pub fn sqrt(&self) -> Option<Self> {
        let f = &self.field;
        let Some(deg) = self.degree() else {
            return Some(self.clone());
        };
        if deg % 2 == 1 {
            return None;
        }
        let m = deg / 2;
        let mut y = vec![0u64; m + 1];
        y[m] = f.sqrt(self.leading())?;
        let inv_two_lead = f.inv(f.add(y[m], y[m]))?;
        // coefficient of t^(m+k) in y^2 determines y_k from the higher ones
        for k in (0..m).rev() {
            let mut acc = self.coeff(m + k);
            for i in k + 1..m {
                let j = m + k - i;
                if j > k && j <= m {
                    acc = f.sub(acc, f.mul(y[i], y[j]));
                }
            }
            y[k] = f.mul(acc, inv_two_lead);
        }
        let r = Self::new(f.clone(), y);
        (r.mul(&r) == *self).then_some(r)
    }

    /// `t^n f(1/t)` for `n >= deg f`.
    pub fn reversed(&self, n: usize) -> Self {
        let mut c = vec![0u64; n + 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            c[n - i] = a;
        }
        Self::new(self.field.clone(), c)
    }

    /// Canonical order: by degree, then coefficients from the top down.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.coeffs.len().cmp(&other.coeffs.len()).then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }

    /// `(unit, [(monic irreducible, exponent)])` in canonical order.
    pub fn factor(&self) -> Result<(u64, Vec<(FqPoly, u32)>)> {
        let (lc, monic) = self.canonical_associate()?;
        let mut out = Vec::new();
        for (g, e) in square_free(&monic) {
            for (h, d) in distinct_degree(&g) {
                for p in equal_degree(&h, d) {
                    out.push((p, e));
                }
            }
        }
        out.sort_by(|a, b| a.0.canonical_cmp(&b.0));
        // merge duplicates (square_free parts are coprime, so none expected)
        let mut merged: Vec<(FqPoly, u32)> = Vec::new();
        for (p, e) in out {
            match merged.last_mut() {
                Some((q, k)) if *q == p => *k += e,
                _ => merged.push((p, e)),
            }
        }
        Ok((lc, merged))
    }

    pub fn is_irreducible(&self) -> bool {
        match self.factor() {
            Ok((_, f)) => f.len() == 1 && f[0].1 == 1,
            Err(_) => false,
        }
    }

    /// Number of times `pi` divides `self`; `self` must be nonzero.
    pub fn valuation(&self, pi: &Self) -> u32 {
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

fn square_free(f: &FqPoly) -> Vec<(FqPoly, u32)> {
    let field = f.field().clone();
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    let mut c = FqPoly::gcd(f, &f.derivative());
    let mut w = f.div_exact(&c).expect("gcd divides");
    let mut i = 1;
    while !w.is_one() {
        let y = FqPoly::gcd(&w, &c);
        let fac = w.div_exact(&y).expect("gcd divides");
        if !fac.is_one() {
            out.push((fac, i));
        }
        w = y;
        c = c.div_exact(&w).expect("gcd divides");
        i += 1;
    }
    if !c.is_one() {
        // c is a polynomial in t^p; take the p-th root coefficientwise
        let p = field.characteristic() as usize;
        let root_exp = BigUint::from(field.order() / p as u64);
        let coeffs = (0..=c.degree().unwrap() / p).map(|j| field.pow(c.coeff(j * p), &root_exp)).collect();
        let root = FqPoly::new(field.clone(), coeffs);
        for (g, e) in square_free(&root) {
            out.push((g, e * p as u32));
        }
    }
    out
}

fn distinct_degree(f: &FqPoly) -> Vec<(FqPoly, usize)> {
    let field = f.field().clone();
    let q = BigUint::from(field.order());
    let t = FqPoly::monomial(&field, 1);
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut h = t.rem(&rest);
    let mut i = 1;
    while rest.degree().unwrap_or(0) >= 2 * i {
        h = h.pow_mod(&q, &rest);
        let g = FqPoly::gcd(&rest, &h.sub(&t));
        if !g.is_one() {
            rest = rest.div_exact(&g).expect("gcd divides");
            h = h.rem(&rest);
            out.push((g, i));
        }
        i += 1;
    }
    if let Some(d) = rest.degree() {
        if d > 0 {
            out.push((rest, d));
        }
    }
    out
}

fn equal_degree(f: &FqPoly, d: usize) -> Vec<FqPoly> {
    let n = f.degree().expect("nonzero");
    if n == d {
        return vec![f.clone()];
    }
    let field = f.field().clone();
    assert!(field.order() % 2 == 1, "equal-degree splitting needs odd q");
    let exp = crate::fq::half_order_minus_one(field.order(), d as u32);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ (n as u64) << 8 ^ d as u64);
    loop {
        let a = FqPoly::new(field.clone(), (0..n).map(|_| rng.gen_range(0..field.order())).collect());
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let b = a.pow_mod(&exp, f).sub(&FqPoly::one(&field));
        let g = FqPoly::gcd(f, &b);
        let gd = g.degree().unwrap_or(0);
        if gd > 0 && gd < n {
            let mut out = equal_degree(&g, d);
            out.extend(equal_degree(&f.div_exact(&g).expect("gcd divides"), d));
            return out;
        }
    }
}

impl fmt::Display for FqPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            match (i, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "t")?,
                (1, c) => write!(f, "{c}t")?,
                (i, 1) => write!(f, "t^{i}")?,
                (i, c) => write!(f, "{c}t^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_roots() {
        let f = Arc::new(Fq::new(5).unwrap());
        let g = FqPoly::new(f.clone(), vec![3, 0, 1, 4]);
        let h = g.mul(&g).scale(4);
        let r = h.sqrt().unwrap();
        assert_eq!(r.mul(&r), h);
        assert_eq!(FqPoly::new(f.clone(), vec![2]).sqrt(), None);
        assert_eq!(FqPoly::new(f.clone(), vec![1, 1]).sqrt(), None);
        assert_eq!(h.add(&FqPoly::one(&f)).sqrt(), None);
    }

    fn field(q: u64) -> Arc<Fq> {
        Arc::new(Fq::new(q).unwrap())
    }

    fn poly(f: &Arc<Fq>, c: &[u64]) -> FqPoly {
        FqPoly::new(f.clone(), c.to_vec())
    }

    fn multiply_back(lc: u64, f: &[(FqPoly, u32)], field: &Arc<Fq>) -> FqPoly {
        f.iter().fold(FqPoly::constant(field, lc), |acc, (p, e)| acc.mul(&p.pow(*e)))
    }

    #[test]
    fn factors_known_polynomials() {
        let f5 = field(5);
        // 2t^2 - 2t = 2 t (t - 1)
        let x = poly(&f5, &[0, 3, 2]);
        let (lc, f) = x.factor().unwrap();
        assert_eq!(lc, 2);
        assert_eq!(f, vec![(poly(&f5, &[0, 1]), 1), (poly(&f5, &[4, 1]), 1)]);
        // t^2 + 2 has no root mod 5 (-2 = 3 is a nonsquare)
        assert!(poly(&f5, &[2, 0, 1]).is_irreducible());
        assert!(!poly(&f5, &[1, 0, 1]).is_irreducible());
    }

    #[test]
    fn factors_with_repeated_and_pth_power_parts() {
        let f5 = field(5);
        let a = poly(&f5, &[1, 1]);
        let b = poly(&f5, &[2, 0, 1]);
        // (t+1)^5 * (t^2+2)^2 * t has a p-th power part
        let x = a.pow(5).mul(&b.pow(2)).mul(&poly(&f5, &[0, 1])).scale(3);
        let (lc, f) = x.factor().unwrap();
        assert_eq!(multiply_back(lc, &f, &f5), x);
        assert_eq!(f.len(), 3);
        assert!(f.iter().all(|(p, _)| p.is_irreducible() && p.is_monic()));
    }

    #[test]
    fn factors_over_extension_field() {
        let f9 = field(9);
        let x = poly(&f9, &[1, 0, 0, 0, 0, 0, 1]);
        let (lc, f) = x.factor().unwrap();
        assert_eq!(multiply_back(lc, &f, &f9), x);
    }

    #[test]
    fn display() {
        let f5 = field(5);
        assert_eq!(poly(&f5, &[4, 3, 2]).to_string(), "2t^2+3t+4");
        assert_eq!(poly(&f5, &[0, 1]).to_string(), "t");
        assert_eq!(poly(&f5, &[]).to_string(), "0");
    }
}
