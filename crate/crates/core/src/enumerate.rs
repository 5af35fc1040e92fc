//! Deterministic enumeration of ring elements by height.
//!
//! Heights: `max(|re|, |im|)` in `Z[i]`, the degree in `F_q[t]` (constants,
//! including zero, have height 0). Within a height the order is fixed:
//! rational integers as `h, -h`; general Gaussian integers by
//! `(|re|, re < 0, |im|, im < 0)`; polynomials by coefficients from the top
//! down.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::field::Field;
use crate::gauss::GaussInt;
use crate::poly::FqPoly;
use crate::ring::RingElem;

/// Which Gaussian integers a layer contains.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub(crate) enum Layer {
    /// Rational integers in `Z[i]`, or every polynomial in `F_q[t]`.
    Rational,
    /// Gaussian integers with nonzero imaginary part; empty for `F_q[t]`.
    Imaginary,
}

pub(crate) fn int_key(n: &BigInt) -> (BigInt, bool) {
    (n.abs(), n.is_negative())
}

/// Elements of height exactly `h` in the given layer.
pub(crate) fn layer(field: &Field, h: u32, which: Layer) -> Box<dyn Iterator<Item = RingElem>> {
    match (field, which) {
        (Field::Gaussian, Layer::Rational) => {
            let v: Vec<i64> = if h == 0 { vec![0] } else { vec![h as i64, -(h as i64)] };
            Box::new(v.into_iter().map(|n| RingElem::Gauss(GaussInt::from_int(n))))
        }
        (Field::Gaussian, Layer::Imaginary) => {
            let h = h as i64;
            let mut v: Vec<GaussInt> = (-h..=h)
                .flat_map(|re| (-h..=h).map(move |im| GaussInt::new(re, im)))
                .filter(|g| !g.im.is_zero() && g.height() == BigInt::from(h))
                .collect();
            v.sort_by_key(|g| (int_key(&g.re), int_key(&g.im)));
            Box::new(v.into_iter().map(RingElem::Gauss))
        }
        (Field::FunctionField(f), Layer::Rational) => {
            let f = f.clone();
            let q = f.order();
            let (lo, hi) = if h == 0 { (0, q) } else { (q.pow(h), q.pow(h + 1)) };
            Box::new((lo..hi).map(move |mut n| {
                let mut c = Vec::with_capacity(h as usize + 1);
                while n > 0 {
                    c.push(n % q);
                    n /= q;
                }
                RingElem::Poly(FqPoly::new(f.clone(), c))
            }))
        }
        (Field::FunctionField(_), Layer::Imaginary) => Box::new(std::iter::empty()),
    }
}

/// Number of elements in `layer(field, h, which)`.
pub(crate) fn layer_size(field: &Field, h: u32, which: Layer) -> u128 {
    match (field, which) {
        (Field::Gaussian, Layer::Rational) => {
            if h == 0 {
                1
            } else {
                2
            }
        }
        (Field::Gaussian, Layer::Imaginary) => {
            if h == 0 {
                0
            } else {
                8 * u128::from(h) - 2
            }
        }
        (Field::FunctionField(f), Layer::Rational) => {
            let q = u128::from(f.order());
            if h == 0 {
                q
            } else {
                q.saturating_pow(h) * (q - 1)
            }
        }
        (Field::FunctionField(_), Layer::Imaginary) => 0,
    }
}

/// Largest element list a search materializes.
pub(crate) const MAX_MATERIALIZED: u128 = 100_000;

/// Size of the element list for heights `0..=h`.
pub(crate) fn list_size(field: &Field, h: u32, which: Layer) -> u128 {
    (0..=h)
        .map(|k| {
            let extra = if which == Layer::Imaginary { layer_size(field, k, Layer::Imaginary) } else { 0 };
            layer_size(field, k, Layer::Rational) + extra
        })
        .sum()
}

/// A cap on the number of candidates a search may examine.
pub(crate) struct Budget(u64);

impl Budget {
    pub(crate) fn new(n: u64) -> Self {
        Budget(n)
    }

    /// Consumes one unit; false once exhausted.
    pub(crate) fn spend(&mut self) -> bool {
        if self.0 == 0 {
            return false;
        }
        self.0 -= 1;
        true
    }
}
