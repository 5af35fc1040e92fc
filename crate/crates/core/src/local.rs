//! Finite-precision arithmetic in `O_v / π^k`.
//!
//! Elements are ring elements of the local picture (see
//! [`Place::localize`]) reduced to a fixed complete residue system:
//!
//! * split Gaussian prime over `p`: rational integers `0..p^k`
//! * inert Gaussian prime `p`: `a + bi` with `0 <= a, b < p^k`
//! * `1+i`: `a + bi` with `b < 2^⌊k/2⌋` and `a < 2^⌈k/2⌉`
//! * polynomial prime: polynomials of degree `< k·deg π`

use std::collections::hash_map::Entry;
use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::field::FieldElem;
use crate::gauss::GaussInt;
use crate::place::Place;
use crate::poly::FqPoly;
use crate::ring::RingElem;

const MAX_RESIDUE_SYSTEM: u64 = 4_000_000;

enum Kind {
    // `root` ≡ i (mod π^max_k)
    Split { p: BigInt, root: BigInt },
    Inert { p: BigInt },
    Dyadic,
    Poly,
}

pub(crate) struct LocalRing<'a> {
    place: &'a Place,
    pi: RingElem,
    kind: Kind,
    max_k: u32,
}

impl<'a> LocalRing<'a> {
    /// Arithmetic modulo `π^k` for every `k <= max_k`.
    pub(crate) fn new(place: &'a Place, max_k: u32) -> Self {
        let pi = place.local_prime();
        let kind = match &pi {
            RingElem::Poly(_) => Kind::Poly,
            RingElem::Gauss(_) if place.is_dyadic() => Kind::Dyadic,
            RingElem::Gauss(g) if g.is_rational() => Kind::Inert { p: g.re.clone() },
            RingElem::Gauss(g) => {
                let p = g.norm();
                let modulus = place.residue_field().modulus();
                let r1 = BigInt::from(place.residue_field().base().neg(modulus.coeff(0)));
                let pk = p.pow(max_k.max(1));
                // Newton iteration for r^2 + 1 = 0 converges to the root ≡ r1
                let mut r = r1;
                for _ in 0..=max_k {
                    let f = (&r * &r + 1u32).mod_floor(&pk);
                    if f.is_zero() {
                        break;
                    }
                    let inv = (&r * 2u32).modinv(&pk).expect("2r is a unit");
                    r = (&r - f * inv).mod_floor(&pk);
                }
                Kind::Split { p, root: r }
            }
        };
        LocalRing { place, pi, kind, max_k }
    }

    pub(crate) fn prime(&self) -> &RingElem {
        &self.pi
    }

    /// `v(x)`, `None` for zero.
    pub(crate) fn val(&self, x: &RingElem) -> Option<u32> {
        (!x.is_zero()).then(|| x.valuation(&self.pi))
    }

    pub(crate) fn is_zero_mod(&self, x: &RingElem, k: u32) -> bool {
        self.val(x).is_none_or(|v| v >= k)
    }

    pub(crate) fn reduce(&self, x: &RingElem, k: u32) -> RingElem {
        assert!(k <= self.max_k, "precision {k} beyond local ring bound {}", self.max_k);
        match (&self.kind, x) {
            (Kind::Split { p, root }, RingElem::Gauss(g)) => {
                let pk = p.pow(k);
                RingElem::Gauss(GaussInt::from_int((&g.re + &g.im * root).mod_floor(&pk)))
            }
            (Kind::Inert { p }, RingElem::Gauss(g)) => {
                let pk = p.pow(k);
                RingElem::Gauss(GaussInt::new(g.re.mod_floor(&pk), g.im.mod_floor(&pk)))
            }
            (Kind::Dyadic, RingElem::Gauss(g)) => {
                let t = k / 2;
                let lo = BigInt::one() << t;
                if k.is_multiple_of(2) {
                    return RingElem::Gauss(GaussInt::new(g.re.mod_floor(&lo), g.im.mod_floor(&lo)));
                }
                // subtract multiples of 2^t (1+i), then of 2^(t+1)
                let b = g.im.mod_floor(&lo);
                let shift: BigInt = (&g.im - &b) / &lo * &lo;
                let hi = BigInt::one() << (t + 1);
                RingElem::Gauss(GaussInt::new((&g.re - shift).mod_floor(&hi), b))
            }
            (Kind::Poly, RingElem::Poly(f)) => RingElem::Poly(f.rem(&self.pi.pow(k).as_poly().unwrap().clone())),
            _ => panic!("ring mismatch"),
        }
    }

    /// Representative of a `v`-integral element (already localized).
    pub(crate) fn reduce_field(&self, x: &FieldElem, k: u32) -> Result<RingElem> {
        if x.is_zero() {
            return Ok(self.pi.zero_like());
        }
        let j = x.den().valuation(&self.pi);
        let pj = self.pi.pow(j);
        let n = x.num().div_exact(&pj).ok_or(Error::NonUnit(-1))?;
        let d = x.den().div_exact(&pj).expect("valuation counted");
        let inv = d.inverse_mod(&self.pi.pow(k.max(1))).expect("unit denominator");
        Ok(self.reduce(&(&n * &inv), k))
    }

    /// A complete residue system modulo `π^s`, in a fixed order.
    pub(crate) fn residues(&self, s: u32) -> Result<Vec<RingElem>> {
        let count = self.place.residue_order().pow(s);
        if count > MAX_RESIDUE_SYSTEM.into() {
            return Err(Error::TooLarge(format!("residue system of size {count} at {}", self.place)));
        }
        let ints = |m: &BigInt| (0..m.to_u64().expect("small")).map(BigInt::from).collect::<Vec<_>>();
        Ok(match &self.kind {
            Kind::Split { p, .. } => {
                ints(&p.pow(s)).into_iter().map(|a| RingElem::Gauss(GaussInt::from_int(a))).collect()
            }
            Kind::Inert { p } => {
                let r = ints(&p.pow(s));
                r.iter()
                    .flat_map(|b| r.iter().map(move |a| RingElem::Gauss(GaussInt::new(a.clone(), b.clone()))))
                    .collect()
            }
            Kind::Dyadic => {
                let re = ints(&(BigInt::one() << s.div_ceil(2)));
                let im = ints(&(BigInt::one() << (s / 2)));
                im.iter()
                    .flat_map(|b| re.iter().map(move |a| RingElem::Gauss(GaussInt::new(a.clone(), b.clone()))))
                    .collect()
            }
            Kind::Poly => {
                let f = self.pi.as_poly().unwrap().field().clone();
                let len = s as usize * self.pi.as_poly().unwrap().degree().unwrap();
                let q = f.order();
                (0..count.to_u64().unwrap())
                    .map(|mut n| {
                        let c = (0..len)
                            .map(|_| {
                                let c = n % q;
                                n /= q;
                                c
                            })
                            .collect();
                        RingElem::Poly(FqPoly::new(f.clone(), c))
                    })
                    .collect()
            }
        })
    }
}

/// Local valuation of an element already in the local picture.
pub(crate) fn local_val(x: &FieldElem, pi: &RingElem) -> i64 {
    x.num().valuation(pi) as i64 - x.den().valuation(pi) as i64
}

/// Coefficients moved to the local picture and multiplied by even powers
/// of the local prime so that every valuation is 0 or 1. Isotropy is
/// unchanged (substitute `x_j -> π^m x_j`).
pub(crate) fn scaled_coefficients(coeffs: &[FieldElem], place: &Place) -> Result<Vec<FieldElem>> {
    let pi = FieldElem::from_ring(place.local_prime());
    coeffs
        .iter()
        .map(|c| {
            let v = place.valuation(c)?;
            Ok(&place.localize(c) * &pi.pow(-2 * Integer::div_floor(&v, &2))?)
        })
        .collect()
}

/// Searches for a primitive zero of `Σ c_j x_j^2` modulo `π^precision`.
///
/// `coeffs` must come from [`scaled_coefficients`]. Any primitive zero has
/// a unit coordinate either on a unit coefficient (orientation A) or, after
/// `x_j = π y_j` on the unit coefficients and division by `π`, on one of
/// the former valuation-one coefficients (orientation B). In both cases the
/// pivot has a unit partial derivative up to `2`, so a zero modulo
/// `π^(2e+1)` lifts; that zero is found by a subset-sum over residues.
/// The result is lifted by Newton iteration on the pivot coordinate.
pub(crate) fn isotropic_vector(coeffs: &[FieldElem], place: &Place, precision: u32) -> Result<Option<Vec<RingElem>>> {
    let e = place.two_valuation();
    let n0 = 2 * e + 1;
    if precision < n0 {
        return Err(Error::PrecisionTooLow { required: n0, given: precision });
    }
    // x -> x + π^s h changes c x^2 by a multiple of π^(2e+1)
    let s = (1..).find(|s| (e + s).min(2 * s) >= n0).expect("finite");
    let ring = LocalRing::new(place, precision + 1);
    let pi = FieldElem::from_ring(ring.prime().clone());
    let vals: Vec<i64> = coeffs.iter().map(|c| local_val(c, ring.prime())).collect();
    debug_assert!(vals.iter().all(|v| *v == 0 || *v == 1));
    let values = ring.residues(s)?;
    for flipped in [false, true] {
        let oriented: Vec<FieldElem> = coeffs
            .iter()
            .zip(&vals)
            .map(|(c, &v)| match (flipped, v) {
                (false, _) => Ok(c.clone()),
                (true, 0) => Ok(c * &pi),
                (true, _) => c.div(&pi),
            })
            .collect::<Result<_>>()?;
        let pivotable: Vec<bool> = vals.iter().map(|&v| v == i64::from(flipped)).collect();
        if !pivotable.contains(&true) {
            continue;
        }
        let reps: Vec<RingElem> = oriented.iter().map(|c| ring.reduce_field(c, precision)).collect::<Result<_>>()?;
        let Some(mut y) = subset_sum(&ring, &reps, &pivotable, &values, n0) else {
            continue;
        };
        let pivot = (0..y.len()).find(|&j| pivotable[j] && !ring.is_zero_mod(&y[j], 1)).expect("pivot recorded");
        newton_lift(&ring, &reps, &mut y, pivot, precision)?;
        let pi_ring = ring.prime().clone();
        let x = y
            .into_iter()
            .zip(&vals)
            .map(|(y, &v)| if flipped && v == 0 { ring.reduce(&(&y * &pi_ring), precision) } else { y })
            .collect();
        return Ok(Some(x));
    }
    Ok(None)
}

/// A vector of residues with `Σ c_j x_j^2 ≡ 0 (mod π^n0)` and some pivotable
/// `x_j` a unit, chosen deterministically.
fn subset_sum(
    ring: &LocalRing<'_>,
    reps: &[RingElem],
    pivotable: &[bool],
    values: &[RingElem],
    n0: u32,
) -> Option<Vec<RingElem>> {
    type Key = (RingElem, bool);
    type Layer = (Vec<Key>, HashMap<Key, (Key, RingElem)>);
    let zero = ring.prime().zero_like();
    // layers[j]: reachable (partial sum, pivot seen) -> (previous key, x_j)
    let mut layers: Vec<Layer> = Vec::new();
    let mut frontier: Vec<Key> = vec![(zero.clone(), false)];
    for (c, &can_pivot) in reps.iter().zip(pivotable) {
        let mut options: Vec<(RingElem, bool, RingElem)> = Vec::new();
        let mut seen = HashSet::new();
        for x in values {
            let term = ring.reduce(&(c * &(x * x)), n0);
            let unit = can_pivot && !ring.is_zero_mod(x, 1);
            if seen.insert((term.clone(), unit)) {
                options.push((term, unit, x.clone()));
            }
        }
        let mut order = Vec::new();
        let mut back = HashMap::new();
        for key in &frontier {
            for (term, unit, x) in &options {
                let next = (ring.reduce(&(&key.0 + term), n0), key.1 || *unit);
                if let Entry::Vacant(e) = back.entry(next) {
                    order.push(e.key().clone());
                    e.insert((key.clone(), x.clone()));
                }
            }
        }
        frontier = order.clone();
        layers.push((order, back));
    }
    let mut key = (zero, true);
    let mut out = Vec::with_capacity(reps.len());
    for (_, back) in layers.iter().rev() {
        let (prev, x) = back.get(&key)?.clone();
        out.push(x);
        key = prev;
    }
    out.reverse();
    Some(out)
}

fn newton_lift(
    ring: &LocalRing<'_>,
    reps: &[RingElem],
    y: &mut [RingElem],
    pivot: usize,
    precision: u32,
) -> Result<()> {
    let two = reps[pivot].int_like(2);
    for _ in 0..64 {
        let g = reps.iter().zip(y.iter()).fold(ring.prime().zero_like(), |acc, (c, x)| &acc + &(c * &(x * x)));
        if ring.is_zero_mod(&g, precision) {
            return Ok(());
        }
        let step = FieldElem::new(g, &(&two * &reps[pivot]) * &y[pivot])?;
        y[pivot] = ring.reduce(&(&y[pivot] - &ring.reduce_field(&step, precision)?), precision);
    }
    unreachable!("Newton iteration converges quadratically")
}

/// Precision at which a unit's square class is decided: `2·v(2) + 1`.
pub(crate) fn square_class_precision(place: &Place) -> u32 {
    2 * place.two_valuation() + 1
}

/// For a `v`-unit `u`, a local ring element `r` with `r^2 ≡ u (mod π^k)`
/// at `k = square_class_precision`, or `None` if `u` is not a square in
/// `F_v`. Returns `(r, k)`.
pub(crate) fn unit_sqrt(u: &FieldElem, place: &Place) -> Result<Option<(RingElem, u32)>> {
    let v = place.valuation(u)?;
    if v != 0 {
        return Err(Error::NonUnit(v));
    }
    let k = square_class_precision(place);
    if !place.is_dyadic() {
        let kappa = place.residue_field();
        return Ok(kappa.sqrt(&place.reduce(u)?).map(|r| (place.lift_residue(&r), k)));
    }
    // r^2 mod π^k depends only on r mod π^s with s = max(k - e, ⌈k/2⌉)
    let e = place.two_valuation();
    let s = (k - e).max(k.div_ceil(2));
    let ring = LocalRing::new(place, k);
    let target = ring.reduce_field(&place.localize(u), k)?;
    for r in ring.residues(s)? {
        if ring.is_zero_mod(&(&(&r * &r) - &target), k) {
            return Ok(Some((r, k)));
        }
    }
    Ok(None)
}
