//! Hilbert symbols, ramification sets of quaternion algebras `(a,b)_F`, and
//! the search for a presentation with prescribed ramification.

use std::fmt;

use num_integer::Integer;

use crate::enumerate::{layer, list_size, Budget, Layer, MAX_MATERIALIZED};
use crate::error::{Error, Result};
use crate::field::{Field, FieldElem};
use crate::local::{isotropic_vector, local_val, scaled_coefficients};
use crate::place::{places_dividing, Place};

const PRESENTATION_BUDGET: u64 = 2_000_000;

/// The quaternion algebra `(a,b)_F`: `I^2 = a`, `J^2 = b`, `IJ = -JI`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QuatPresentation {
    a: FieldElem,
    b: FieldElem,
}

impl QuatPresentation {
    pub fn new(a: FieldElem, b: FieldElem) -> Result<Self> {
        if a.is_zero() || b.is_zero() {
            return Err(Error::ZeroInput);
        }
        if a.field() != b.field() {
            return Err(Error::FieldMismatch);
        }
        Ok(QuatPresentation { a, b })
    }

    pub fn a(&self) -> &FieldElem {
        &self.a
    }

    pub fn b(&self) -> &FieldElem {
        &self.b
    }

    pub fn field(&self) -> Field {
        self.a.field()
    }

    /// `(b, a)`
    pub fn swapped(&self) -> Self {
        QuatPresentation { a: self.b.clone(), b: self.a.clone() }
    }

    /// `(a s^2, b)`
    pub fn scale_a(&self, s: &FieldElem) -> Result<Self> {
        Self::new(&self.a * &s.square(), self.b.clone())
    }

    /// `(a, b s^2)`
    pub fn scale_b(&self, s: &FieldElem) -> Result<Self> {
        Self::new(self.a.clone(), &self.b * &s.square())
    }

    /// `(-ab, b)`
    pub fn neg_product(&self) -> Self {
        QuatPresentation { a: -&(&self.a * &self.b), b: self.b.clone() }
    }
}

impl fmt::Display for QuatPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

/// A finite set of places of even cardinality, in canonical order.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct RamificationSet {
    places: Vec<Place>,
}

impl RamificationSet {
    pub fn new(mut places: Vec<Place>) -> Result<Self> {
        places.sort();
        places.dedup();
        if places.len() % 2 == 1 {
            return Err(Error::OddCardinality);
        }
        Ok(RamificationSet { places })
    }

    pub fn places(&self) -> &[Place] {
        &self.places
    }

    pub fn len(&self) -> usize {
        self.places.len()
    }

    pub fn is_empty(&self) -> bool {
        self.places.is_empty()
    }

    pub fn contains(&self, v: &Place) -> bool {
        self.places.contains(v)
    }
}

impl fmt::Display for RamificationSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.places.iter().map(Place::to_string).collect();
        write!(f, "{{{}}}", names.join(", "))
    }
}

fn check_args(a: &FieldElem, b: &FieldElem, v: &Place) -> Result<()> {
    if a.field() != v.field() || b.field() != v.field() {
        return Err(Error::FieldMismatch);
    }
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroInput);
    }
    Ok(())
}

/// The tame symbol `(-1)^(αβ(q-1)/2) χ(a0)^β χ(b0)^α` with `a = a0 π^α`,
/// `b = b0 π^β`.
pub fn tame_hilbert(a: &FieldElem, b: &FieldElem, v: &Place) -> Result<i8> {
    check_args(a, b, v)?;
    if v.is_dyadic() {
        return Err(Error::DyadicPlace);
    }
    let (alpha, beta) = (v.valuation(a)?, v.valuation(b)?);
    let (a0, b0) = (v.unit_part(a)?, v.unit_part(b)?);
    let mut s = 1i8;
    if alpha.is_odd() && beta.is_odd() && v.residue_order() % 4u32 == 3u32.into() {
        s = -s;
    }
    if beta.is_odd() {
        s *= v.residue_symbol(&a0)?;
    }
    if alpha.is_odd() {
        s *= v.residue_symbol(&b0)?;
    }
    Ok(s)
}

/// Places outside which `(a,b)` is split: those in the support of `2`, `a`
/// or `b` (taken separately, since valuations can cancel in `ab`), plus the
/// infinite place of `F_q(t)`.
pub fn symbol_support(a: &FieldElem, b: &FieldElem) -> Result<Vec<Place>> {
    let field = a.field();
    let mut places = places_dividing(&field.from_int(2))?;
    places.extend(places_dividing(a)?);
    places.extend(places_dividing(b)?);
    if !field.is_gaussian() {
        places.push(Place::infinite(&field)?);
    }
    places.sort();
    places.dedup();
    Ok(places)
}

/// The symbol at `1+i`, by reciprocity from the tame symbols.
pub fn dyadic_hilbert(a: &FieldElem, b: &FieldElem) -> Result<i8> {
    if !a.field().is_gaussian() || !b.field().is_gaussian() {
        return Err(Error::FieldMismatch);
    }
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroInput);
    }
    let mut s = 1;
    for v in symbol_support(a, b)? {
        if !v.is_dyadic() {
            s *= tame_hilbert(a, b, &v)?;
        }
    }
    Ok(s)
}

/// `(a,b)_v` at any place.
pub fn hilbert(a: &FieldElem, b: &FieldElem, v: &Place) -> Result<i8> {
    check_args(a, b, v)?;
    if v.is_dyadic() {
        dyadic_hilbert(a, b)
    } else {
        tame_hilbert(a, b, v)
    }
}

/// `(a,b)_v` decided by searching for a primitive zero of
/// `a x^2 + b y^2 - z^2` modulo `π^(2 v(4ab) + 3)`.
pub fn hilbert_by_isotropy(a: &FieldElem, b: &FieldElem, v: &Place) -> Result<i8> {
    check_args(a, b, v)?;
    let coeffs = scaled_coefficients(&[a.clone(), b.clone(), -&v.field().one()], v)?;
    let pi = v.local_prime();
    let val: i64 = coeffs.iter().map(|c| local_val(c, &pi)).sum::<i64>() + 2 * i64::from(v.two_valuation());
    let precision = (2 * val + 3) as u32;
    Ok(if isotropic_vector(&coeffs, v, precision)?.is_some() { 1 } else { -1 })
}

/// The places where `(a,b)` ramifies.
pub fn ramification_set(p: &QuatPresentation) -> Result<RamificationSet> {
    let mut out = Vec::new();
    for v in symbol_support(p.a(), p.b())? {
        if hilbert(p.a(), p.b(), &v)? == -1 {
            out.push(v);
        }
    }
    RamificationSet::new(out)
}

/// The first `(a,b)` in enumeration order ramified exactly at `sigma`:
/// pairs by maximal height, then lexicographically, rational integers
/// before general Gaussian integers.
pub fn presentation_from_ramification(field: &Field, sigma: &[Place], height_bound: u32) -> Result<QuatPresentation> {
    let target = RamificationSet::new(sigma.to_vec())?;
    if target.places().iter().any(|v| v.field() != *field) {
        return Err(Error::FieldMismatch);
    }
    if target.is_empty() {
        return QuatPresentation::new(field.one(), field.one());
    }
    let mut budget = Budget::new(PRESENTATION_BUDGET);
    for which in [Layer::Rational, Layer::Imaginary] {
        for h in 1..=height_bound {
            if list_size(field, h, which) > MAX_MATERIALIZED {
                break;
            }
            // lexicographic over the full order: pairs with at least one
            // element of height h and at least one in the current layer
            let elems: Vec<(u32, FieldElem)> = (0..=h)
                .flat_map(|k| {
                    let extra = (which == Layer::Imaginary).then(|| layer(field, k, Layer::Imaginary));
                    layer(field, k, Layer::Rational).chain(extra.into_iter().flatten()).map(move |x| (k, x))
                })
                .filter(|(_, x)| !x.is_zero())
                .map(|(k, x)| (k, FieldElem::from_ring(x)))
                .collect();
            let imaginary = |x: &FieldElem| x.num().as_gauss().is_some_and(|g| !g.is_rational());
            for (ha, a) in &elems {
                for (hb, b) in &elems {
                    if (*ha).max(*hb) != h {
                        continue;
                    }
                    if which == Layer::Imaginary && !imaginary(a) && !imaginary(b) {
                        continue;
                    }
                    if !budget.spend() {
                        return Err(Error::SearchExhausted("presentation (work limit)".into()));
                    }
                    if !could_ramify(a, b, &target)? {
                        continue;
                    }
                    let p = QuatPresentation::new(a.clone(), b.clone())?;
                    if ramification_set(&p)? == target {
                        return Ok(p);
                    }
                }
            }
        }
    }
    Err(Error::SearchExhausted(format!("presentation up to height {height_bound}")))
}

/// Necessary condition: at a tame place where both entries are units the
/// symbol is trivial.
fn could_ramify(a: &FieldElem, b: &FieldElem, sigma: &RamificationSet) -> Result<bool> {
    for v in sigma.places() {
        if !v.is_dyadic() && v.valuation(a)? == 0 && v.valuation(b)? == 0 {
            return Ok(false);
        }
    }
    Ok(true)
}
