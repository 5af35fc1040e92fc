//! The element `d` and the quaternion algebra behind a witness: `d` is not
//! a global square, is a square at every ramified place, lies in
//! `-Nrd(Q)`, and is not the reduced norm of a pure quaternion.

use num_integer::Integer;

use crate::enumerate::{layer, Budget, Layer};
use crate::error::{Error, Result};
use crate::field::{Field, FieldElem};
use crate::gauss::GaussInt;
use crate::hilbert::{hilbert, ramification_set, QuatPresentation, RamificationSet};
use crate::local::{unit_sqrt, LocalRing};
use crate::place::Place;
use crate::quadform::{
    full_norm_form, global_search, hensel_precision_bound, hensel_search, local_represents, pure_norm_form,
};
use crate::ring::RingElem;

const FIND_D_BUDGET: u64 = 200_000;

/// `d` is a square at `place`: `v(d)` is even and `root^2 ≡ u (mod π^k)`
/// for the unit part `u` of `d` in the local picture.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LocalSquareFact {
    pub place: Place,
    pub valuation: i64,
    pub root: FieldElem,
    pub precision: u32,
}

impl LocalSquareFact {
    /// The canonical fact, or `None` if `d` is not a square at `place`.
    pub fn compute(d: &FieldElem, place: &Place) -> Result<Option<Self>> {
        let valuation = place.valuation(d)?;
        if valuation.is_odd() {
            return Ok(None);
        }
        let u = place.unit_part(d)?;
        Ok(unit_sqrt(&u, place)?.map(|(r, precision)| LocalSquareFact {
            place: place.clone(),
            valuation,
            root: FieldElem::from_ring(r),
            precision,
        }))
    }

    /// Rechecks the congruence and that the recorded data is canonical.
    pub fn verify(&self, d: &FieldElem) -> Result<bool> {
        let v = &self.place;
        if v.valuation(d)? != self.valuation || self.valuation.is_odd() || !self.root.is_integral() {
            return Ok(false);
        }
        let ring = LocalRing::new(v, self.precision);
        let u = ring.reduce_field(&v.localize(&v.unit_part(d)?), self.precision)?;
        let r = self.root.num();
        let congruent = ring.is_zero_mod(&(&(r * r) - &u), self.precision);
        Ok(congruent && Self::compute(d, v)?.as_ref() == Some(self))
    }
}

/// A candidate `d` for a ramification set.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DCandidate {
    pub d: FieldElem,
    pub sigma: RamificationSet,
    pub local_squares: Vec<LocalSquareFact>,
    /// A place where `d` has odd valuation, if there is one.
    pub witness_place: Option<Place>,
}

/// The first place where `x` has odd valuation.
pub fn odd_valuation_place(x: &FieldElem) -> Result<Option<Place>> {
    for (p, e) in x.square_class_rep().factor()?.primes {
        if e % 2 == 1 {
            return Ok(Some(Place::new(p)?));
        }
    }
    Ok(None)
}

fn candidates(field: &Field, height_bound: u32) -> Box<dyn Iterator<Item = RingElem> + '_> {
    match field {
        Field::Gaussian => {
            let ints = (2..=i64::from(height_bound)).map(|n| RingElem::Gauss(GaussInt::from_int(n)));
            let mut rest: Vec<GaussInt> = (1..=height_bound)
                .flat_map(|h| layer(field, h, Layer::Imaginary))
                .filter_map(|x| x.as_gauss().cloned())
                .collect();
            rest.sort_by(GaussInt::canonical_cmp);
            Box::new(ints.chain(rest.into_iter().map(RingElem::Gauss)))
        }
        Field::FunctionField(_) => {
            Box::new((0..=height_bound).flat_map(move |h| layer(field, h, Layer::Rational)).filter(|x| !x.is_zero()))
        }
    }
}

/// The first `d` in enumeration order that is not a global square but is a
/// square at every place of `sigma`.
pub fn find_d(field: &Field, sigma: &RamificationSet, height_bound: u32) -> Result<DCandidate> {
    if sigma.is_empty() {
        return Err(Error::EmptySigma);
    }
    if sigma.places().iter().any(|v| v.field() != *field) {
        return Err(Error::FieldMismatch);
    }
    let mut budget = Budget::new(FIND_D_BUDGET);
    'next: for x in candidates(field, height_bound) {
        if !budget.spend() {
            break;
        }
        let d = FieldElem::from_ring(x);
        if d.is_global_square()? {
            continue;
        }
        let mut local_squares = Vec::new();
        for v in sigma.places() {
            match LocalSquareFact::compute(&d, v)? {
                Some(f) => local_squares.push(f),
                None => continue 'next,
            }
        }
        let witness_place = odd_valuation_place(&d)?;
        return Ok(DCandidate { d, sigma: sigma.clone(), local_squares, witness_place });
    }
    Err(Error::SearchExhausted(format!("d up to height {height_bound}")))
}

/// A rational element of valuation one at `v`, used to change parities of
/// valuations by squares: the rational prime below a Gaussian prime, the
/// prime polynomial itself, or `1/t` at the infinite place.
fn parity_scalar(v: &Place) -> FieldElem {
    match v.prime() {
        Some(RingElem::Gauss(g)) if !g.is_rational() => FieldElem::from_gauss(GaussInt::from_int(g.norm())),
        _ => v.uniformizer(),
    }
}

/// An isomorphic presentation `(a', b')` with `v(a') = 0` and `v(b') = 1`,
/// reached by swapping, scaling by squares, and `(x, y) ~ (-xy, y)`.
pub fn normalize_presentation(p: &QuatPresentation, v: &Place) -> Result<QuatPresentation> {
    if v.is_dyadic() {
        return Err(Error::DyadicPlace);
    }
    if v.field() != p.field() {
        return Err(Error::FieldMismatch);
    }
    if hilbert(p.a(), p.b(), v)? != -1 {
        return Err(Error::NotRamified(v.to_string()));
    }
    let s = parity_scalar(v);
    let va = v.valuation(p.a())?;
    let p = p.scale_a(&s.pow(-Integer::div_floor(&va, &2))?)?;
    let vb = v.valuation(p.b())?;
    let p = p.scale_b(&s.pow(-Integer::div_floor(&vb, &2))?)?;
    match (v.valuation(p.a())?, v.valuation(p.b())?) {
        (0, 1) => Ok(p),
        (1, 0) => Ok(p.swapped()),
        // (a0 π, b0 π) ~ (-a0 b0 π^2, b0 π) ~ (-a0 b0, b0 π)
        (1, 1) => p.neg_product().scale_a(&v.uniformizer().inv()?),
        _ => Err(Error::NotRamified(v.to_string())),
    }
}

/// `-d` is a reduced norm at a ramified place: `d = c^2` there, so
/// `-d = (ic)^2 = Nrd(ic)`. `scalar` is `ic` in the local picture.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NegNormFact {
    pub place: Place,
    pub scalar: FieldElem,
    pub precision: u32,
}

impl NegNormFact {
    pub fn compute(d: &FieldElem, place: &Place) -> Result<Option<Self>> {
        let Some(fact) = LocalSquareFact::compute(d, place)? else {
            return Ok(None);
        };
        let ring = LocalRing::new(place, fact.precision);
        let i = ring.reduce_field(&place.localize(&place.field().sqrt_minus_one()), fact.precision)?;
        let scalar = ring.reduce(&(&i * fact.root.num()), fact.precision);
        Ok(Some(NegNormFact { place: place.clone(), scalar: FieldElem::from_ring(scalar), precision: fact.precision }))
    }

    pub fn verify(&self, d: &FieldElem) -> Result<bool> {
        let v = &self.place;
        if v.valuation(d)?.is_odd() || !self.scalar.is_integral() {
            return Ok(false);
        }
        let ring = LocalRing::new(v, self.precision);
        let u = ring.reduce_field(&v.localize(&v.unit_part(d)?), self.precision)?;
        let c = self.scalar.num();
        let congruent = ring.is_zero_mod(&(&(c * c) + &u), self.precision);
        Ok(congruent && Self::compute(d, v)?.as_ref() == Some(self))
    }
}

/// Evidence that `d ∈ -Nrd(Q)`: at unramified places `Q_v` is split and
/// every nonzero element is a norm; at ramified places see
/// [`NegNormFact`]. Optionally an exact `x` with `Nrd(x) = -d`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NegNrdTranscript {
    pub ramified: Vec<NegNormFact>,
    pub norm_witness: Option<Vec<FieldElem>>,
}

pub fn check_neg_nrd(p: &QuatPresentation, d: &FieldElem, witness_bound: u32) -> Result<NegNrdTranscript> {
    let sigma = ramification_set(p)?;
    let mut ramified = Vec::new();
    for v in sigma.places() {
        ramified.push(NegNormFact::compute(d, v)?.ok_or_else(|| Error::NotLocalSquare(format!("{d} at {v}")))?);
    }
    let norm_witness = global_search(&full_norm_form(p), &-d, witness_bound)?;
    Ok(NegNrdTranscript { ramified, norm_witness })
}

/// `d` is not represented by the pure norm form over `F_v`: with `Q ≅ (a,b)`,
/// `v(a) = 0`, `v(b) = 1`, the residue of `a` is a non-square while `d` is
/// a local square.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Obstruction {
    pub place: Place,
    pub presentation: QuatPresentation,
    pub residue_symbol_a: i8,
    pub d_local_square: bool,
    /// Set on every obstruction after the first; one suffices.
    pub extra_evidence: bool,
}

pub fn check_not_pure_norm(p: &QuatPresentation, d: &FieldElem, v: &Place) -> Result<Obstruction> {
    let n = normalize_presentation(p, v)?;
    let f = pure_norm_form(&n);
    if local_represents(&f, d, v)?.verdict {
        return Err(Error::LocallyRepresentable(v.to_string()));
    }
    if !v.is_local_square(d)? {
        return Err(Error::NotLocalSquare(format!("{d} at {v}")));
    }
    let precision = hensel_precision_bound(&f, d, v)?;
    if hensel_search(&f, d, v, precision)?.is_some() {
        return Err(Error::OracleDisagreement(format!("{f} represents {d} at {v} by search but not by invariants")));
    }
    let residue_symbol_a = v.residue_symbol(n.a())?;
    Ok(Obstruction { place: v.clone(), presentation: n, residue_symbol_a, d_local_square: true, extra_evidence: false })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(s: &str) -> FieldElem {
        s.parse().unwrap()
    }

    fn v(s: &str) -> Place {
        s.parse().unwrap()
    }

    fn pres(a: &str, b: &str) -> QuatPresentation {
        QuatPresentation::new(e(a), e(b)).unwrap()
    }

    fn sigma(s: &[&str]) -> RamificationSet {
        RamificationSet::new(s.iter().map(|x| v(x)).collect()).unwrap()
    }

    #[test]
    fn d_search() {
        let c = find_d(&Field::Gaussian, &sigma(&["2+i", "2-i"]), 100).unwrap();
        assert_eq!(c.d, e("6"));
        assert_eq!(c.witness_place, Some(v("3")));
        assert!(c.local_squares.iter().all(|f| f.verify(&c.d).unwrap()));
        assert_eq!(find_d(&Field::Gaussian, &RamificationSet::default(), 100).unwrap_err(), Error::EmptySigma);
        let f = Field::function_field(5).unwrap();
        let c = find_d(&f, &sigma(&["t@5", "t-1@5"]), 4).unwrap();
        assert!(!c.d.is_global_square().unwrap());
        assert!(c.local_squares.iter().all(|f| f.verify(&c.d).unwrap()));
    }

    #[test]
    fn normalization() {
        let p = normalize_presentation(&pres("5", "2"), &v("2+i")).unwrap();
        assert_eq!(p, pres("2", "5"));
        let p = normalize_presentation(&pres("2", "125"), &v("2+i")).unwrap();
        assert_eq!(p, pres("2", "5"));
        let p = normalize_presentation(&pres("5", "10"), &v("2+i")).unwrap();
        assert_eq!(p, pres("-6+8i", "10"));
        assert_eq!(normalize_presentation(&pres("2", "5"), &v("3")), Err(Error::NotRamified("3".into())));
        assert_eq!(normalize_presentation(&pres("2", "5"), &v("1+i")), Err(Error::DyadicPlace));
    }

    #[test]
    fn neg_nrd() {
        let t = check_neg_nrd(&pres("2", "5"), &e("6"), 6).unwrap();
        assert_eq!(t.ramified.len(), 2);
        assert!(t.ramified.iter().all(|f| f.verify(&e("6")).unwrap()));
        let x = t.norm_witness.unwrap();
        assert_eq!(full_norm_form(&pres("2", "5")).evaluate(&x).unwrap(), e("-6"));
        assert!(check_neg_nrd(&pres("2", "5"), &e("-1"), 3).unwrap().norm_witness.is_some());
        assert!(check_neg_nrd(&pres("2", "5"), &e("-9"), 3).unwrap().norm_witness.is_some());
        assert!(matches!(check_neg_nrd(&pres("2", "5"), &e("2"), 3), Err(Error::NotLocalSquare(_))));
    }

    #[test]
    fn obstructions() {
        for place in ["2+i", "2-i"] {
            let o = check_not_pure_norm(&pres("2", "5"), &e("6"), &v(place)).unwrap();
            assert_eq!(o.presentation, pres("2", "5"));
            assert_eq!(o.residue_symbol_a, -1);
        }
        assert_eq!(
            check_not_pure_norm(&pres("2", "5"), &e("3"), &v("2+i")),
            Err(Error::LocallyRepresentable("2+i".into()))
        );
        let form = pure_norm_form(&pres("2", "5"));
        assert_eq!(global_search(&form, &e("6"), 30).unwrap(), None);
    }
}
