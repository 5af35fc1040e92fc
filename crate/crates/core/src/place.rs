//! Places of the global field: valuations, residue fields, reductions,
//! residue symbols and local squares.
//!
//! The infinite place of `F_q(t)` is handled through the substitution
//! `t -> 1/t`: [`Place::localize`] maps an element to its image under that
//! substitution, after which the place behaves like the finite place `(t)`.
//! Every local computation goes through `localize` and `local_prime`.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::field::{Field, FieldElem};
use crate::fq::Fq;
use crate::gauss::GaussInt;
use crate::poly::FqPoly;
use crate::residue::{ResidueElem, ResidueField};
use crate::ring::RingElem;

#[derive(Clone, Debug)]
enum Kind {
    Finite(RingElem),
    Infinite(Arc<Fq>),
}

/// A non-archimedean place, identified by its canonical prime.
#[derive(Clone, Debug)]
pub struct Place {
    kind: Kind,
    residue: ResidueField,
}

impl Place {
    /// The place of a prime element; any associate is accepted.
    pub fn new(prime: RingElem) -> Result<Place> {
        if prime.is_zero() || prime.is_unit() || !prime.is_prime() {
            return Err(Error::InvalidPlace(format!("{prime} is not prime")));
        }
        let (_, pi) = prime.canonical_associate()?;
        let residue = match &pi {
            RingElem::Gauss(g) => gaussian_residue_field(g)?,
            RingElem::Poly(p) => ResidueField::new(p.field().clone(), p.clone(), false),
        };
        Ok(Place { kind: Kind::Finite(pi), residue })
    }

    pub fn infinite(field: &Field) -> Result<Place> {
        let fq =
            field.fq().ok_or_else(|| Error::InvalidPlace("Q(i) has no non-archimedean infinite place".into()))?.clone();
        let residue = ResidueField::new(fq.clone(), FqPoly::monomial(&fq, 1), false);
        Ok(Place { kind: Kind::Infinite(fq), residue })
    }

    /// Parses a place in the given field: a prime element or `inf[@q]`.
    pub fn parse(s: &str, field: &Field) -> Result<Place> {
        let body = s.split_once('@').map_or(s, |(b, _)| b);
        if body == "inf" {
            if let Some((_, q)) = s.split_once('@') {
                if field.fq().map(|f| f.order().to_string()) != Some(q.to_string()) {
                    return Err(Error::FieldMismatch);
                }
            }
            return Place::infinite(field);
        }
        let x = field.parse_elem(s)?;
        if !x.is_integral() {
            return Err(Error::InvalidPlace(format!("{s} is not a ring element")));
        }
        Place::new(x.num().clone())
    }

    pub fn field(&self) -> Field {
        match &self.kind {
            Kind::Finite(RingElem::Gauss(_)) => Field::Gaussian,
            Kind::Finite(RingElem::Poly(p)) => Field::FunctionField(p.field().clone()),
            Kind::Infinite(f) => Field::FunctionField(f.clone()),
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self.kind, Kind::Infinite(_))
    }

    /// The canonical prime, `None` for the infinite place.
    pub fn prime(&self) -> Option<&RingElem> {
        match &self.kind {
            Kind::Finite(p) => Some(p),
            Kind::Infinite(_) => None,
        }
    }

    pub fn is_dyadic(&self) -> bool {
        self.residue.characteristic() == 2
    }

    pub fn residue_field(&self) -> &ResidueField {
        &self.residue
    }

    /// `q_v = |κ_v|`.
    pub fn residue_order(&self) -> BigUint {
        self.residue.order()
    }

    pub fn residue_characteristic(&self) -> u64 {
        self.residue.characteristic()
    }

    /// `v(2)`: 2 at the Gaussian place `1+i`, 0 elsewhere.
    pub fn two_valuation(&self) -> u32 {
        if self.is_dyadic() {
            2
        } else {
            0
        }
    }

    /// The prime of the local picture: `π`, or `t` for the infinite place.
    pub fn local_prime(&self) -> RingElem {
        match &self.kind {
            Kind::Finite(p) => p.clone(),
            Kind::Infinite(f) => RingElem::Poly(FqPoly::monomial(f, 1)),
        }
    }

    /// Image of `x` in the local picture (`x(1/t)` at the infinite place).
    pub fn localize(&self, x: &FieldElem) -> FieldElem {
        match &self.kind {
            Kind::Finite(_) => x.clone(),
            Kind::Infinite(_) => {
                let (n, d) = (x.num().as_poly().expect("poly"), x.den().as_poly().expect("poly"));
                let top = n.degree().unwrap_or(0).max(d.degree().unwrap_or(0));
                FieldElem::new(RingElem::Poly(n.reversed(top)), RingElem::Poly(d.reversed(top)))
                    .expect("nonzero denominator")
            }
        }
    }

    /// A global uniformizer: `π`, or `1/t` at the infinite place.
    pub fn uniformizer(&self) -> FieldElem {
        match &self.kind {
            Kind::Finite(p) => FieldElem::from_ring(p.clone()),
            Kind::Infinite(f) => FieldElem::from_poly(FqPoly::monomial(f, 1)).inv().expect("t != 0"),
        }
    }

    fn check_field(&self, x: &FieldElem) -> Result<()> {
        if x.field() == self.field() {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn valuation(&self, x: &FieldElem) -> Result<i64> {
        self.check_field(x)?;
        if x.is_zero() {
            return Err(Error::ZeroInput);
        }
        let y = self.localize(x);
        let pi = self.local_prime();
        Ok(y.num().valuation(&pi) as i64 - y.den().valuation(&pi) as i64)
    }

    /// `x / π^{v(x)}` with the global uniformizer.
    pub fn unit_part(&self, x: &FieldElem) -> Result<FieldElem> {
        let v = self.valuation(x)?;
        Ok(x * &self.uniformizer().pow(-v)?)
    }

    /// Reduction of a local ring element coprime to the local prime.
    pub(crate) fn reduce_ring(&self, r: &RingElem) -> ResidueElem {
        match r {
            RingElem::Gauss(g) => {
                let base = self.residue.base();
                let value = FqPoly::new(base.clone(), vec![base.from_bigint(&g.re), base.from_bigint(&g.im)]);
                self.residue.elem(value)
            }
            RingElem::Poly(p) => self.residue.elem(p.clone()),
        }
    }

    /// A local ring element reducing to `r`.
    pub(crate) fn lift_residue(&self, r: &ResidueElem) -> RingElem {
        match self.local_prime() {
            RingElem::Gauss(_) => RingElem::Gauss(GaussInt::new(r.value().coeff(0), r.value().coeff(1))),
            RingElem::Poly(_) => RingElem::Poly(r.value().clone()),
        }
    }

    /// Image in `κ_v` of an element with `v(x) >= 0`.
    pub(crate) fn reduce_integral(&self, x: &FieldElem) -> Result<ResidueElem> {
        let v = self.valuation(x)?;
        if v < 0 {
            return Err(Error::NonUnit(v));
        }
        if v > 0 {
            return Ok(self.residue.zero());
        }
        let y = self.localize(x);
        let pi = self.local_prime();
        let k = y.den().valuation(&pi);
        let pk = pi.pow(k);
        let n = y.num().div_exact(&pk).expect("valuation zero");
        let d = y.den().div_exact(&pk).expect("valuation counted");
        let inv = self.residue.inv(&self.reduce_ring(&d)).expect("unit denominator");
        Ok(self.residue.mul(&self.reduce_ring(&n), &inv))
    }

    /// Image in `κ_v` of a `v`-unit.
    pub fn reduce(&self, x: &FieldElem) -> Result<ResidueElem> {
        let v = self.valuation(x)?;
        if v != 0 {
            return Err(Error::NonUnit(v));
        }
        self.reduce_integral(x)
    }

    /// Legendre symbol of a `v`-unit at an odd place.
    pub fn residue_symbol(&self, x: &FieldElem) -> Result<i8> {
        if self.is_dyadic() {
            return Err(Error::DyadicPlace);
        }
        let r = self.reduce(x)?;
        Ok(self.residue.quadratic_character(&r))
    }

    /// Whether `x` is a square in the completion `F_v`.
    pub fn is_local_square(&self, x: &FieldElem) -> Result<bool> {
        let v = self.valuation(x)?;
        if v % 2 != 0 {
            return Ok(false);
        }
        let u = self.unit_part(x)?;
        if self.is_dyadic() {
            Ok(crate::local::unit_sqrt(&u, self)?.is_some())
        } else {
            Ok(self.residue_symbol(&u)? == 1)
        }
    }

    fn sort_key_cmp(&self, other: &Place) -> Ordering {
        match (&self.kind, &other.kind) {
            (Kind::Finite(a), Kind::Finite(b)) => match (a, b) {
                (RingElem::Gauss(_), RingElem::Poly(_)) => Ordering::Less,
                (RingElem::Poly(_), RingElem::Gauss(_)) => Ordering::Greater,
                (RingElem::Poly(x), RingElem::Poly(y)) if x.field() != y.field() => {
                    x.field().order().cmp(&y.field().order())
                }
                _ => a.canonical_cmp(b),
            },
            (Kind::Finite(_), Kind::Infinite(_)) => Ordering::Less,
            (Kind::Infinite(_), Kind::Finite(_)) => Ordering::Greater,
            (Kind::Infinite(a), Kind::Infinite(b)) => a.order().cmp(&b.order()),
        }
    }
}

fn gaussian_residue_field(pi: &GaussInt) -> Result<ResidueField> {
    let norm = pi.norm().to_u64().ok_or_else(|| Error::TooLarge(format!("norm of {pi}")))?;
    if pi.is_rational() {
        // inert p ≡ 3 mod 4: κ = F_p[i] = F_p[T]/(T^2 + 1)
        let p = pi.re.to_u64().expect("fits");
        let base = Arc::new(Fq::new(p)?);
        let modulus = FqPoly::new(base.clone(), vec![1, 0, 1]);
        return Ok(ResidueField::new(base, modulus, true));
    }
    // degree one: π = c + d i ≡ 0 gives i ≡ -c/d (mod p)
    let base = Arc::new(Fq::new(norm)?);
    let c = base.from_bigint(&pi.re);
    let d = base.from_bigint(&pi.im);
    let r = base.neg(base.mul(c, base.inv(d).expect("d is a unit mod p")));
    let modulus = FqPoly::new(base.clone(), vec![base.neg(r), 1]);
    Ok(ResidueField::new(base, modulus, false))
}

impl PartialEq for Place {
    fn eq(&self, other: &Self) -> bool {
        self.sort_key_cmp(other) == Ordering::Equal
    }
}

impl Eq for Place {}

impl Hash for Place {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match &self.kind {
            Kind::Finite(p) => p.hash(state),
            Kind::Infinite(f) => f.order().hash(state),
        }
    }
}

impl PartialOrd for Place {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Place {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key_cmp(other)
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            Kind::Finite(RingElem::Gauss(g)) => write!(f, "{g}"),
            Kind::Finite(RingElem::Poly(p)) => write!(f, "{p}@{}", p.field().order()),
            Kind::Infinite(fq) => write!(f, "inf@{}", fq.order()),
        }
    }
}

impl FromStr for Place {
    type Err = Error;
    fn from_str(s: &str) -> Result<Place> {
        let field = match s.rsplit_once('@') {
            Some((_, q)) => Field::function_field(q.parse().map_err(|_| Error::Parse(format!("bad place '{s}'")))?)?,
            None => Field::Gaussian,
        };
        Place::parse(s, &field)
    }
}

/// The finite places where `x` has nonzero valuation, in canonical order.
pub fn places_dividing(x: &FieldElem) -> Result<Vec<Place>> {
    if x.is_zero() {
        return Err(Error::ZeroInput);
    }
    let mut out = Vec::new();
    for part in [x.num(), x.den()] {
        for (p, _) in part.factor()?.primes {
            out.push(Place::new(p)?);
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> FieldElem {
        s.parse().unwrap()
    }

    fn place(s: &str) -> Place {
        s.parse().unwrap()
    }

    #[test]
    fn valuations() {
        assert_eq!(place("2+i").valuation(&q("5")).unwrap(), 1);
        assert_eq!(place("2+i").valuation(&q("6")).unwrap(), 0);
        assert_eq!(place("1+i").valuation(&q("2")).unwrap(), 2);
        assert_eq!(place("3").valuation(&q("1/9")).unwrap(), -2);
        assert_eq!(place("2+i").valuation(&q("0")), Err(Error::ZeroInput));
        assert_eq!(place("inf@5").valuation(&q("t^3+1@5")).unwrap(), -3);
        assert_eq!(place("inf@5").valuation(&q("t/(t^2+1)@5")).unwrap(), 1);
        assert_eq!(place("t@5").valuation(&q("t^2+t@5")).unwrap(), 1);
    }

    #[test]
    fn associates_name_the_same_place() {
        assert_eq!(place("2-i"), place("1+2i"));
        assert_eq!(place("2-i").to_string(), "1+2i");
        assert_eq!(place("-3"), place("3"));
        assert!("5".parse::<Place>().is_err());
        assert!("1".parse::<Place>().is_err());
        assert!("t^2+1@5".parse::<Place>().is_err());
    }

    #[test]
    fn reductions() {
        let v = place("2+i");
        assert_eq!(v.reduce(&q("6")).unwrap().to_string(), "1");
        assert_eq!(v.reduce(&q("i")).unwrap().to_string(), "3");
        assert_eq!(v.reduce(&q("1")).unwrap().to_string(), "1");
        assert_eq!(v.reduce(&q("5")), Err(Error::NonUnit(1)));
        assert_eq!(place("3").reduce(&q("4+5i")).unwrap().to_string(), "1+2i");
        // 1/(2-i) at 2+i: 2-i ≡ 2-3 = -1
        assert_eq!(v.reduce(&q("2+i/5")).unwrap().to_string(), "4");
        assert_eq!(place("inf@5").reduce(&q("(3t^2+1)/(t^2+t)@5")).unwrap().to_string(), "3");
    }

    #[test]
    fn residue_symbols() {
        let v = place("2+i");
        assert_eq!(v.residue_symbol(&q("2")).unwrap(), -1);
        assert_eq!(v.residue_symbol(&q("6")).unwrap(), 1);
        assert_eq!(v.residue_symbol(&q("4")).unwrap(), 1);
        assert_eq!(place("1+i").residue_symbol(&q("3")), Err(Error::DyadicPlace));
        assert_eq!(v.residue_symbol(&q("5")), Err(Error::NonUnit(1)));
    }

    #[test]
    fn local_squares() {
        assert!(place("2+i").is_local_square(&q("6")).unwrap());
        assert!(place("1+2i").is_local_square(&q("6")).unwrap());
        assert!(!place("2+i").is_local_square(&q("5")).unwrap());
        assert!(place("1+i").is_local_square(&q("-1")).unwrap());
        assert!(!place("1+i").is_local_square(&q("3")).unwrap());
        assert!(place("1+i").is_local_square(&q("2i")).unwrap());
        assert!(place("3").is_local_square(&q("2")).unwrap());
        assert!(!place("inf@5").is_local_square(&q("t@5")).unwrap());
        assert!(place("inf@5").is_local_square(&q("t^2+t@5")).unwrap());
    }

    #[test]
    fn support() {
        let names = |s: &str| places_dividing(&q(s)).unwrap().iter().map(|p| p.to_string()).collect::<Vec<_>>();
        assert_eq!(names("10"), ["1+i", "1+2i", "2+i"]);
        assert_eq!(names("1"), Vec::<String>::new());
        assert_eq!(names("6"), ["1+i", "3"]);
        assert_eq!(names("7/3"), ["3", "7"]);
        assert_eq!(names("(t^2+t)/(t+2)@5"), ["t@5", "t+1@5", "t+2@5"]);
    }
}
