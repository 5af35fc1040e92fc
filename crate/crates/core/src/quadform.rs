//! Diagonal quadratic forms: quaternion norm forms, local representation
//! (by invariants and by Hensel search), and bounded global search.

use std::fmt;

use crate::enumerate::{layer, list_size, Budget, Layer, MAX_MATERIALIZED};
use crate::error::{Error, Result};
use crate::field::{Field, FieldElem};
use crate::hilbert::{hilbert, QuatPresentation};
use crate::local::{isotropic_vector, local_val, scaled_coefficients, LocalRing};
use crate::place::Place;
use crate::ring::RingElem;

const GLOBAL_SEARCH_BUDGET: u64 = 1_000_000;

/// `c_1 x_1^2 + ... + c_k x_k^2` with `k ∈ {3, 4}`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DiagForm {
    coeffs: Vec<FieldElem>,
}

impl DiagForm {
    pub fn new(coeffs: Vec<FieldElem>) -> Result<Self> {
        if !(3..=4).contains(&coeffs.len()) {
            return Err(Error::InvalidForm(format!("{} coefficients, expected 3 or 4", coeffs.len())));
        }
        if coeffs.iter().any(FieldElem::is_zero) {
            return Err(Error::InvalidForm("zero coefficient".into()));
        }
        let field = coeffs[0].field();
        for c in &coeffs {
            field.check(c)?;
        }
        Ok(DiagForm { coeffs })
    }

    /// Comma-separated coefficients, e.g. `-2,-5,10`.
    pub fn parse(s: &str, field: &Field) -> Result<Self> {
        Self::new(s.split(',').map(|c| field.parse_elem(c.trim())).collect::<Result<_>>()?)
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn field(&self) -> Field {
        self.coeffs[0].field()
    }

    pub fn evaluate(&self, x: &[FieldElem]) -> Result<FieldElem> {
        if x.len() != self.dim() {
            return Err(Error::InvalidForm(format!(
                "vector of length {} for a form of dimension {}",
                x.len(),
                self.dim()
            )));
        }
        let mut acc = self.field().zero();
        for (c, xi) in self.coeffs.iter().zip(x) {
            self.field().check(xi)?;
            acc = &acc + &(c * &xi.square());
        }
        Ok(acc)
    }
}

impl fmt::Display for DiagForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.coeffs.iter().map(FieldElem::to_string).collect();
        write!(f, "<{}>", c.join(", "))
    }
}

/// `Nrd(xI + yJ + zK) = -a x^2 - b y^2 + ab z^2`
pub fn pure_norm_form(p: &QuatPresentation) -> DiagForm {
    let (a, b) = (p.a(), p.b());
    DiagForm { coeffs: vec![-a, -b, a * b] }
}

/// `Nrd(w + xI + yJ + zK) = w^2 - a x^2 - b y^2 + ab z^2`
pub fn full_norm_form(p: &QuatPresentation) -> DiagForm {
    let (a, b) = (p.a(), p.b());
    DiagForm { coeffs: vec![p.field().one(), -a, -b, a * b] }
}

/// A Hilbert symbol value used as evidence.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SymbolFact {
    pub a: FieldElem,
    pub b: FieldElem,
    pub value: i8,
}

/// The classical invariants of `<a_1, ..., a_m>` at a place: discriminant
/// `∏ a_i`, Hasse invariant `∏_{i<j} (a_i, a_j)`, and the reference symbol
/// it is compared with (`(-1,-1)` in rank 4, `(-1,-disc)` in rank 3).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct InvariantFacts {
    pub coeffs: Vec<FieldElem>,
    pub discriminant: FieldElem,
    pub discriminant_square: bool,
    pub symbols: Vec<SymbolFact>,
    pub hasse: i8,
    pub reference: i8,
}

impl InvariantFacts {
    pub fn compute(coeffs: &[FieldElem], v: &Place) -> Result<Self> {
        if coeffs.len() < 3 {
            return Err(Error::InvalidForm("invariants are used from rank 3 on".into()));
        }
        let field = v.field();
        let discriminant = coeffs.iter().fold(field.one(), |acc, c| &acc * c);
        let discriminant_square = v.is_local_square(&discriminant)?;
        let mut symbols = Vec::new();
        for (i, a) in coeffs.iter().enumerate() {
            for b in &coeffs[i + 1..] {
                symbols.push(SymbolFact { a: a.clone(), b: b.clone(), value: hilbert(a, b, v)? });
            }
        }
        let hasse = symbols.iter().map(|s| s.value).product();
        let minus_one = -&field.one();
        let reference = match coeffs.len() {
            3 => hilbert(&minus_one, &-&discriminant, v)?,
            _ => hilbert(&minus_one, &minus_one, v)?,
        };
        Ok(InvariantFacts { coeffs: coeffs.to_vec(), discriminant, discriminant_square, symbols, hasse, reference })
    }

    /// Whether the form is isotropic, read off the invariants.
    pub fn isotropic(&self) -> bool {
        match self.coeffs.len() {
            3 => self.hasse == self.reference,
            4 => !self.discriminant_square || self.hasse == self.reference,
            _ => true,
        }
    }
}

/// A primitive zero of `Σ c_j x_j^2` modulo `π^precision`, where the `c_j`
/// are the scaled local coefficients (see `LocalSolution::coefficients`).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LocalSolution {
    pub precision: u32,
    /// Coefficients in the local picture, multiplied by even powers of the
    /// local prime so that each has valuation 0 or 1.
    pub coefficients: Vec<FieldElem>,
    pub vector: Vec<RingElem>,
}

impl LocalSolution {
    /// The congruence holds and some coordinate is a unit.
    pub fn recheck(&self, v: &Place) -> Result<bool> {
        if self.vector.len() != self.coefficients.len() {
            return Ok(false);
        }
        let ring = LocalRing::new(v, self.precision);
        let mut acc = v.local_prime().zero_like();
        for (c, x) in self.coefficients.iter().zip(&self.vector) {
            acc = &acc + &(&ring.reduce_field(c, self.precision)? * &(x * x));
        }
        Ok(ring.is_zero_mod(&acc, self.precision) && self.vector.iter().any(|x| !ring.is_zero_mod(x, 1)))
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Evidence {
    Solution(LocalSolution),
    Obstruction(InvariantFacts),
}

/// Whether a form represents `d` over `F_v`, with evidence.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LocalSolvability {
    pub place: Place,
    pub verdict: bool,
    pub evidence: Evidence,
}

impl LocalSolvability {
    /// Recomputes the evidence for `(f, d)` from scratch.
    pub fn recheck(&self, f: &DiagForm, d: &FieldElem) -> Result<bool> {
        let v = &self.place;
        let coeffs = with_target(f, d)?;
        Ok(match (&self.evidence, self.verdict) {
            (Evidence::Solution(s), true) => s.coefficients == scaled_coefficients(&coeffs, v)? && s.recheck(v)?,
            (Evidence::Obstruction(facts), false) => {
                *facts == InvariantFacts::compute(&coeffs, v)? && !facts.isotropic()
            }
            _ => false,
        })
    }
}

/// `<c_1, ..., c_k, -d>`
fn with_target(f: &DiagForm, d: &FieldElem) -> Result<Vec<FieldElem>> {
    if d.is_zero() {
        return Err(Error::ZeroInput);
    }
    f.field().check(d)?;
    let mut coeffs = f.coeffs().to_vec();
    coeffs.push(-d);
    Ok(coeffs)
}

/// `2 v(4 ∏ c_i d) + 3` on the scaled coefficients.
pub fn hensel_precision_bound(f: &DiagForm, d: &FieldElem, v: &Place) -> Result<u32> {
    let coeffs = scaled_coefficients(&with_target(f, d)?, v)?;
    let pi = v.local_prime();
    let val: i64 = coeffs.iter().map(|c| local_val(c, &pi)).sum::<i64>() + 2 * i64::from(v.two_valuation());
    Ok((2 * val + 3) as u32)
}

/// Exhaustive search for a primitive solution of `f(x) = d s^2` modulo
/// `π^precision` (the last coordinate is `s`).
pub fn hensel_search(f: &DiagForm, d: &FieldElem, v: &Place, precision: u32) -> Result<Option<LocalSolution>> {
    if v.field() != f.field() {
        return Err(Error::FieldMismatch);
    }
    let required = hensel_precision_bound(f, d, v)?;
    if precision < required {
        return Err(Error::PrecisionTooLow { required, given: precision });
    }
    let coefficients = scaled_coefficients(&with_target(f, d)?, v)?;
    Ok(isotropic_vector(&coefficients, v, precision)?.map(|vector| LocalSolution { precision, coefficients, vector }))
}

/// Whether `f` represents `d` over `F_v`: isotropy of `<c_1, ..., c_k, -d>`
/// by local invariants. A positive verdict carries a Hensel solution at
/// the precision bound; the two methods must agree.
pub fn local_represents(f: &DiagForm, d: &FieldElem, v: &Place) -> Result<LocalSolvability> {
    if v.field() != f.field() {
        return Err(Error::FieldMismatch);
    }
    let facts = InvariantFacts::compute(&with_target(f, d)?, v)?;
    if !facts.isotropic() {
        return Ok(LocalSolvability { place: v.clone(), verdict: false, evidence: Evidence::Obstruction(facts) });
    }
    let precision = hensel_precision_bound(f, d, v)?;
    match hensel_search(f, d, v, precision)? {
        Some(s) => Ok(LocalSolvability { place: v.clone(), verdict: true, evidence: Evidence::Solution(s) }),
        None => Err(Error::OracleDisagreement(format!("{f} represents {d} at {v} by invariants but not by search"))),
    }
}

/// Deterministic search for `x` with `f(x) = d` exactly. The first `k-1`
/// coordinates run over numerators of height at most `height_bound` over a
/// common denominator of height at most `height_bound` (pairs ordered by
/// maximal height, then lexicographically, rational integers first); the
/// last coordinate is solved for by a square root. `None` is not a proof
/// of non-representability.
pub fn global_search(f: &DiagForm, d: &FieldElem, height_bound: u32) -> Result<Option<Vec<FieldElem>>> {
    let field = f.field();
    field.check(d)?;
    if d.is_zero() {
        return Err(Error::ZeroInput);
    }
    let k = f.dim();
    let (head, last) = f.coeffs().split_at(k - 1);
    let inv_last = last[0].inv()?;
    let mut budget = Budget::new(GLOBAL_SEARCH_BUDGET);
    for which in [Layer::Rational, Layer::Imaginary] {
        for h in 0..=height_bound {
            if list_size(&field, h, which) > MAX_MATERIALIZED {
                break;
            }
            let elems: Vec<(u32, FieldElem)> = (0..=h)
                .flat_map(|j| {
                    let extra = (which == Layer::Imaginary).then(|| layer(&field, j, Layer::Imaginary));
                    layer(&field, j, Layer::Rational).chain(extra.into_iter().flatten()).map(move |x| (j, x))
                })
                .map(|(j, x)| (j, FieldElem::from_ring(x)))
                .collect();
            let dens: Vec<(u32, FieldElem)> = (0..=h)
                .flat_map(|j| layer(&field, j, Layer::Rational).map(move |x| (j, x)))
                .filter(|(_, x)| is_denominator(x))
                .map(|(j, x)| (j, FieldElem::from_ring(x)))
                .collect();
            let imaginary = |x: &FieldElem| x.num().as_gauss().is_some_and(|g| !g.is_rational());
            // terms[j][i] = c_j x_i^2 / c_k
            let terms: Vec<Vec<FieldElem>> =
                head.iter().map(|c| elems.iter().map(|(_, x)| &(c * &x.square()) * &inv_last).collect()).collect();
            for (hd, den) in &dens {
                let target = &(d * &den.square()) * &inv_last;
                let mut idx = vec![0usize; k - 1];
                loop {
                    let top = idx.iter().map(|&i| elems[i].0).max().unwrap_or(0).max(*hd);
                    let has_imaginary = idx.iter().any(|&i| imaginary(&elems[i].1));
                    if top == h && (which == Layer::Rational || has_imaginary) {
                        if !budget.spend() {
                            return Ok(None);
                        }
                        let mut rest = target.clone();
                        for (j, &i) in idx.iter().enumerate() {
                            rest = &rest - &terms[j][i];
                        }
                        if let Some(root) = rest.sqrt() {
                            let mut x: Vec<FieldElem> =
                                idx.iter().map(|&i| elems[i].1.div(den)).collect::<Result<_>>()?;
                            x.push(root.div(den)?);
                            if f.evaluate(&x)? == *d {
                                return Ok(Some(x));
                            }
                        }
                    }
                    if !advance(&mut idx, elems.len()) {
                        break;
                    }
                }
            }
        }
    }
    Ok(None)
}

/// Next index tuple in lexicographic order, last coordinate fastest.
fn advance(idx: &mut [usize], n: usize) -> bool {
    for i in (0..idx.len()).rev() {
        idx[i] += 1;
        if idx[i] < n {
            return true;
        }
        idx[i] = 0;
    }
    false
}

fn is_denominator(x: &RingElem) -> bool {
    match x {
        RingElem::Gauss(g) => g.is_rational() && g.re > 0.into(),
        RingElem::Poly(p) => !p.is_zero() && p.is_monic(),
    }
}
