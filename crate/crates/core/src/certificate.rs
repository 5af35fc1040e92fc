//! Witness certificates: building, independent verification, the catalog
//! over `n`, and the JSON file format.
//!
//! A certificate records a quaternion algebra `Q = (a,b)`, its ramification
//! set `sigma`, an element `d`, and transcripts showing that `d` is not a
//! square, `d ∈ -Nrd(Q)`, and `d` is not the reduced norm of a pure
//! quaternion. The group data (`M_n(Q)`, type `D_n`, transcendence degree
//! bound `3n+4`) is descriptive metadata.

use std::fmt;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, FieldElem};
use crate::hilbert::{presentation_from_ramification, ramification_set, QuatPresentation, RamificationSet};
use crate::place::Place;
use crate::quadform::{full_norm_form, hensel_precision_bound, hensel_search, local_represents, pure_norm_form};
use crate::witness::{
    check_neg_nrd, check_not_pure_norm, find_d, normalize_presentation, odd_valuation_place, LocalSquareFact,
    NegNormFact, NegNrdTranscript, Obstruction,
};

pub const FORMAT_VERSION: u32 = 1;

/// Search bounds for [`build_witness`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    /// Height bound for the presentation and `d` searches.
    pub height: u32,
    /// Height bound for the explicit norm witness of `-d`.
    pub witness_height: u32,
}

impl Bounds {
    pub fn new(height: u32) -> Self {
        Bounds { height, witness_height: height.min(8) }
    }
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds::new(100)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GroupDescriptor {
    pub n: i64,
    pub algebra: String,
    pub discriminant: FieldElem,
    pub group_type: String,
    pub trdeg_bound: i64,
}

impl GroupDescriptor {
    pub fn new(n: i64, d: &FieldElem) -> Result<Self> {
        check_n(n)?;
        Ok(GroupDescriptor {
            n,
            algebra: format!("M_{n}(Q)"),
            discriminant: d.clone(),
            group_type: format!("D_{n}"),
            trdeg_bound: 3 * n + 4,
        })
    }
}

fn check_n(n: i64) -> Result<()> {
    if n < 3 || n % 2 == 0 {
        return Err(Error::InvalidN(n));
    }
    Ok(())
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DTranscript {
    pub witness_place: Option<Place>,
    pub local_squares: Vec<LocalSquareFact>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WitnessCertificate {
    pub version: u32,
    pub field: Field,
    /// As recorded; [`verify_certificate`] checks parity and order.
    pub sigma: Vec<Place>,
    pub presentation: QuatPresentation,
    pub d: FieldElem,
    pub d_transcript: DTranscript,
    pub neg_nrd: NegNrdTranscript,
    pub obstructions: Vec<Obstruction>,
    pub group: GroupDescriptor,
}

fn odd_places(sigma: &[Place]) -> Vec<Place> {
    sigma.iter().filter(|v| !v.is_dyadic()).cloned().collect()
}

fn validate_sigma(field: &Field, sigma: &[Place]) -> Result<RamificationSet> {
    if sigma.iter().any(|v| v.field() != *field) {
        return Err(Error::FieldMismatch);
    }
    let set = RamificationSet::new(sigma.to_vec())?;
    if set.is_empty() {
        return Err(Error::EmptySigma);
    }
    if odd_places(set.places()).is_empty() {
        return Err(Error::NoOddPlace);
    }
    Ok(set)
}

/// The arithmetic part of a certificate, shared by every `n`.
fn build_core(field: &Field, sigma: &[Place], bounds: Bounds) -> Result<WitnessCertificate> {
    let set = validate_sigma(field, sigma)?;
    let presentation = presentation_from_ramification(field, set.places(), bounds.height)?;
    let candidate = find_d(field, &set, bounds.height)?;
    let d = candidate.d;
    let neg_nrd = check_neg_nrd(&presentation, &d, bounds.witness_height)?;
    let mut obstructions = Vec::new();
    for (i, v) in odd_places(set.places()).iter().enumerate() {
        let mut o = check_not_pure_norm(&presentation, &d, v)?;
        o.extra_evidence = i > 0;
        obstructions.push(o);
    }
    Ok(WitnessCertificate {
        version: FORMAT_VERSION,
        field: field.clone(),
        sigma: set.places().to_vec(),
        presentation,
        group: GroupDescriptor::new(3, &d)?,
        d_transcript: DTranscript { witness_place: candidate.witness_place, local_squares: candidate.local_squares },
        d,
        neg_nrd,
        obstructions,
    })
}

/// Builds a certificate for the algebra ramified at `sigma` and `M_n(Q)`.
pub fn build_witness(field: &Field, sigma: &[Place], n: i64, bounds: Bounds) -> Result<WitnessCertificate> {
    check_n(n)?;
    let mut cert = build_core(field, sigma, bounds)?;
    cert.group = GroupDescriptor::new(n, &cert.d)?;
    Ok(cert)
}

/// One certificate per `n`, sharing the arithmetic.
pub fn catalog(ns: &[i64], field: &Field, sigma: &[Place], bounds: Bounds) -> Result<Vec<WitnessCertificate>> {
    for &n in ns {
        check_n(n)?;
    }
    let core = build_core(field, sigma, bounds)?;
    ns.iter()
        .map(|&n| {
            let mut c = core.clone();
            c.group = GroupDescriptor::new(n, &c.d)?;
            Ok(c)
        })
        .collect()
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub passed: bool,
    pub checks: Vec<CheckResult>,
    pub elapsed: Duration,
}

impl VerifyReport {
    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            if c.detail.is_empty() {
                writeln!(f, "{tag} {}", c.name)?;
            } else {
                writeln!(f, "{tag} {}: {}", c.name, c.detail)?;
            }
        }
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "overall: {verdict} ({} checks, {:.3}s)", self.checks.len(), self.elapsed.as_secs_f64())
    }
}

struct Checks(Vec<CheckResult>);

impl Checks {
    fn add(&mut self, name: impl Into<String>, outcome: Result<(bool, String)>) {
        let (passed, detail) = outcome.unwrap_or_else(|e| (false, e.to_string()));
        self.0.push(CheckResult { name: name.into(), passed, detail });
    }
}

fn describe<T: fmt::Display>(x: &[T]) -> String {
    x.iter().map(T::to_string).collect::<Vec<_>>().join(", ")
}

/// Rederives every claim of the certificate from `(a, b, d, sigma, n)`.
pub fn verify_certificate(cert: &WitnessCertificate) -> VerifyReport {
    let start = Instant::now();
    let mut checks = Checks(Vec::new());
    let (p, d, sigma) = (&cert.presentation, &cert.d, &cert.sigma);

    checks.add("version", Ok((cert.version == FORMAT_VERSION, format!("{}", cert.version))));
    checks.add(
        "field",
        Ok((
            p.field() == cert.field && d.field() == cert.field && sigma.iter().all(|v| v.field() == cert.field),
            cert.field.to_string(),
        )),
    );
    checks.add("even cardinality", Ok((sigma.len() % 2 == 0, format!("|sigma| = {}", sigma.len()))));
    checks.add("sigma canonical order", Ok((sigma.windows(2).all(|w| w[0] < w[1]), describe(sigma))));
    let odd = odd_places(sigma);
    checks.add("sigma has odd place", Ok((!odd.is_empty(), describe(&odd))));
    checks.add(
        "ramification set",
        ramification_set(p).map(|r| (r.places() == sigma.as_slice(), format!("{p} ramified at {r}"))),
    );
    checks.add("d not a global square", d.is_global_square().map(|sq| (!sq && !d.is_zero(), format!("d = {d}"))));
    checks.add(
        "d odd-valuation place",
        odd_valuation_place(d).map(|w| {
            let shown = w.as_ref().map_or("none".to_string(), Place::to_string);
            (w == cert.d_transcript.witness_place, shown)
        }),
    );
    for v in sigma {
        checks.add(format!("d local square at {v}"), local_square(d, v));
    }
    let squares = &cert.d_transcript.local_squares;
    checks.add(
        "d local square transcripts",
        (|| {
            let places_match = squares.iter().map(|f| &f.place).eq(sigma.iter());
            let mut all = places_match;
            for f in squares {
                all &= f.verify(d)?;
            }
            Ok((all, format!("{} entries", squares.len())))
        })(),
    );
    let ramified = &cert.neg_nrd.ramified;
    checks.add(
        "-d norm transcripts cover sigma",
        Ok((ramified.iter().map(|f| &f.place).eq(sigma.iter()), String::new())),
    );
    for f in ramified {
        checks
            .add(format!("-d local norm at {}", f.place), f.verify(d).map(|ok| (ok, format!("-d = ({})^2", f.scalar))));
    }
    if let Some(x) = &cert.neg_nrd.norm_witness {
        checks.add(
            "explicit norm witness",
            full_norm_form(p).evaluate(x).map(|y| (y == -d, format!("Nrd({}) = {y}", describe(x)))),
        );
    }
    let covered: Vec<Place> = cert.obstructions.iter().map(|o| o.place.clone()).collect();
    checks.add("obstructions cover odd places", Ok((covered == odd, describe(&covered))));
    for (i, o) in cert.obstructions.iter().enumerate() {
        checks.add(format!("obstruction at {}", o.place), verify_obstruction(p, d, sigma, o, i));
    }
    let g = &cert.group;
    checks.add(
        "group descriptor",
        Ok((
            check_n(g.n).is_ok()
                && g.algebra == format!("M_{}(Q)", g.n)
                && g.group_type == format!("D_{}", g.n)
                && g.discriminant == *d,
            format!("n = {}, {}, type {}, disc {}", g.n, g.algebra, g.group_type, g.discriminant),
        )),
    );
    checks.add("trdeg bound", Ok((g.trdeg_bound == 3 * g.n + 4, format!("{} = 3*{}+4", g.trdeg_bound, g.n))));

    let checks = checks.0;
    VerifyReport { passed: checks.iter().all(|c| c.passed), checks, elapsed: start.elapsed() }
}

fn local_square(d: &FieldElem, v: &Place) -> Result<(bool, String)> {
    let val = v.valuation(d)?;
    Ok((v.is_local_square(d)?, format!("v(d) = {val}")))
}

fn verify_obstruction(
    p: &QuatPresentation,
    d: &FieldElem,
    sigma: &[Place],
    o: &Obstruction,
    i: usize,
) -> Result<(bool, String)> {
    let v = &o.place;
    if !sigma.contains(v) || v.is_dyadic() {
        return Ok((false, "not an odd place of sigma".into()));
    }
    let n = &o.presentation;
    let normalized = normalize_presentation(p, v)?;
    if *n != normalized {
        return Ok((false, format!("recorded {n}, normalization gives {normalized}")));
    }
    let (va, vb) = (v.valuation(n.a())?, v.valuation(n.b())?);
    let chi = v.residue_symbol(n.a())?;
    let square = v.is_local_square(d)?;
    let f = pure_norm_form(n);
    let local = local_represents(&f, d, v)?;
    let local_ok = !local.verdict && local.recheck(&f, d)?;
    let precision = hensel_precision_bound(&f, d, v)?;
    let search_absent = hensel_search(&f, d, v, precision)?.is_none();
    let ok = (va, vb) == (0, 1)
        && chi == -1
        && o.residue_symbol_a == chi
        && square
        && o.d_local_square
        && local_ok
        && search_absent
        && o.extra_evidence == (i > 0);
    Ok((
        ok,
        format!(
            "{n}: v(a) = {va}, v(b) = {vb}, residue symbol of a = {chi}, d local square = {square}, {f} represents d: invariants {}, search to precision {precision} {}",
            local.verdict,
            if search_absent { "absent" } else { "found" }
        ),
    ))
}

// ---- file format ----

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCertificate {
    version: u32,
    field: String,
    sigma: Vec<String>,
    presentation: RawPresentation,
    d: String,
    d_transcript: RawDTranscript,
    neg_nrd: RawNegNrd,
    obstructions: Vec<RawObstruction>,
    group: RawGroup,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPresentation {
    a: String,
    b: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDTranscript {
    witness_place: Option<String>,
    local_squares: Vec<RawLocalSquare>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLocalSquare {
    place: String,
    valuation: i64,
    root: String,
    precision: u32,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNegNrd {
    ramified: Vec<RawNegNorm>,
    norm_witness: Option<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNegNorm {
    place: String,
    scalar: String,
    precision: u32,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawObstruction {
    place: String,
    presentation: RawPresentation,
    residue_symbol_a: i8,
    d_local_square: bool,
    extra_evidence: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGroup {
    n: i64,
    algebra: String,
    discriminant: String,
    #[serde(rename = "type")]
    group_type: String,
    trdeg_bound: i64,
}

fn raw_presentation(p: &QuatPresentation) -> RawPresentation {
    RawPresentation { a: p.a().to_string(), b: p.b().to_string() }
}

/// Pretty-printed JSON, newline-terminated.
pub fn encode(cert: &WitnessCertificate) -> String {
    let raw = RawCertificate {
        version: cert.version,
        field: cert.field.to_string(),
        sigma: cert.sigma.iter().map(Place::to_string).collect(),
        presentation: raw_presentation(&cert.presentation),
        d: cert.d.to_string(),
        d_transcript: RawDTranscript {
            witness_place: cert.d_transcript.witness_place.as_ref().map(Place::to_string),
            local_squares: cert
                .d_transcript
                .local_squares
                .iter()
                .map(|f| RawLocalSquare {
                    place: f.place.to_string(),
                    valuation: f.valuation,
                    root: f.root.to_string(),
                    precision: f.precision,
                })
                .collect(),
        },
        neg_nrd: RawNegNrd {
            ramified: cert
                .neg_nrd
                .ramified
                .iter()
                .map(|f| RawNegNorm {
                    place: f.place.to_string(),
                    scalar: f.scalar.to_string(),
                    precision: f.precision,
                })
                .collect(),
            norm_witness: cert.neg_nrd.norm_witness.as_ref().map(|x| x.iter().map(FieldElem::to_string).collect()),
        },
        obstructions: cert
            .obstructions
            .iter()
            .map(|o| RawObstruction {
                place: o.place.to_string(),
                presentation: raw_presentation(&o.presentation),
                residue_symbol_a: o.residue_symbol_a,
                d_local_square: o.d_local_square,
                extra_evidence: o.extra_evidence,
            })
            .collect(),
        group: RawGroup {
            n: cert.group.n,
            algebra: cert.group.algebra.clone(),
            discriminant: cert.group.discriminant.to_string(),
            group_type: cert.group.group_type.clone(),
            trdeg_bound: cert.group.trdeg_bound,
        },
    };
    let mut s = serde_json::to_string_pretty(&raw).expect("serializable");
    s.push('\n');
    s
}

/// Parses a certificate file. The version is checked before anything else;
/// unknown fields and element strings outside the grammar are errors.
pub fn decode(text: &str) -> Result<WitnessCertificate> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
    let version = value
        .get("version")
        .and_then(serde_json::Value::as_u64)
        .ok_or_else(|| Error::Malformed("missing or non-integer version".into()))?;
    if version != u64::from(FORMAT_VERSION) {
        return Err(Error::Version { found: version.try_into().unwrap_or(u32::MAX), expected: FORMAT_VERSION });
    }
    let raw: RawCertificate = serde_json::from_value(value).map_err(|e| Error::Malformed(e.to_string()))?;
    let field: Field = raw.field.parse()?;
    let elem = |s: &str| field.parse_elem(s);
    let place = |s: &str| Place::parse(s, &field);
    let presentation = |r: &RawPresentation| QuatPresentation::new(elem(&r.a)?, elem(&r.b)?);
    Ok(WitnessCertificate {
        version: raw.version,
        sigma: raw.sigma.iter().map(|s| place(s)).collect::<Result<_>>()?,
        presentation: presentation(&raw.presentation)?,
        d: elem(&raw.d)?,
        d_transcript: DTranscript {
            witness_place: raw.d_transcript.witness_place.as_deref().map(place).transpose()?,
            local_squares: raw
                .d_transcript
                .local_squares
                .iter()
                .map(|f| {
                    Ok(LocalSquareFact {
                        place: place(&f.place)?,
                        valuation: f.valuation,
                        root: elem(&f.root)?,
                        precision: f.precision,
                    })
                })
                .collect::<Result<_>>()?,
        },
        neg_nrd: NegNrdTranscript {
            ramified: raw
                .neg_nrd
                .ramified
                .iter()
                .map(|f| Ok(NegNormFact { place: place(&f.place)?, scalar: elem(&f.scalar)?, precision: f.precision }))
                .collect::<Result<_>>()?,
            norm_witness: raw
                .neg_nrd
                .norm_witness
                .as_ref()
                .map(|x| x.iter().map(|s| elem(s)).collect::<Result<Vec<_>>>())
                .transpose()?,
        },
        obstructions: raw
            .obstructions
            .iter()
            .map(|o| {
                Ok(Obstruction {
                    place: place(&o.place)?,
                    presentation: presentation(&o.presentation)?,
                    residue_symbol_a: o.residue_symbol_a,
                    d_local_square: o.d_local_square,
                    extra_evidence: o.extra_evidence,
                })
            })
            .collect::<Result<_>>()?,
        group: GroupDescriptor {
            n: raw.group.n,
            algebra: raw.group.algebra,
            discriminant: elem(&raw.group.discriminant)?,
            group_type: raw.group.group_type,
            trdeg_bound: raw.group.trdeg_bound,
        },
        field,
    })
}
