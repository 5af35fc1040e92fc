use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero input")]
    ZeroInput,
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("elements from different fields")]
    FieldMismatch,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid place: {0}")]
    InvalidPlace(String),
    #[error("value too large for this routine: {0}")]
    TooLarge(String),
    #[error("element has nonzero valuation {0} at the place")]
    NonUnit(i64),
    #[error("operation undefined at the dyadic place")]
    DyadicPlace,
    #[error("ramification set has odd cardinality")]
    OddCardinality,
    #[error("empty sigma")]
    EmptySigma,
    #[error("sigma has no place of odd residue characteristic")]
    NoOddPlace,
    #[error("precision {given} below required bound {required}")]
    PrecisionTooLow { required: u32, given: u32 },
    #[error("place {0} is not ramified for the presentation")]
    NotRamified(String),
    #[error("locally representable at {0}: no obstruction")]
    LocallyRepresentable(String),
    #[error("{0} is not a local square at a ramified place")]
    NotLocalSquare(String),
    #[error("n must be odd and at least 3 (got {0})")]
    InvalidN(i64),
    #[error("search exhausted at stage '{0}'")]
    SearchExhausted(String),
    #[error("local methods disagree: {0}")]
    OracleDisagreement(String),
    #[error("invalid form: {0}")]
    InvalidForm(String),
    #[error("certificate version {found} unsupported (expected {expected})")]
    Version { found: u32, expected: u32 },
    #[error("malformed certificate: {0}")]
    Malformed(String),
}
