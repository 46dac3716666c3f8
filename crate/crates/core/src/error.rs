use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the toolkit can report.
///
/// Values carried in variants are rendered with the scalar text syntax so the
/// error stays cheap to clone and prints the same way the CLI reads input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ambiguous comparison ({0}): intervals overlap, raise the precision")]
    AmbiguousComparison(String),
    #[error("precision exhausted at {0} bits")]
    PrecisionExhausted(u32),
    #[error("negative radicand {0}")]
    NegativeRadicand(String),
    #[error("slope must be nonzero")]
    ZeroSlope,
    #[error("division by a value that may be zero: {0}")]
    DivisionByZero(String),
    #[error("breakpoints are not strictly increasing")]
    UnsortedBreakpoints,
    #[error("density is negative near t = {0}")]
    NegativeDensity(String),
    #[error("total mass is {0}, expected 1")]
    MassNotOne(String),
    #[error("mixture weights do not form a probability vector")]
    WeightsNotProbability,
    #[error("diameter {c} is below the threshold {threshold}")]
    DiameterBelowThreshold { c: String, threshold: String },
    #[error("slope out of range: {0}")]
    SlopeOutOfRange(String),
    #[error("slope must be an exact rational")]
    SlopeNotRational,
    #[error("c = {c} is not a multiple of the cell width {h}")]
    GridMisaligned { c: String, h: String },
    #[error("not a CIUPM: deviation {dev_mu} for the measure, {dev_push} for its image")]
    NotACiupm { dev_mu: String, dev_push: String },
    #[error("unbounded objective in linear program")]
    Unbounded,
    #[error("resource limit reached: {0}")]
    ResourceLimit(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub fn is_ambiguous(&self) -> bool {
        matches!(self, Error::AmbiguousComparison(_))
    }

    /// Short machine-readable name used in structured error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::AmbiguousComparison(_) => "AmbiguousComparison",
            Error::PrecisionExhausted(_) => "PrecisionExhausted",
            Error::NegativeRadicand(_) => "NegativeRadicand",
            Error::ZeroSlope => "ZeroSlope",
            Error::DivisionByZero(_) => "DivisionByZero",
            Error::UnsortedBreakpoints => "UnsortedBreakpoints",
            Error::NegativeDensity(_) => "NegativeDensity",
            Error::MassNotOne(_) => "MassNotOne",
            Error::WeightsNotProbability => "WeightsNotProbability",
            Error::DiameterBelowThreshold { .. } => "DiameterBelowThreshold",
            Error::SlopeOutOfRange(_) => "SlopeOutOfRange",
            Error::SlopeNotRational => "SlopeNotRational",
            Error::GridMisaligned { .. } => "GridMisaligned",
            Error::NotACiupm { .. } => "NotACiupm",
            Error::Unbounded => "Unbounded",
            Error::ResourceLimit(_) => "ResourceLimit",
            Error::Parse(_) => "Parse",
            Error::InvalidArgument(_) => "InvalidArgument",
            Error::Io(_) => "Io",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
