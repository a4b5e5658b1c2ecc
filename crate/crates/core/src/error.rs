use thiserror::Error;

/// Errors raised by the arithmetic, series and certificate layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by an exact zero")]
    DivisionByZero,
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("not a unit: {0}")]
    NotUnit(String),
    #[error("polynomial is not Eisenstein: {0}")]
    NotEisenstein(String),
    #[error("Hensel criterion fails at the seed")]
    HenselFailure,
    #[error("zero residue has no Teichmuller lift")]
    ZeroResidue,
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("series has a nonzero constant term")]
    NonzeroConstant,
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("certificate `{name}` failed at {location}: expected {expected}, got {got}")]
    CertificateFailure {
        name: String,
        location: String,
        expected: String,
        got: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn precision(msg: impl Into<String>) -> Self {
        Error::PrecisionExhausted(msg.into())
    }

    pub fn is_precision(&self) -> bool {
        matches!(self, Error::PrecisionExhausted(_))
    }
}
