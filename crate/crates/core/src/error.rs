use thiserror::Error;

/// Errors raised by the library. Every variant maps onto a stable
/// machine-readable kind used by the command-line front end.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("cycle length must be an odd positive integer, got {0}")]
    InvalidModulus(usize),

    #[error("polynomial of degree {degree} is not a residue representative modulo X^{m}-1")]
    NotResidue { degree: usize, m: usize },

    #[error("{0}")]
    Parse(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("the zero code has no {0}")]
    ZeroCode(&'static str),

    #[error("enumeration needs 2^{needed} items but the cap is 2^{cap}")]
    CapExceeded { needed: usize, cap: usize },

    #[error("{0} is not in the augmentation ideal")]
    NotInAugmentationIdeal(String),

    #[error("delta={delta} is not admissible: {condition}")]
    Inadmissible { delta: f64, condition: &'static str },

    #[error("{0}")]
    OutOfRange(String),

    #[error("{0}")]
    InvalidParameter(String),
}

impl Error {
    /// Short stable identifier, printed as `error: <kind>: <detail>`.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidModulus(_) => "invalid-modulus",
            Error::NotResidue { .. } => "not-residue",
            Error::Parse(_) => "parse",
            Error::DimensionMismatch(_) => "dimension-mismatch",
            Error::ZeroCode(_) => "zero-code",
            Error::CapExceeded { .. } => "cap-exceeded",
            Error::NotInAugmentationIdeal(_) => "precondition",
            Error::Inadmissible { .. } => "inadmissible",
            Error::OutOfRange(_) => "out-of-range",
            Error::InvalidParameter(_) => "invalid-parameter",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
