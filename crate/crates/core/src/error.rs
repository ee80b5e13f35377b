use thiserror::Error;

/// Errors raised by the calculus, the semigroup layer and the perturbation checks.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("non-finite input: {0}")]
    NonFinite(String),

    #[error("argument outside the domain: {0}")]
    Domain(String),

    /// The Lévy measure has an infinite first moment in this coordinate,
    /// so the partial derivative at the origin does not exist.
    #[error("first moment of the Lévy measure in coordinate {coordinate} is infinite")]
    MomentInfinite { coordinate: usize },

    #[error("second moment of the Lévy measure in coordinate {coordinate} is infinite")]
    SecondMomentInfinite { coordinate: usize },

    #[error("invalid Lévy measure: {0}")]
    InvalidMeasure(String),

    #[error("invalid Bernstein triplet: {0}")]
    InvalidTriplet(String),

    #[error("{operation} does not support catalog entry {entry}")]
    Unsupported { operation: String, entry: String },

    #[error("singular system: {0}")]
    Singular(String),

    #[error("not simultaneously diagonalizable: {0}")]
    NotDiagonalizable(String),

    #[error("commutation failure: {0}")]
    Commutation(String),

    #[error("inadmissible spectrum: {0}")]
    Spectrum(String),

    #[error("inadmissible point: {0}")]
    Inadmissible(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl Error {
    /// A stable snake_case name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::ArityMismatch { .. } => "arity_mismatch",
            Error::DimensionMismatch(_) => "dimension_mismatch",
            Error::NonFinite(_) => "non_finite",
            Error::Domain(_) => "domain",
            Error::MomentInfinite { .. } => "moment_infinite",
            Error::SecondMomentInfinite { .. } => "second_moment_infinite",
            Error::InvalidMeasure(_) => "invalid_measure",
            Error::InvalidTriplet(_) => "invalid_triplet",
            Error::Unsupported { .. } => "unsupported",
            Error::Singular(_) => "singular",
            Error::NotDiagonalizable(_) => "not_diagonalizable",
            Error::Commutation(_) => "commutation",
            Error::Spectrum(_) => "spectrum",
            Error::Inadmissible(_) => "inadmissible",
            Error::InvalidParameter(_) => "invalid_parameter",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
