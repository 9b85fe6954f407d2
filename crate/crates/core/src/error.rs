use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("defining polynomial is reducible over Q")]
    ReduciblePolynomial,
    #[error("defining polynomial has {real} real roots out of {degree}")]
    NotTotallyReal { real: usize, degree: usize },
    #[error("could not certify sign of an embedding at {bits} bits")]
    SignUncertain { bits: u32 },
    #[error("{p} is a common index divisor; prime factorization unsupported")]
    CommonIndexDivisor { p: u64 },
    #[error("unit search up to height {bound} found rank {found} of {needed}")]
    UnitSearchExhausted { bound: u64, found: usize, needed: usize },
    #[error("class group computation exceeded limits: {0}")]
    ClassGroupBound(String),
    #[error("local computation at even prime exhausted its bound: {0}")]
    EvenPrimeBound(String),
    #[error("level is not coprime to the discriminant")]
    NonCoprimeLevel,
    #[error("enumeration bound exhausted: {0}")]
    EnumerationExhausted(String),
    #[error("order mismatch: {0}")]
    OrderMismatch(String),
    #[error("no generator found within bound {bound}: {what}")]
    NoGenerator { what: String, bound: u64 },
    #[error("prime divides the discriminant or level: {0}")]
    BadPrime(String),
    #[error("fundamental domain did not close at height {height}: {detail}")]
    DomainNotClosed { height: u64, detail: String },
    #[error("ambiguous vertex cycle: {0}")]
    AmbiguousVertex(String),
    #[error("element is not in the order")]
    NotInOrder,
    #[error("non-invertible reduction: {0}")]
    NonInvertible(String),
    #[error("principalization failed: {0}")]
    Principalization(String),
    #[error("degree {degree} exceeds configured bound {bound}")]
    DegreeBound { degree: usize, bound: usize },
    #[error("operators do not commute")]
    NonCommuting,
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("stage `{stage}`: {source}")]
    Stage { stage: String, source: Box<Error> },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code: 2 for invalid input, 3 when a search bound was
    /// exhausted, 4 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Stage { source, .. } => source.exit_code(),
            Error::Config(_)
            | Error::ReduciblePolynomial
            | Error::NotTotallyReal { .. }
            | Error::NonCoprimeLevel
            | Error::BadPrime(_)
            | Error::Unsupported(_)
            | Error::CommonIndexDivisor { .. } => 2,
            Error::SignUncertain { .. }
            | Error::UnitSearchExhausted { .. }
            | Error::ClassGroupBound(_)
            | Error::EvenPrimeBound(_)
            | Error::EnumerationExhausted(_)
            | Error::NoGenerator { .. }
            | Error::DomainNotClosed { .. }
            | Error::Principalization(_)
            | Error::DegreeBound { .. } => 3,
            _ => 4,
        }
    }

    pub fn at(self, stage: &str) -> Error {
        match self {
            e @ Error::Stage { .. } => e,
            e => Error::Stage { stage: stage.to_string(), source: Box::new(e) },
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
