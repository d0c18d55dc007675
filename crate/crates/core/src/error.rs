use thiserror::Error;

/// Coarse classification used by drivers to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// The caller asked for something malformed.
    Usage,
    /// The request is well formed but exceeds a configured work or memory ceiling.
    Capacity,
    /// A computed quantity violated an invariant it must satisfy (integrality, purity, ...).
    Invariant,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("capacity exceeded for {what}: need {required}, limit {limit}")]
    Capacity {
        what: &'static str,
        required: u128,
        limit: u128,
    },

    #[error("field of order {0} has no discrete-log table")]
    MissingLogTable(u64),

    #[error("degree {sub} does not divide degree {sup}")]
    NotDivisible { sub: u32, sup: u32 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("empty multiset")]
    EmptyMultiset,

    #[error("no certified exponential decay: {0}")]
    NoDecayCertificate(String),

    #[error("density is not symmetric under z -> 1/z (max deviation {0:e})")]
    Asymmetric(f64),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("descriptor inconsistency: {0}")]
    Inconsistent(String),

    #[error("non-integral result: {0}")]
    NonIntegral(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Capacity { .. } | Error::MissingLogTable(_) => ErrorClass::Capacity,
            Error::NonIntegral(_) | Error::Invariant(_) => ErrorClass::Invariant,
            _ => ErrorClass::Usage,
        }
    }

    /// Short stable token naming the variant, for machine-readable diagnostics.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NotPrime(_) => "not_prime",
            Error::Capacity { .. } => "capacity",
            Error::MissingLogTable(_) => "missing_log_table",
            Error::NotDivisible { .. } => "not_divisible",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::EmptyMultiset => "empty_multiset",
            Error::NoDecayCertificate(_) => "no_decay_certificate",
            Error::Asymmetric(_) => "asymmetric",
            Error::Hypothesis(_) => "hypothesis",
            Error::Inconsistent(_) => "inconsistent",
            Error::NonIntegral(_) => "non_integral",
            Error::Invariant(_) => "invariant",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
            Error::Csv(_) => "csv",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
