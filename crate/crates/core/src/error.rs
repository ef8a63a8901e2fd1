use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unknown subsystem label `{0}`")]
    UnknownLabel(String),

    #[error("duplicate subsystem label `{0}`")]
    DuplicateLabel(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("Kraus operators violate completeness (max deviation {deviation:.3e})")]
    IncompleteKraus { deviation: f64 },

    #[error("outcome unobservable (probability {probability:.3e})")]
    OutcomeUnobservable { probability: f64 },

    #[error("noise strength {0} outside [0, 1]")]
    StrengthOutOfRange(f64),

    #[error("state must have exactly two subsystems, found {0}")]
    NotBipartite(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("numerical invariant violated: {0}")]
    InvariantViolation(String),
}
