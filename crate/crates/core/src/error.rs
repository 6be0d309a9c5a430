use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("malformed code file: {0}")]
    MalformedFile(String),

    #[error("rank deficient: {what} has rank {rank}, expected {expected}")]
    RankDeficient {
        what: &'static str,
        rank: usize,
        expected: usize,
    },

    #[error("declared minimum distance {declared} contradicted by a codeword pair at distance {found}")]
    DistanceContradicted { declared: usize, found: usize },

    #[error("decode radius {t} exceeds the correction radius {t_max} of the local code")]
    RadiusTooLarge { t: usize, t_max: usize },

    #[error("size limit exceeded: {0}")]
    SizeLimit(String),

    #[error("numerical failure: {message} (residual {residual:e})")]
    Numeric { message: String, residual: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn numeric(msg: impl Into<String>, residual: f64) -> Self {
        Error::Numeric {
            message: msg.into(),
            residual,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
