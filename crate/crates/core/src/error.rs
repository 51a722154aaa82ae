use thiserror::Error;

/// Errors raised by the census engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("epsilon sequence must be nonempty")]
    EmptyEpsilon,
    #[error("invalid sign {0}: entries must be +1 or -1")]
    InvalidSign(i8),
    #[error("composition parts must be positive")]
    ZeroPart,
    #[error("word is not a reciprocal normal form: {0}")]
    NotNormalForm(String),
    #[error("parameter out of range: {0}")]
    Range(String),
    #[error("interval refinement exceeded {iterations} rounds for {what}")]
    PrecisionExhausted { what: String, iterations: u32 },
    #[error("t = {t} exceeds the configured oracle cap {cap}")]
    CapExceeded { t: usize, cap: usize },
    #[error("oracle consistency check failed: {0}")]
    Oracle(String),
    #[error("cannot parse count {0:?}")]
    ParseCount(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
