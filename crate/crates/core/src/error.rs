use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("operation not supported for {0} coefficients")]
    UnsupportedDomain(&'static str),

    #[error("series is not a modular form of weight {weight} at level {level}")]
    NotAModularForm { weight: u32, level: u32 },

    #[error("precision {precision} is insufficient: {reason}")]
    InsufficientPrecision { precision: usize, reason: String },

    #[error("verdict changed between precision {precision} and {doubled}")]
    PrecisionUnstable { precision: usize, doubled: usize },

    #[error("out of scope: {0}")]
    OutOfScope(String),

    #[error("unsupported degree {degree} (maximum {max})")]
    UnsupportedDegree { degree: usize, max: usize },

    #[error("component of weight {weight} exceeds filtration {filtration}")]
    WeightExceedsFiltration { weight: u32, filtration: u32 },

    #[error("level mismatch: {0} vs {1}")]
    LevelMismatch(u32, u32),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// True for errors caused by bad caller input rather than by the computation.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidInput(_)
                | Error::OutOfScope(_)
                | Error::UnsupportedDegree { .. }
                | Error::LevelMismatch(..)
                | Error::UnsupportedDomain(_)
        )
    }
}
