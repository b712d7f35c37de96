use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument outside the domain of a function (non-positive volume, t <= 0, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// End states or parameters that do not describe an admissible composite wave.
    #[error("configuration error: {0}")]
    Config(String),

    #[error("profile error: {0}")]
    Profile(String),

    #[error("step error: {0}")]
    Step(String),

    /// The numerical solution left the admissible state space.
    #[error("blow-up at t = {t}: {reason}")]
    BlowUp { t: f64, reason: String },

    #[error("internal error: {0}")]
    Internal(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn require_positive(name: &str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} must be positive and finite, got {value}")))
    }
}
