use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A density left the admissible interval of its road.
    #[error("density {value} outside [0, {rho_max}]")]
    Domain { value: f64, rho_max: f64 },

    /// Invalid parameters or scenario description.
    #[error("configuration error: {0}")]
    Config(String),

    /// Non-finite or otherwise unusable solver input.
    #[error("invalid input: {0}")]
    Input(String),

    /// A failure raised while advancing the scheme.
    #[error("step {step} (t = {time}): {source}")]
    Step {
        step: usize,
        time: f64,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    /// True for errors caused by the user's setup rather than by the numerics.
    pub fn is_config(&self) -> bool {
        matches!(self, Error::Config(_))
    }
}
