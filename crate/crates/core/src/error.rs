use thiserror::Error;

/// Errors raised by the simulator.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A waveform parameter would alias at the configured sample rate.
    #[error("aliasing: {what} = {value} Hz exceeds the limit of {limit} Hz")]
    Aliasing { what: &'static str, value: f64, limit: f64 },

    /// Two sequences that must line up do not.
    #[error("framing error: expected length {expected}, got {actual}")]
    Framing { expected: usize, actual: usize },

    /// Input is degenerate (all zero, or no usable power).
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// A spectrum has no peak to report.
    #[error("no spectral peak found")]
    NoPeak,

    /// A frequency or target estimate could not be formed.
    #[error("estimation failure: {0}")]
    Estimation(String),

    /// The echo of the target does not return inside the pulse.
    #[error("echo outside pulse: round-trip delay {delay_s} s >= pulse duration {duration_s} s")]
    EchoOutsidePulse { delay_s: f64, duration_s: f64 },

    /// The experiment configuration is invalid.
    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Whether the error stems from an estimation step rather than bad input.
    pub fn is_estimation_failure(&self) -> bool {
        matches!(self, Error::NoPeak | Error::Estimation(_))
    }

    /// Process exit status for the command-line tool: 2 for configuration
    /// errors, 3 for estimation failures, 1 otherwise.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Config(_) => 2,
            e if e.is_estimation_failure() => 3,
            _ => 1,
        }
    }
}
