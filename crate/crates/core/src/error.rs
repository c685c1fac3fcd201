use thiserror::Error;

/// Errors raised by state construction, evolution, detection and metrics.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("occupation {occupation} exceeds cutoff {cutoff} of mode {mode}")]
    OccupationOutOfRange {
        mode: usize,
        occupation: usize,
        cutoff: usize,
    },

    #[error("Fock cutoff too small: truncation leakage {leakage:.3e} exceeds tolerance {tolerance:.1e}")]
    CutoffTooSmall { leakage: f64, tolerance: f64 },

    #[error("cat state has zero norm for the requested amplitude and parity")]
    DegenerateCat,

    #[error("beamsplitter needs two distinct modes, got {0} twice")]
    ModeCollision(usize),

    #[error("parameter `{name}` = {value} is outside its valid range")]
    ParameterOutOfRange { name: &'static str, value: f64 },

    #[error("mode {mode} is out of range for a {num_modes}-mode space")]
    ModeOutOfRange { mode: usize, num_modes: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("state is not normalized (trace {0})")]
    NotNormalized(f64),

    #[error("covariance matrix violates the uncertainty relation: {0}")]
    UnphysicalCovariance(String),

    #[error("numerical procedure did not converge: {0}")]
    ConvergenceFailure(String),

    #[error("unsupported scissor order {0}")]
    UnsupportedOrder(usize),

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    #[error("click pattern does not match the measured modes or detector kind: {0}")]
    PatternMismatch(String),

    #[error("heralding probability {0:.3e} is too small to normalize")]
    ZeroProbability(f64),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub(crate) fn check_unit_interval(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::ParameterOutOfRange { name, value })
    }
}
