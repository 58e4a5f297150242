use thiserror::Error;

/// Errors raised across the receiver chain and the simulation harness.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid constellation parameter: {0}")]
    InvalidConstellation(String),

    #[error("invalid channel matrix: |a|^2 + |b|^2 = {0}, expected 1")]
    NonUnitaryChannel(f64),

    /// A phase was requested for a zero-intensity component.
    #[error("phase undefined: {0}")]
    DegeneratePhase(&'static str),

    /// The recovered intensity quadruple is not physically consistent.
    #[error("inconsistent intensity quadruple: {0}")]
    InconsistentQuadruple(String),

    /// The fourth-dimension gain `c` vanished and gamma cannot be recovered.
    #[error("deep fade in the fourth dimension (|c| = {0:e})")]
    DeepFade(f64),

    #[error("empty hypothesis set")]
    EmptyHypotheses,

    #[error("empty block")]
    EmptyBlock,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("target SER {target:e} is not bracketed by the sweep for dimension {dimension}")]
    NotBracketed { target: f64, dimension: usize },

    #[error("malformed result file: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
