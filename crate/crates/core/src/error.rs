use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("pole at {0}")]
    Pole(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("series did not converge within {terms} terms ({what})")]
    NonConvergence { what: &'static str, terms: usize },
    #[error("exceptional spectral parameter {0}: recurrence degenerates")]
    Exceptional(String),
    #[error("overflow: {0}")]
    Overflow(String),
    #[error("insufficient decay: |f(end)|/max|f| = {ratio:.3e} exceeds {limit:.1e}")]
    InsufficientDecay { ratio: f64, limit: f64 },
    #[error("zero function has no relative defect")]
    ZeroFunction,
    #[error("grid too coarse: {0}")]
    GridTooCoarse(String),
    #[error("cost budget exceeded: {0}")]
    Budget(String),
    #[error("margin error: {0}")]
    Margin(String),
    #[error("branch cut: {0}")]
    BranchCut(String),
    #[error("boundary limit did not converge: {0}")]
    NoConvergence(String),
    #[error("edge integrals do not vanish: {0}")]
    Growth(String),
    #[error("invalid exponent triple: {0}")]
    Exponent(String),
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("i/o: {0}")]
    Io(String),
    #[error("malformed input: {0}")]
    Parse(String),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
