use thiserror::Error;

/// Errors raised by grid construction, interpolation, pricing and configuration.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("need at least {min} knots, got {got}")]
    TooFewKnots { min: usize, got: usize },

    #[error("abscissae must be strictly increasing (violated at index {index})")]
    NotIncreasing { index: usize },

    #[error("length mismatch: {what}")]
    LengthMismatch { what: String },

    #[error("axis is not uniformly spaced (required by {method})")]
    NonUniformAxis { method: &'static str },

    #[error("invalid parameter `{name}` = {value}: {constraint}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        constraint: &'static str,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("correlation matrix is not positive semi-definite: {0}")]
    NotPositiveSemiDefinite(String),

    #[error("degenerate correlation: {0}")]
    DegenerateCorrelation(String),

    #[error("premium {premium} outside no-arbitrage bounds [{lower}, {upper}]")]
    PremiumOutOfBounds {
        premium: f64,
        lower: f64,
        upper: f64,
    },

    #[error("non-finite value at step {step}, node {node}")]
    NonFinite { step: usize, node: usize },

    #[error("unstable scheme at step {step}, node {node}: {detail}")]
    Unstable {
        step: usize,
        node: usize,
        detail: String,
    },

    #[error("configuration error: {0}")]
    Config(String),
}

impl Error {
    /// True for failures that happen while stepping a grid (as opposed to bad inputs).
    pub fn is_numeric(&self) -> bool {
        matches!(self, Error::NonFinite { .. } | Error::Unstable { .. })
    }

    pub(crate) fn param(name: &'static str, value: f64, constraint: &'static str) -> Self {
        Error::InvalidParameter {
            name,
            value,
            constraint,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
