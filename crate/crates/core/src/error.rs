use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum FnxError {
    #[error("support does not affinely span R^{0}")]
    Span(usize),
    #[error("point outside the domain: {0}")]
    Domain(String),
    #[error("singular coefficient block: {0}")]
    Singular(String),
    #[error("zero row in Gale exponent matrix at index {0}")]
    ZeroRow(usize),
    #[error("inconsistent log-linear system (residual {0:e})")]
    Consistency(f64),
    #[error("parameter out of range: {0}")]
    Range(String),
    #[error("check violated: {0}")]
    Violation(String),
    #[error("polyhedron is empty")]
    Empty,
    #[error("dimension {0} not supported (k <= 3 required)")]
    Dimension(usize),
    #[error("forms not in general position: {0}")]
    Degeneracy(String),
    #[error("instance too large for symbolic work: {0}")]
    Size(String),
    #[error("polynomial is identically zero")]
    ZeroPoly,
    #[error("solution set is not zero-dimensional")]
    PositiveDim,
    #[error("degenerate elimination: {0}")]
    Degenerate(String),
    #[error("not in normal form: {0}")]
    Form(String),
    #[error("zero set appears singular: {0}")]
    Smoothness(String),
    #[error("grid refinement did not stabilise: {0}")]
    Resolution(String),
    #[error("numeric counts disagree near degeneracy: {0}")]
    Inconclusive(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, FnxError>;
