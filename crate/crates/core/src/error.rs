use thiserror::Error;

/// Errors raised by the algebra, operator, spectrum and calculus layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("algebra dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("unsupported algebra dimension n = {0} (expected 1..=5)")]
    UnsupportedDimension(usize),

    #[error("singular scalar: {0}")]
    SingularScalar(String),

    #[error("element is not a paravector (grade >= 2 part has norm {0:e})")]
    NotParavector(f64),

    #[error("invalid imaginary unit: {0}")]
    InvalidUnit(String),

    #[error("invalid operator: {0}")]
    InvalidOperator(String),

    #[error("s lies on the S-spectrum: sphere (u = {u}, v = {v}), reciprocal condition {rcond:e}")]
    OnSpectrum { u: f64, v: f64, rcond: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("spectral sets are not separable: {0}")]
    NonSeparable(String),

    #[error("unsafe contour: {0}")]
    UnsafeContour(String),

    #[error("point outside function domain: {0}")]
    Domain(String),

    #[error("divergent integral: {0}")]
    Divergence(String),
}

pub type Result<T> = std::result::Result<T, Error>;
