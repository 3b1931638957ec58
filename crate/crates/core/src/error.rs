use thiserror::Error;

/// Errors produced by the cochain engine, the circle and symplectic pipelines
/// and the input parsers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("integer overflow while evaluating {0}")]
    Overflow(&'static str),

    #[error("expected a finite real number, got {0}")]
    NonFinite(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("cocycle identity fails at ({a}, {b}, {c}): coboundary is {value}")]
    NotCocycle { a: i64, b: i64, c: i64, value: i64 },

    #[error("class extraction is not reliable: error radius {radius} is not below 1/2")]
    ExtractionUnstable { radius: f64 },

    #[error("numerical inconsistency in {what}: residual {residual} exceeds {limit}")]
    Inconsistent {
        what: &'static str,
        residual: f64,
        limit: f64,
    },

    #[error("{what} exceeded its budget of {limit}")]
    BudgetExceeded { what: &'static str, limit: usize },

    #[error("matrix is not symplectic: max deviation {deviation:e} exceeds {tol:e}")]
    NotSymplectic { deviation: f64, tol: f64 },

    #[error("matrix must be square of even dimension, got {rows}x{cols}")]
    BadDimension { rows: usize, cols: usize },

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("{what} did not converge after {iterations} iterations")]
    NonConvergence {
        what: &'static str,
        iterations: usize,
    },

    #[error("section boundary: translation number {tau} is within {radius:e} of an integer")]
    SectionBoundary { tau: f64, radius: f64 },

    #[error("semisimplicity check failed: {0}")]
    NotSemisimple(String),

    #[error("Krein-degenerate eigenvalue {angle} (form magnitude {form:e})")]
    KreinDegenerate { angle: f64, form: f64 },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
