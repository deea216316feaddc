use thiserror::Error;

/// Errors raised across the library.
///
/// Numerical verdicts (divergent, inconclusive) are not errors; they travel in
/// [`IntegralOutcome`](crate::quadrature::IntegralOutcome) and the reports.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid weight density: {0}")]
    InvalidWeight(String),

    #[error("invalid quadrature plan: {0}")]
    InvalidPlan(String),

    #[error("integrand is not finite at x = {x} (value {value})")]
    NonFiniteIntegrand { x: f64, value: f64 },

    #[error("total mass is not finite ({0})")]
    InfiniteMass(String),

    #[error("internal inconsistency: {0}")]
    Inconsistency(String),

    #[error("degenerate recurrence at degree {degree}: beta = {beta:e} below threshold {threshold:e}")]
    Degenerate { degree: usize, beta: f64, threshold: f64 },

    #[error("integral did not converge while {context}")]
    NotConverged { context: String },

    #[error("degree {requested} out of range (max {max})")]
    DegreeOutOfRange { requested: usize, max: usize },

    #[error("tabulated data: {0}")]
    Table(String),

    #[error("i/o: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
