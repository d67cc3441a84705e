use thiserror::Error;

/// A coefficient problem found while validating a canonical system.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientIssue {
    /// JSON-style location of the offending entry, e.g. `segments[0].H`.
    pub path: String,
    pub reason: String,
}

impl std::fmt::Display for CoefficientIssue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.path, self.reason)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("pair [C D] has rank {rank}, expected {expected}")]
    RankDeficientPair { rank: usize, expected: usize },

    #[error("evaluation point {z} collides with an atom at {lambda}")]
    PoleAt { z: String, lambda: f64 },

    #[error("kernel nodes {z} and {zeta} are complex conjugates")]
    ConjugateCollision { z: String, zeta: String },

    #[error("denominator is numerically singular (condition number {cond:.3e})")]
    SingularDenominator { cond: f64 },

    #[error("extrapolated increment has eigenvalue {eigenvalue:.3e} at lambda = {lambda}")]
    NonMonotone { lambda: f64, eigenvalue: f64 },

    #[error("Richardson extrapolation did not converge at lambda = {lambda} (residual {residual:.3e})")]
    NoConvergence { lambda: f64, residual: f64 },

    #[error("invalid coefficients: {}", format_issues(.0))]
    InvalidCoefficients(Vec<CoefficientIssue>),

    #[error("t = {t} lies outside the interval [{a}, {b}]")]
    OutOfInterval { t: f64, a: f64, b: f64 },

    #[error("operation requires a regular right endpoint")]
    NotRegular,

    #[error("operation requires a half-line system with a limit-point right endpoint")]
    NotHalfLine,

    #[error("operation supports p = 1 only (got p = {p})")]
    UnsupportedDimension { p: usize },

    #[error("z = {z} is a spectral point (condition number {cond:.3e})")]
    SpectralPoint { z: String, cond: f64 },

    #[error("z = {z} is not in the open upper or lower half-plane")]
    NotInHalfPlane { z: String },

    #[error("Weyl disk radius stalled at {radius:.3e} after truncation {truncation}")]
    NoShrinkage { radius: f64, truncation: f64 },

    #[error("quadrature under-resolved: {0}")]
    QuadratureUnderResolved(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

fn format_issues(issues: &[CoefficientIssue]) -> String {
    issues
        .iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

pub type Result<T> = std::result::Result<T, Error>;
