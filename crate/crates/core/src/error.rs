use thiserror::Error;

/// Errors raised by model construction and evaluation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what} = {value} is outside its domain ({expected})")]
    Domain {
        what: &'static str,
        value: f64,
        expected: &'static str,
    },

    /// No bivariate series with the P-T structure has this limiting ACVF.
    #[error("(r0, r1) = ({r0}, {r1}) is not attainable: discriminant {discriminant} < 0")]
    InfeasibleLimit { r0: f64, r1: f64, discriminant: f64 },

    #[error("phase {phi} lies outside the admissible interval [{lo}, {hi}]")]
    InadmissiblePhase { phi: f64, lo: f64, hi: f64 },

    #[error("spectral density is singular at lambda = {0}")]
    Singularity(f64),

    #[error("{which} polynomial has a root of modulus {modulus} (must exceed 1)")]
    InvalidPolynomial { which: &'static str, modulus: f64 },

    #[error("quadrature did not converge: estimate {estimate}, error {error} > tolerance {tol}")]
    Quadrature { estimate: f64, error: f64, tol: f64 },

    #[error("covariance is not positive definite (innovation variance {variance} at step {step})")]
    NotPositiveDefinite { step: usize, variance: f64 },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("invalid model: {0}")]
    InvalidModel(String),

    /// The filter decays too slowly for a truncated representation.
    #[error("truncation length {required} exceeds the limit {limit}")]
    Truncation { required: usize, limit: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(what: &'static str, value: f64, expected: &'static str) -> Error {
    Error::Domain {
        what,
        value,
        expected,
    }
}
