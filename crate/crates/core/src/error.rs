use thiserror::Error;

/// Failures raised by the coefficient engine and the two integrators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParams { name: &'static str, reason: String },

    #[error("closed-form pump denominator a1*a2 - b^2 is degenerate (|value| = {value:e})")]
    DegenerateDenominator { value: f64 },

    #[error("steady-state linear system is numerically singular")]
    SingularSystem,

    #[error("drift-matrix determinant D is degenerate (|D| = {value:e})")]
    DegenerateD { value: f64 },

    #[error("step-halving check failed at t = {t}: max relative difference {max_rel_diff:e} exceeds {tol:e}")]
    NonConverged { t: f64, max_rel_diff: f64, tol: f64 },

    #[error("moment magnitude exceeded {limit:e} at t = {t}")]
    Overflow { t: f64, limit: f64 },

    #[error("Fock truncation leak {leak:e} exceeds {tol:e} at t = {t}")]
    TruncationLeak { t: f64, leak: f64, tol: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
