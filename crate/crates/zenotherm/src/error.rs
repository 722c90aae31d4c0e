//! Error types shared across the crate.

use thiserror::Error;

/// Top-level error for all simulation operations.
///
/// Variants map onto the process exit codes used by the CLI: configuration
/// problems exit with 2, numerical failures with 3, capacity overflows
/// with 4.
#[derive(Debug, Error)]
pub enum Error {
    /// A configuration field is missing, malformed, or inconsistent.
    #[error("config error: {0}")]
    Config(String),

    /// Adaptive quadrature failed to reach the requested tolerance within
    /// the subdivision budget. Carries the best error estimate achieved.
    #[error("quadrature did not converge: requested {requested:.3e}, achieved {achieved:.3e} after {panels} panels")]
    QuadratureNonConvergence {
        requested: f64,
        achieved: f64,
        panels: usize,
    },

    /// The excited population left `[-eps, 1+eps]` during integration,
    /// which signals a too-loose tolerance or pathological rates.
    #[error("integration blow-up: rho_ee = {rho_ee:.6e} at t = {t:.6e} left [0, 1]")]
    IntegrationBlowup { rho_ee: f64, t: f64 },

    /// The wavefunction norm drifted beyond the configured tolerance.
    #[error("unitarity loss: norm drift {drift:.3e} exceeds tolerance {tol:.3e} at t = {t:.6e}")]
    UnitarityLoss { drift: f64, tol: f64, t: f64 },

    /// Any other numerical failure (step-size underflow, exceeded step
    /// budget, non-finite state).
    #[error("numerical failure: {0}")]
    Numeric(String),

    /// The detector-branch count would exceed the configured cap.
    #[error("branch capacity exceeded: {requested} branches requested, cap is {cap}")]
    BranchCapacity { requested: usize, cap: usize },

    /// The truncated Hilbert-space dimension would exceed the configured cap.
    #[error("dimension cap exceeded: requested {requested}, cap is {cap}")]
    DimensionCap { requested: usize, cap: usize },

    /// Filesystem or serialization failure while emitting artifacts.
    #[error("output error: {0}")]
    Output(String),
}

impl Error {
    /// Process exit code for the CLI: config = 2, numeric = 3, capacity = 4.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Output(_) => 2,
            Error::QuadratureNonConvergence { .. }
            | Error::IntegrationBlowup { .. }
            | Error::UnitarityLoss { .. }
            | Error::Numeric(_) => 3,
            Error::BranchCapacity { .. } | Error::DimensionCap { .. } => 4,
        }
    }
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
