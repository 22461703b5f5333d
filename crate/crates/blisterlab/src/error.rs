//! Error types shared across the crate.

use thiserror::Error;

/// Errors produced by constructions, evaluators and solvers.
#[derive(Debug, Error)]
pub enum BlisterError {
    /// Parameter validation failed (bad `Params`, bad grid, bad flag values).
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// Bonded-set or quadrilateral geometry is inconsistent (overlaps, bad measure).
    #[error("geometry error: {0}")]
    Geometry(String),

    /// A deformation violates the admissible class (u != 0 on the bonded set, u < 0).
    #[error("admissibility error: {0}")]
    Admissibility(String),

    /// A function produced a non-finite value during integration.
    #[error("evaluation error: {0}")]
    Evaluation(String),

    /// A smoothing construction could not be completed with the requested data.
    #[error("construction error: {0}")]
    Construction(String),

    /// Not enough valid data points for a fit or calibration.
    #[error("insufficient data: {0}")]
    InsufficientData(String),

    /// An iterative solver failed to converge.
    #[error("did not converge: {0}")]
    NonConvergence(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, BlisterError>;
