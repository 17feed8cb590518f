//! Error type shared across the crate.

use thiserror::Error;

/// Errors raised by constructors, channel algebra, grid numerics and
/// the Monte-Carlo layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A parameter lies outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// The phase-space grid cannot resolve the requested state or kernel.
    #[error("grid resolution error: {0}")]
    GridResolution(String),
    /// Two grids with different geometry were combined.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    /// A quadrature failed to reach the requested accuracy.
    #[error("quadrature error: {0}")]
    Quadrature(String),
    /// Monte-Carlo sampling was invoked without a seed.
    #[error("seed required: Monte-Carlo runs must be reproducible")]
    SeedRequired,
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
