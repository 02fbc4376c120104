//! Error type shared by every module.

use thiserror::Error;

/// Failures reported by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("domain error: {0}")]
    Domain(String),
    /// The parameters do not belong to the region the operation requires.
    #[error("region error: {0}")]
    Region(String),
    /// An invalid parameter value (non-finite, even compacton index, ...).
    #[error("parameter error: {0}")]
    Param(String),
    /// The algebraic condition for a composite bubble fails.
    #[error("inadmissible composite: {0}")]
    Inadmissible(String),
    /// A requested value is outside the range of a map.
    #[error("range error: {0}")]
    Range(String),
    /// A grid is empty, non-uniform where uniformity is needed, or unsorted.
    #[error("grid error: {0}")]
    Grid(String),
    /// The field vanishes somewhere, so the polar/hydrodynamic form is unavailable.
    #[error("vanishing field: {0}")]
    Vanishing(String),
    /// Adaptive quadrature did not reach its tolerance.
    #[error("quadrature failed: {0}")]
    Quadrature(String),
    /// A root finder or minimizer did not converge.
    #[error("no convergence: {0}")]
    Convergence(String),
    /// The time integrator produced a non-finite value or hit vacuum.
    #[error("blow-up: {0}")]
    Blowup(String),
}

impl Error {
    /// Process exit status used by the command line tool.
    ///
    /// Parameter and domain problems map to 2, numerical failures to 3.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_)
            | Error::Region(_)
            | Error::Param(_)
            | Error::Inadmissible(_)
            | Error::Range(_)
            | Error::Grid(_)
            | Error::Vanishing(_) => 2,
            Error::Quadrature(_) | Error::Convergence(_) | Error::Blowup(_) => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
