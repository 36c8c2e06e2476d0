use thiserror::Error;

use crate::generator::Generator;

/// Errors produced by the model, solvers and sweep machinery.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A parameter set violates a model invariant.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// The stationary linear system has no unique solution.
    #[error("singular steady-state system (reducible chain): pivot {pivot:e} below tolerance")]
    Singular {
        generator: Box<Generator>,
        pivot: f64,
    },

    /// A computed result failed its numerical self-check.
    #[error("numerical error: {0}")]
    Numerical(String),

    /// The stochastic sampler reached a state with zero exit rate.
    #[error("absorbing state ({x},{y}) reached: total exit rate is zero")]
    AbsorbingState { x: u8, y: u8 },

    /// A sweep aborted at a grid point.
    #[error("sweep failed at {parameter} = {value}: {source}")]
    SweepPoint {
        parameter: String,
        value: f64,
        #[source]
        source: Box<Error>,
    },

    /// Malformed command-line or specification input.
    #[error("usage error: {0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
