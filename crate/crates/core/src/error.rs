use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the models, the property loader and the integrators.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{quantity} queried at T = {temperature} K, outside [{min}, {max}] K")]
    OutOfRange {
        quantity: String,
        temperature: f64,
        min: f64,
        max: f64,
    },
    #[error("parse error in row {row}: {message}")]
    Parse { row: usize, message: String },
    #[error("temperature grid not strictly increasing at row {row}")]
    NonMonotone { row: usize },
    #[error("property table has no data rows")]
    EmptyTable,
    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("unsupported regime: {0}")]
    UnsupportedRegime(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("deformation ratio {ratio:.3e} exceeds the linear-regime guard 0.1")]
    InstabilityGuard { ratio: f64 },
    #[error("reality constraint violated at m = {m}: |X(-m) - conj X(m)| = {residual:.3e}")]
    RealityConstraint { m: i32, residual: f64 },
    #[error("Euler chart singular at beta = {beta}")]
    KinematicSingularity { beta: f64 },
    #[error("integration failed at t = {t}: {reason}")]
    Integration { t: f64, reason: String },
    #[error("root finder did not converge: {0}")]
    NoConvergence(String),
    #[error("sensitivity undefined: {0}")]
    UndefinedSensitivity(String),
    #[error("no steady state: {0}")]
    NoSteadyState(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// An integration that stopped early, carrying everything computed before the failure.
#[derive(Debug, Error)]
#[error("{error}")]
pub struct IntegrationFailure<P: std::fmt::Debug> {
    pub partial: P,
    #[source]
    pub error: Error,
}

impl<P: std::fmt::Debug> From<IntegrationFailure<P>> for Error {
    fn from(f: IntegrationFailure<P>) -> Self {
        f.error
    }
}
