use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid signal: {0}")]
    InvalidSignal(String),

    #[error("invalid loading curve: {0}")]
    InvalidCurve(String),

    #[error("curve is not invertible: {0}")]
    NotInvertible(String),

    #[error("input magnitude {value} exceeds horizon {horizon}")]
    HorizonExceeded { value: f64, horizon: f64 },

    #[error("spring network is disconnected: node {0} is unreachable from node 1")]
    Disconnected(usize),

    #[error("invalid network: {0}")]
    InvalidNetwork(String),

    #[error("degenerate drive: projected drive vector f0 vanishes")]
    DegenerateDrive,

    #[error("state is infeasible: coordinate {index} violates its bound by {excess}")]
    Infeasible { index: usize, excess: f64 },

    #[error("projection did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("loading trace failed: {0}")]
    Trace(String),
}

pub type Result<T> = std::result::Result<T, Error>;
