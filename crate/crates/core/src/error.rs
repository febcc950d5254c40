use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid ensemble specification: {0}")]
    InvalidSpec(String),
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("eigensolver did not converge")]
    Convergence,
    #[error("regime error: {0}")]
    Regime(String),
    #[error("{what} = {value} is outside the supported domain {domain}")]
    Domain { what: &'static str, value: f64, domain: &'static str },
    #[error("quadrature not converged at x = {x}: doubling the order moved the result by {delta:e}")]
    Quadrature { x: f64, delta: f64 },
    #[error("ODE step size underflow at s = {at}")]
    Ode { at: f64 },
    #[error("edge path structure error: {0}")]
    Structure(String),
    #[error("exact enumeration needs a finitely supported entry law, got {0}")]
    Support(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
