use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    Param(String),

    #[error("x = {x} lies outside the domain ({lo}, {hi})")]
    Domain { x: f64, lo: f64, hi: f64 },

    #[error("superpotential is singular at x = {0}")]
    Singularity(f64),

    #[error("level n = {n} exceeds the {count} bound states")]
    Index { n: usize, count: usize },

    #[error("no classically allowed region at E = {0}")]
    NoBoundRegion(f64),

    #[error("argument out of range: {0}")]
    Range(String),

    #[error("quadrature did not converge: last change {delta:e} at order {order}")]
    QuadratureFailure { delta: f64, order: usize },

    #[error("integrand returned a non-finite value at t = {0}")]
    NonFiniteSample(f64),

    #[error("no sign change over [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },

    #[error("root finder exhausted {0} iterations")]
    MaxIterations(usize),

    #[error("level n = {0} is not bound")]
    Unbound(usize),

    #[error("eigenvalue search did not converge: {0}")]
    NoConvergence(String),
}

pub type Result<T> = std::result::Result<T, Error>;
