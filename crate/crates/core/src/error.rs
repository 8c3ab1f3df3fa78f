use thiserror::Error;

/// Errors produced by state validation, combinatorial caps, and sampler
/// preconditions.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("not Hermitian: max |A - A^dag| entry = {max_violation:e}")]
    NotHermitian { max_violation: f64 },

    #[error("not positive semidefinite: min eigenvalue = {min_eigenvalue:e}")]
    NotPsd { min_eigenvalue: f64 },

    #[error("trace deviates from 1 by {deviation:e}")]
    BadTrace { deviation: f64 },

    #[error("not unitary: max |U U^dag - I| entry = {max_violation:e}")]
    NotUnitary { max_violation: f64 },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("size cap exceeded: {what} = {got}, cap = {cap}")]
    SizeCap {
        what: &'static str,
        got: usize,
        cap: usize,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("normalization failure: weights sum to {sum} (expected 1 within {tol:e})")]
    Normalization { sum: f64, tol: f64 },

    #[error("degenerate distribution: {0}")]
    DegenerateDistribution(String),

    #[error("invalid packing family: {0}")]
    InvalidFamily(String),

    #[error("empty packing net: threshold {threshold} rejected every candidate")]
    EmptyNet { threshold: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
