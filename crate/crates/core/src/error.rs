use thiserror::Error;

/// Errors produced anywhere in the crate.
///
/// Vertex indices carried by variants are 0-based; `Display` renders them
/// 1-based to match the graph file format.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid model parameters: {0}")]
    InvalidParams(String),

    #[error("non-monotone edit on pair ({}, {}): {reason}", .i + 1, .j + 1)]
    NonMonotoneEdit {
        i: usize,
        j: usize,
        reason: &'static str,
    },

    #[error("intensity must be non-negative and finite, got {0}")]
    NegativeIntensity(f64),

    #[error("no phase boundary on the requested branch: {0}")]
    NoBoundary(String),

    #[error("argument outside the domain: {0}")]
    DomainError(String),

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("null vector is not in the kernel: |M v| = {residual:e} > {bound:e}")]
    NullVectorNotInKernel { residual: f64, bound: f64 },

    #[error("ADMM diverged after {iterations} iterations (residual {residual:e})")]
    Diverged { iterations: usize, residual: f64 },

    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    #[error("solution did not converge")]
    NotConverged,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("ground truth is not a balanced +/-1 vector")]
    UnbalancedTruth,

    #[error("invalid ground truth: {0}")]
    InvalidTruth(String),

    #[error("intensities a and b are required for this construction")]
    MissingIntensities,

    #[error("enumeration too large: {0}")]
    TooLarge(String),

    #[error("bisection requires an even number of vertices, got {0}")]
    OddN(usize),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
