//! Crate-wide error type.

use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The LU factorization met a pivot too small relative to the matrix
    /// norm. For collocation matrices this signals a degenerate shape
    /// parameter rather than a programming error.
    #[error("near-singular matrix: |pivot| = {pivot:.3e} at elimination step {index} (threshold {threshold:.3e})")]
    NearSingular {
        index: usize,
        pivot: f64,
        threshold: f64,
    },

    /// A right-hand-side evaluation produced a non-finite value.
    #[error("solution blew up at t = {time}: non-finite {variable} at node {node}")]
    BlowUp {
        time: f64,
        node: usize,
        variable: char,
    },

    /// A time step failed; wraps the underlying error with step context.
    #[error("integration step {step} (t = {time}) failed: {source}")]
    Step {
        step: usize,
        time: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("config: {0}")]
    Config(String),

    #[error("failed to write {path}: {source}")]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}
