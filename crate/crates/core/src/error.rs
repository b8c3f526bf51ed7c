//! Error type shared by all modules of the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("letter index {0} out of range 0..=2")]
    InvalidLetter(usize),

    #[error("invalid state vector: {0}")]
    InvalidState(String),

    #[error("invalid priors: {0}")]
    InvalidPriors(String),

    #[error("invalid channel: {0}")]
    InvalidChannel(String),

    #[error("invalid POVM: {0}")]
    InvalidPovm(String),

    #[error("matrix is not unitary (max deviation {max_dev:.3e})")]
    NotUnitary { max_dev: f64 },

    #[error("ensemble is not symmetric: {0}")]
    NotSymmetric(String),

    #[error("optimizer failed to converge; best value found {best}")]
    Convergence { best: f64 },

    #[error("channel estimation failed: no counts for input symbol {0}")]
    EmptyRow(usize),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("target unattainable: {0}")]
    Unattainable(String),
}

pub type Result<T> = std::result::Result<T, Error>;
