//! File formats, polynomial generators and job runners behind the
//! `anewdsc` binary.

pub mod format;
pub mod generate;
pub mod job;
pub mod verify;

use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {0}: {1}")]
    Io(PathBuf, std::io::Error),
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("bad input: {0}")]
    Schema(String),
    #[error("degree {0} is below 2")]
    Degree(usize),
    #[error("leading coefficient is zero")]
    ZeroLeading,
    #[error("coefficient of x^{0} has a zero denominator")]
    ZeroDenominator(usize),
    #[error("unknown generator '{0}' (expected mignotte, wilkinson, random-dense, random-sparse or chebyshev-like)")]
    UnknownFamily(String),
    #[error("bad generator parameters: {0}")]
    Params(String),
    #[error(transparent)]
    Solver(#[from] anewdsc::Error),
}

pub type Result<T> = std::result::Result<T, CliError>;
