use thiserror::Error;

use crate::config::ConfigError;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Config(#[from] ConfigError),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("zadoff-chu root {root} is not coprime with length {len}")]
    NonCoprimeRoot { root: u64, len: usize },

    #[error("index {index} out of range for {len} sub-surfaces")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("sub-surface count {0} is not a perfect square")]
    NonSquare(usize),

    #[error("reference symbol {q} outside 1..={max}")]
    ReferenceSymbol { q: usize, max: usize },

    #[error("all-zero input: {0}")]
    ZeroInput(&'static str),

    #[error("zero-amplitude tap {0} in the tracked path set")]
    ZeroTap(usize),

    #[error("division by zero received sample on sub-carrier {0}")]
    ZeroSample(usize),

    #[error("dump parse error at line {line}: {msg}")]
    Dump { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
