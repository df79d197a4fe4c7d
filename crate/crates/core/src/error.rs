use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Line {
    Row,
    Column,
}

impl std::fmt::Display for Line {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Line::Row => "row",
            Line::Column => "column",
        })
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SftError {
    #[error("matrix is empty")]
    Empty,
    #[error("matrix is not square: row {row} has {len} entries, expected {expected}")]
    NonSquare {
        row: usize,
        len: usize,
        expected: usize,
    },
    #[error("negative entry at ({row},{col})")]
    NegativeEntry { row: usize, col: usize },
    #[error("zero {line} {index}: the graph has a source or sink")]
    ZeroRowOrColumn { line: Line, index: usize },
    #[error("matrix is reducible (graph not strongly connected)")]
    Reducible,
    #[error("matrix is not primitive")]
    NotPrimitive,
    #[error("power iteration did not converge within {max_iters} iterations")]
    NoConvergence { max_iters: usize },
    #[error("matrix does not commute with the adjacency matrix")]
    NotInCentralizer,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },
    #[error("witness does not verify: {0}")]
    InvalidWitness(String),
    #[error("search space of {size} candidates exceeds cap {cap}")]
    SearchSpaceTooLarge { size: String, cap: u64 },
}

pub type Result<T, E = SftError> = std::result::Result<T, E>;
