use thiserror::Error;

use crate::model::Cell;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid label character {0:?}; expected 'A' or 'D'")]
    InvalidLabel(char),

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("order must be at least 1")]
    EmptyPuzzle,

    #[error("grid is not a permutation of 1..={0}")]
    NotAPermutation(u64),

    #[error("dimension mismatch: puzzle has order {puzzle}, grid has order {grid}")]
    DimensionMismatch { puzzle: usize, grid: usize },

    #[error("puzzle has no solution")]
    Unsolvable,

    #[error("puzzle does not have a unique solution")]
    NotUnique,

    #[error("line {line} is not a permutation of 1..={n}")]
    InvalidPermutation { line: String, n: usize },

    #[error("constraint graph contains a cycle of length {}", .0.len())]
    Cyclic(Vec<Cell>),

    #[error("search budget of {0} nodes exhausted")]
    BudgetExceeded(u64),

    #[error("search cancelled")]
    Cancelled,

    #[error("instance too large for exhaustive search: {0}")]
    TooLarge(String),

    #[error("invalid digraph: {0}")]
    InvalidDigraph(String),

    #[error("deletion set does not make the graph acyclic")]
    NotAcyclifying,

    #[error("reduction layout violates its invariants: {0}")]
    Layout(String),
}
