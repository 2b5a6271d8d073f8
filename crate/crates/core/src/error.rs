use thiserror::Error;

use crate::grid::Marker;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GridError {
    #[error("grid must have at least one row")]
    Empty,
    #[error("X has {x} entries but O has {o}")]
    LengthMismatch { x: usize, o: usize },
    #[error("{marker} in row {row} sits in column {col}, outside 0..{n}")]
    ColumnOutOfRange { marker: Marker, row: usize, col: usize, n: usize },
    #[error("column {col} holds two {marker} markings")]
    DuplicateMarking { marker: Marker, col: usize },
    #[error("row {row}: square in column {col} holds both X and O")]
    SharedSquare { row: usize, col: usize },
    #[error("state is not a permutation")]
    NotAPermutation,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("missing `{0}`")]
    Missing(&'static str),
    #[error(transparent)]
    Grid(#[from] GridError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoveError {
    #[error("columns {col} and {next} interleave; commutation is illegal")]
    IllegalCommutation { col: usize, next: usize },
    #[error("row {row} out of range for grid of size {n}")]
    RowOutOfRange { row: usize, n: usize },
    #[error("no destabilizable 2x2 pattern at row {row}, column {col}")]
    NotDestabilizable { row: usize, col: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CableError {
    #[error("cable parameter p must be at least 1, got {0}")]
    InvalidP(usize),
    #[error("invalid cable plan: {0}")]
    PlanInvalid(String),
    #[error("q = {q} is not reachable: {reason}")]
    QOutOfRange { q: i64, reason: String },
    #[error("grid is not a {p}-cable of the given companion")]
    NotACableGrid { p: usize },
    #[error(transparent)]
    Move(#[from] MoveError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("grid size {n} exceeds the limit {limit} for this operation")]
    SizeLimitExceeded { n: usize, limit: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomologyError {
    #[error("generator {generator} does not lie in the bigrading of the chain")]
    NotHomogeneous { generator: usize },
    #[error("chain is not a cycle")]
    NotACycle,
    #[error("operation needs recorded chains; rebuild the reduction with tracking enabled")]
    ChainsNotTracked,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error("expected a knot, found {components} components")]
    NotAKnot { components: usize },
    #[error("plan does not match the cable grid: {0}")]
    PlanMismatch(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Homology(#[from] HomologyError),
    #[error(transparent)]
    Cable(#[from] CableError),
}
