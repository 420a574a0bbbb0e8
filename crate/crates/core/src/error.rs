use thiserror::Error;

use crate::grouping::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("degree must be at least 1")]
    ZeroDegree,

    #[error("not a permutation: {0}")]
    NotAPermutation(String),

    #[error("card at position {position} is face down")]
    HiddenCard { position: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("rows have different lengths: {0:?}")]
    RowLengthMismatch(Vec<usize>),

    #[error("row {row}, position {position}: operation would expose a face-up card")]
    WouldLeak { row: usize, position: usize },

    #[error("no row {0}")]
    UnknownRow(usize),

    #[error("row {0} was consumed by an earlier step")]
    DeadRow(usize),

    #[error("column {column} out of range for a row of length {len}")]
    BadColumn { column: usize, len: usize },

    #[error("scripted permutation source exhausted")]
    ScriptExhausted,

    #[error("replay diverged: {0}")]
    ReplayDiverged(String),

    #[error("bad fixing set: {0}")]
    BadFixingSet(String),

    #[error("randomizing protocol needs at least one input permutation")]
    NoInputs,

    #[error("invalid constraint: {}", format_violations(.0))]
    BadConstraint(Vec<Violation>),

    #[error("n = {n} exceeds the oracle limit of {limit}")]
    TooLargeForOracle { n: usize, limit: usize },

    #[error("insufficient samples: {0}")]
    InsufficientSamples(String),

    #[error("sample outside the enumerated support: {0}")]
    OutsideSupport(String),
}

fn format_violations(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}
