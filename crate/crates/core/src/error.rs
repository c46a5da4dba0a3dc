use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// How far a long-running search got before it was stopped.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Progress {
    pub shards_done: usize,
    pub shards_total: usize,
    pub states_visited: u64,
    pub max_depth: u32,
}

impl fmt::Display for Progress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}/{} shards done, {} states visited, depth {}",
            self.shards_done, self.shards_total, self.states_visited, self.max_depth
        )
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid length: word of length {len} has no factors of length {n}")]
    InvalidLength { len: usize, n: usize },
    #[error("invalid word {0:?}: expected a non-empty string of '0' and '1'")]
    InvalidWord(String),
    #[error("factor set is empty")]
    EmptySet,
    #[error("order mismatch: expected order {expected}, got {found}")]
    OrderMismatch { expected: usize, found: usize },
    #[error("{what} = {value} is out of range ({allowed})")]
    OutOfRange {
        what: &'static str,
        value: usize,
        allowed: &'static str,
    },
    #[error("{0} is already a circular factor of the de Bruijn word")]
    AlreadyPresent(String),
    #[error("{0} is not a de Bruijn word")]
    NotDeBruijn(String),
    #[error("graph is not strongly connected")]
    NotStronglyConnected,
    #[error("(t, n) = ({t}, {n}) is outside n <= t < 2n")]
    OutOfValidityRegion { t: usize, n: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("budget exhausted: {what} ({progress})")]
    BudgetExhausted { what: String, progress: Progress },
    #[error("node is not valid or was not produced by this search")]
    UnknownNode,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("closed form and brute force disagree at T({t},{n}): {closed} vs {brute}")]
    Mismatch {
        t: usize,
        n: usize,
        closed: u128,
        brute: u128,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
