use thiserror::Error;

use crate::bigraph::{PartId, VertexRef, VertexSet};
use crate::joinedness::OverflowState;
use crate::subdiv::{CrossingFailure, Violation};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("edge {u}-{v} already present")]
    DuplicateEdge { u: VertexRef, v: VertexRef },

    #[error("vertex {0} does not exist")]
    InvalidVertex(VertexRef),

    #[error("{u} and {v} lie in the same part")]
    SamePart { u: VertexRef, v: VertexRef },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error("subset enumeration exceeded the budget of {budget} nodes")]
    EnumerationBudgetExceeded { budget: u64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parts have unequal sizes {0} and {1}")]
    UnequalParts(usize, usize),

    #[error("removal set in part {} would exceed the ceiling of alpha*N", .0.part)]
    RemovalOverflow(Box<OverflowState>),

    #[error("part {part}: {requested} vertices requested but only {available} available in Y'")]
    InsufficientYSpace {
        part: PartId,
        requested: usize,
        available: usize,
    },

    #[error("pattern vertex {w} has no unused host neighbour")]
    NoCandidate { w: VertexRef },

    #[error("no candidate for a new leaf at {w} keeps the embedding good ({tried} tried)")]
    NoGoodCandidate { w: VertexRef, tried: usize },

    #[error("pattern vertex {v} has degree {degree}, above the allowed {limit}")]
    DegreeTooHigh {
        v: VertexRef,
        degree: usize,
        limit: usize,
    },

    #[error("pattern would have {count} vertices in part {part}, above the bound {bound}")]
    PatternBoundExceeded {
        part: PartId,
        count: usize,
        bound: usize,
    },

    #[error("path length {sigma} too short: need at least {needed}")]
    SigmaTooShort { sigma: usize, needed: usize },

    #[error("branching trees need maximum degree at least 3, got {0}")]
    DegreeTooSmall(usize),

    #[error("hypotheses violated: {}", fmt_violations(.0))]
    HypothesisViolation(Vec<Violation>),

    #[error("no host edge between the two leaf sets")]
    NoCrossingEdge(Box<CrossingFailure>),

    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error("vertex set {0:?} is not a valid set of its part")]
    InvalidSet(VertexSet),
}

fn fmt_violations(v: &[Violation]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}
