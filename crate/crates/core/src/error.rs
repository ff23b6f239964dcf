use thiserror::Error;

use crate::manifold::Violation;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("row {row} has {found} entries, expected {expected}")]
    RaggedMatrix {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("cannot multiply {left:?} by {right:?}")]
    ShapeMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("torsion factor exponent and multiplicity must be positive")]
    EmptyFactor,
    #[error("invariant factor has a prime divisor wider than 64 bits")]
    PrimeTooLarge,
    #[error("cannot parse group {text:?}: {reason}")]
    GroupSyntax { text: String, reason: String },
    #[error("subgroup counting needs a finite group, got rank {0}")]
    InfiniteSubgroup(usize),

    #[error("chain complex: {0}")]
    Complex(String),
    #[error("degree {degree} out of range 0..={top}")]
    DegreeOutOfRange { degree: usize, top: usize },
    #[error("unknown builtin {0:?}")]
    UnknownBuiltin(String),

    #[error("profile {name:?} invalid: {violation}")]
    InvalidProfile { name: String, violation: Violation },
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("transform hypothesis violated: {0}")]
    TransformHypothesis(String),
    #[error("unknown catalog entry {0:?}")]
    UnknownManifold(String),
    #[error("catalog already has an entry named {0:?}")]
    DuplicateManifold(String),

    #[error("part {name:?} of dimension {dim} does not fit target dimension {n}")]
    PartTooLarge { name: String, dim: usize, n: usize },
    #[error("part {name:?} embeds only in dimension {embeds_in}, target is {n}")]
    NotEmbeddable {
        name: String,
        embeds_in: usize,
        n: usize,
    },
    #[error("operation {index} is invalid: {source}")]
    InvalidOp { index: usize, source: Box<Error> },
    #[error("state has {found} homology groups, expected {expected}")]
    StateLength { expected: usize, found: usize },
    #[error("H_0 of a Reeb space must be Z, got {0}")]
    DisconnectedState(String),
    #[error("target dimension mismatch: {0} vs {1}")]
    TargetMismatch(usize, usize),
    #[error("recorded ledger differs from replay at operation {0}")]
    LedgerMismatch(usize),
    #[error("source dimension {m} gives codimension {k}; need codimension at least 2")]
    CodimensionTooSmall { m: usize, k: isize },

    #[error("malformed prime-power partition: {0}")]
    MalformedPartition(String),
    #[error("malformed subgroup family: {0}")]
    MalformedFamily(String),
    #[error("rank {rank} outside 1..={ops}")]
    TruncationRank { rank: usize, ops: usize },
    #[error("catalog is empty")]
    EmptyCatalog,
}
