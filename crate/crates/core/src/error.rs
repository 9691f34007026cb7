use alloc::string::String;

use thiserror::Error;

use crate::ops::Side;

/// Violations of dependency tree invariants and invalid tree edits.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("tree has no tokens")]
    Empty,

    #[error("token at position {position} has index {found}, expected {position}")]
    IndexMismatch { position: usize, found: usize },

    #[error("token {index} has an empty form")]
    EmptyForm { index: usize },

    #[error("token {index} has an empty POS tag")]
    EmptyPos { index: usize },

    #[error("token {index} contains a tab or line break")]
    InvalidText { index: usize },

    #[error("{found} heads given for {expected} tokens")]
    HeadCount { expected: usize, found: usize },

    #[error("token {index} has head {head}, which is not a token index")]
    DanglingHead { index: usize, head: usize },

    #[error("head chain starting at token {index} never reaches the root")]
    Cycle { index: usize },

    #[error("tokens {first} and {second} are both attached to the root")]
    MultipleRoots { first: usize, second: usize },

    #[error("{index} is not a token index")]
    InvalidIndex { index: usize },

    #[error("cannot remove the only token of a tree")]
    LastToken,

    #[error("({child}, {parent}) is not an edge of the tree")]
    NotAnEdge { child: usize, parent: usize },
}

/// Errors raised by aligned pairs, corpora and the algorithms built on them.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Tree(#[from] TreeError),

    #[error("alignment link {source_index}-{target_index} is out of range ({source_len} source, {target_len} target tokens)")]
    AlignmentOutOfRange {
        source_index: usize,
        target_index: usize,
        source_len: usize,
        target_len: usize,
    },

    #[error("duplicate pair id `{0}`")]
    DuplicateId(String),

    #[error("pair `{id}`: every {side} token is spontaneous")]
    DegenerateTree { id: String, side: Side },

    #[error("no token of the projected sentence is aligned")]
    ProjectionDegenerate,

    #[error("predicted and gold trees have different tokens")]
    TokenMismatch,

    #[error("split leaves an empty {0} set")]
    EmptySplit(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
}
