//! Structural divergence between word-aligned dependency tree pairs.
//!
//! The crate is `no_std` (it only needs `alloc`) and contains the pure
//! algorithmic parts:
//!
//! * [`model`]: tokens, dependency trees, alignments, aligned pairs and corpora.
//! * [`metrics`]: the edge match predicate, match percentages and per-edge
//!   divergence classes.
//! * [`ops`]: the *remove*, *merge* and *swap* tree rewrites.
//! * [`pipeline`]: the staged transformation of an aligned pair
//!   (remove spontaneous words, merge, swap) with per-stage reports.
//! * [`pos_stats`]: operation rates broken down by POS tag pairs.
//! * [`projection`]: direct projection of POS tags and heads through an
//!   alignment.
//! * [`rules`]: learning and applying POS-pattern swap rules after
//!   projection, and attachment evaluation.
//!
//! File formats, reports and the command line tool live in the `divkit`
//! crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod error;
pub mod metrics;
pub mod model;
pub mod ops;
pub mod pipeline;
pub mod pos_stats;
pub mod projection;
pub mod rules;

pub use error::{Error, TreeError};
pub use metrics::{Direction, EdgeClass, MatchReport, Ratio};
pub use model::{AlignedPair, Alignment, Corpus, DepTree, Token, ROOT};
pub use ops::{OpKind, OpLog, OpLogEntry, Reindex, Side};
