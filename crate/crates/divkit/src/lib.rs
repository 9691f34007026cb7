//! File formats, reports and the command line front end for `divkit-core`.

pub mod cli;
pub mod format;
pub mod report;

pub use format::{parse_corpus, serialize_corpus, CorpusDocument, ParseError};
