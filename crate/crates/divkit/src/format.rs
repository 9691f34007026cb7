//! The plain-text parallel corpus format.
//!
//! ```text
//! # languages en hi
//!
//! # id 1
//! ## source
//! 1	in	IN	0
//! 2	house	NN	1
//! ## target
//! 1	ghar	NN	0
//! 2	mein	PSP	1
//! ## align
//! 1-2 2-1
//! ```
//!
//! Token lines are `INDEX<TAB>FORM<TAB>POS<TAB>HEAD` with head 0 for the
//! root. The alignment line lists `source-target` links and may be empty.
//! Instances are separated by one blank line. The `# languages` header is
//! optional when parsing and always written.

#![allow(clippy::tabs_in_doc_comments)]

use std::fmt::Write as _;

use divkit_core::projection::ProjectedTree;
use divkit_core::{AlignedPair, Alignment, Corpus, DepTree, Error as CoreError, Token};
use thiserror::Error;

pub const DEFAULT_SOURCE_LANGUAGE: &str = "src";
pub const DEFAULT_TARGET_LANGUAGE: &str = "tgt";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusDocument {
    pub corpus: Corpus,
    pub source_language: String,
    pub target_language: String,
}

impl CorpusDocument {
    pub fn new(corpus: Corpus, source_language: impl Into<String>, target_language: impl Into<String>) -> Self {
        CorpusDocument {
            corpus,
            source_language: source_language.into(),
            target_language: target_language.into(),
        }
    }
}

/// A parse failure at a 1-based line.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}: {reason}")]
pub struct ParseError {
    pub line: usize,
    pub reason: String,
}

fn fail<T>(line: usize, reason: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        line,
        reason: reason.into(),
    })
}

struct Lines<'a> {
    lines: Vec<&'a str>,
    next: usize,
}

impl<'a> Lines<'a> {
    fn peek(&self) -> Option<&'a str> {
        self.lines.get(self.next).copied()
    }

    // Line number of the line `peek` returns.
    fn number(&self) -> usize {
        self.next + 1
    }

    fn take(&mut self) -> Option<(usize, &'a str)> {
        let line = self.peek()?;
        self.next += 1;
        Some((self.next, line))
    }

    fn skip_blank(&mut self) {
        while self.peek().is_some_and(|l| l.trim().is_empty()) {
            self.next += 1;
        }
    }

    fn expect(&mut self, marker: &str) -> Result<usize, ParseError> {
        match self.take() {
            Some((n, l)) if l == marker => Ok(n),
            Some((n, l)) => fail(n, format!("expected `{marker}`, found `{l}`")),
            None => fail(self.number(), format!("expected `{marker}`, found end of file")),
        }
    }
}

fn parse_tree(lines: &mut Lines, header: usize) -> Result<DepTree, ParseError> {
    let mut tokens = Vec::new();
    let mut heads = Vec::new();
    while let Some(line) = lines.peek() {
        if line.starts_with('#') || line.trim().is_empty() {
            break;
        }
        let (n, line) = lines.take().unwrap();
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 4 {
            return fail(n, format!("expected 4 tab-separated columns, found {}", cols.len()));
        }
        let index: usize = match cols[0].parse() {
            Ok(i) => i,
            Err(_) => return fail(n, format!("token index `{}` is not a positive integer", cols[0])),
        };
        if index != tokens.len() + 1 {
            return fail(n, format!("token index {index} out of sequence, expected {}", tokens.len() + 1));
        }
        let head: usize = match cols[3].parse() {
            Ok(h) => h,
            Err(_) => return fail(n, format!("head `{}` is not a non-negative integer", cols[3])),
        };
        tokens.push(Token::new(index, cols[1], cols[2]));
        heads.push(head);
    }
    if tokens.is_empty() {
        return fail(header, "tree has no tokens");
    }
    DepTree::new(tokens, heads).or_else(|e| fail(header, e.to_string()))
}

fn parse_alignment(line: usize, text: &str) -> Result<Alignment, ParseError> {
    let mut alignment = Alignment::new();
    for link in text.split_whitespace() {
        let parsed = link
            .split_once('-')
            .and_then(|(s, t)| Some((s.parse::<usize>().ok()?, t.parse::<usize>().ok()?)));
        match parsed {
            Some((s, t)) => {
                if !alignment.insert(s, t) {
                    return fail(line, format!("duplicate link `{link}`"));
                }
            }
            None => return fail(line, format!("malformed link `{link}`, expected `i-j`")),
        }
    }
    Ok(alignment)
}

fn parse_header(lines: &mut Lines) -> Result<Option<(String, String)>, ParseError> {
    let Some(line) = lines.peek() else {
        return Ok(None);
    };
    let Some(rest) = line.strip_prefix("# languages") else {
        return Ok(None);
    };
    let (n, _) = lines.take().unwrap();
    let labels: Vec<&str> = rest.split_whitespace().collect();
    match labels.as_slice() {
        [s, t] => Ok(Some((s.to_string(), t.to_string()))),
        _ => fail(n, "expected `# languages <source> <target>`"),
    }
}

/// Parses a corpus document.
pub fn parse_corpus(text: &str) -> Result<CorpusDocument, ParseError> {
    let mut lines = Lines {
        lines: text.lines().collect(),
        next: 0,
    };
    lines.skip_blank();
    if lines.peek().is_none() {
        return fail(1, "empty corpus");
    }
    let (source_language, target_language) = parse_header(&mut lines)?.unwrap_or_else(|| {
        (
            DEFAULT_SOURCE_LANGUAGE.to_string(),
            DEFAULT_TARGET_LANGUAGE.to_string(),
        )
    });

    let mut pairs = Vec::new();
    let mut ids = std::collections::BTreeSet::new();
    loop {
        lines.skip_blank();
        let Some((n, line)) = lines.take() else { break };
        let id = match line.strip_prefix("# id ") {
            Some(id) if !id.trim().is_empty() => id.to_string(),
            _ => return fail(n, format!("expected `# id <text>`, found `{line}`")),
        };
        if ids.contains(&id) {
            return fail(n, format!("duplicate id `{id}`"));
        }
        let source_line = lines.expect("## source")?;
        let source = parse_tree(&mut lines, source_line)?;
        let target_line = lines.expect("## target")?;
        let target = parse_tree(&mut lines, target_line)?;
        let align_line = lines.expect("## align")?;
        let (link_line, alignment) = match lines.peek() {
            Some(l) if !l.starts_with('#') => {
                let (k, l) = lines.take().unwrap();
                (k, parse_alignment(k, l)?)
            }
            _ => (align_line, Alignment::new()),
        };
        let pair = AlignedPair::new(id.clone(), source, target, alignment).or_else(|e| match e {
            CoreError::AlignmentOutOfRange { .. } => fail(link_line, format!("alignment index out of range: {e}")),
            other => fail(n, other.to_string()),
        })?;
        if lines.peek().is_some_and(|l| !l.trim().is_empty()) {
            return fail(lines.number(), "expected a blank line between instances");
        }
        ids.insert(id);
        pairs.push(pair);
    }
    let corpus = Corpus::new(pairs).or_else(|e| fail(1, e.to_string()))?;
    Ok(CorpusDocument::new(corpus, source_language, target_language))
}

fn write_tree(out: &mut String, tree: &DepTree) {
    for (token, head) in tree.tokens().iter().zip(tree.heads()) {
        let _ = writeln!(out, "{}\t{}\t{}\t{}", token.index(), token.form(), token.pos(), head);
    }
}

fn alignment_line(alignment: &Alignment) -> String {
    alignment
        .iter()
        .map(|(s, t)| format!("{s}-{t}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn write_pair(out: &mut String, pair: &AlignedPair) {
    let _ = writeln!(out, "# id {}", pair.id());
    out.push_str("## source\n");
    write_tree(out, pair.source());
    out.push_str("## target\n");
    write_tree(out, pair.target());
    out.push_str("## align\n");
    out.push_str(&alignment_line(pair.alignment()));
    out.push('\n');
}

/// Canonical text of a document.
pub fn serialize_corpus(doc: &CorpusDocument) -> String {
    let mut out = format!("# languages {} {}\n", doc.source_language, doc.target_language);
    for pair in doc.corpus.iter() {
        out.push('\n');
        write_pair(&mut out, pair);
    }
    out
}

/// Projected trees, one block per instance. Unattached tokens get head -1.
pub fn serialize_projected<'a, I>(source_language: &str, target_language: &str, trees: I) -> String
where
    I: IntoIterator<Item = (&'a str, &'a ProjectedTree)>,
{
    let mut out = format!("# languages {source_language} {target_language}\n");
    for (id, tree) in trees {
        let _ = write!(out, "\n# id {id}\n## projected\n");
        for (token, head) in tree.tokens().iter().zip(tree.heads()) {
            let head = head.map_or_else(|| "-1".to_string(), |h| h.to_string());
            let _ = writeln!(out, "{}\t{}\t{}\t{}", token.index(), token.form(), token.pos(), head);
        }
    }
    out
}
