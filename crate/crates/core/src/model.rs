//! Tokens, dependency trees, word alignments and aligned tree pairs.
//!
//! Token indices are 1-based and follow surface order. Index `0` is the
//! virtual root: the single token attached to it is the root of the tree.

use alloc::borrow::Cow;
use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::slice;

use crate::error::{Error, TreeError};

/// Head index of the root token.
pub const ROOT: usize = 0;

/// A surface word with its position and part-of-speech tag.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Token {
    index: usize,
    form: String,
    pos: String,
}

impl Token {
    pub fn new(index: usize, form: impl Into<String>, pos: impl Into<String>) -> Self {
        Token {
            index,
            form: form.into(),
            pos: pos.into(),
        }
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn form(&self) -> &str {
        &self.form
    }

    pub fn pos(&self) -> &str {
        &self.pos
    }
}

fn has_line_syntax(text: &str) -> bool {
    text.contains(['\t', '\n', '\r'])
}

/// A rooted, single-headed, acyclic dependency tree.
///
/// Trees are immutable. The rewrites in [`crate::ops`] return new trees.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DepTree {
    tokens: Vec<Token>,
    // heads[i] is the head of token i + 1.
    heads: Vec<usize>,
    root: usize,
}

impl DepTree {
    /// Builds and validates a tree. `heads[i]` is the head of token `i + 1`.
    pub fn new(tokens: Vec<Token>, heads: Vec<usize>) -> Result<Self, TreeError> {
        if tokens.is_empty() {
            return Err(TreeError::Empty);
        }
        for (position, token) in (1..).zip(&tokens) {
            if token.index != position {
                return Err(TreeError::IndexMismatch {
                    position,
                    found: token.index,
                });
            }
            if token.form.is_empty() {
                return Err(TreeError::EmptyForm { index: position });
            }
            if token.pos.is_empty() {
                return Err(TreeError::EmptyPos { index: position });
            }
            if has_line_syntax(&token.form) || has_line_syntax(&token.pos) {
                return Err(TreeError::InvalidText { index: position });
            }
        }
        let n = tokens.len();
        if heads.len() != n {
            return Err(TreeError::HeadCount {
                expected: n,
                found: heads.len(),
            });
        }
        for (index, &head) in (1..).zip(&heads) {
            if head > n {
                return Err(TreeError::DanglingHead { index, head });
            }
        }

        // A chain longer than n steps must revisit a token.
        for start in 1..=n {
            let mut current = start;
            let mut steps = 0;
            while current != ROOT {
                steps += 1;
                if steps > n {
                    return Err(TreeError::Cycle { index: start });
                }
                current = heads[current - 1];
            }
        }

        let mut roots = (1..).zip(&heads).filter(|&(_, &h)| h == ROOT).map(|(i, _)| i);
        // Acyclic and non-empty, so at least one chain ends at the root.
        let root = roots.next().ok_or(TreeError::Cycle { index: 1 })?;
        if let Some(second) = roots.next() {
            return Err(TreeError::MultipleRoots {
                first: root,
                second,
            });
        }

        Ok(DepTree {
            tokens,
            heads,
            root,
        })
    }

    /// Builds a tree from `(form, pos, head)` rows in surface order.
    pub fn from_rows<F, P>(rows: &[(F, P, usize)]) -> Result<Self, TreeError>
    where
        F: AsRef<str>,
        P: AsRef<str>,
    {
        let tokens = (1..)
            .zip(rows)
            .map(|(i, (form, pos, _))| Token::new(i, form.as_ref(), pos.as_ref()))
            .collect();
        let heads = rows.iter().map(|&(_, _, head)| head).collect();
        DepTree::new(tokens, heads)
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    /// Always false; a tree has at least one token.
    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    /// Heads in surface order; entry `i` is the head of token `i + 1`.
    pub fn heads(&self) -> &[usize] {
        &self.heads
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn contains(&self, index: usize) -> bool {
        (1..=self.len()).contains(&index)
    }

    pub fn token(&self, index: usize) -> Result<&Token, TreeError> {
        self.check(index)?;
        Ok(&self.tokens[index - 1])
    }

    /// POS tag of a token. Panics on an invalid index.
    pub fn pos(&self, index: usize) -> &str {
        &self.tokens[index - 1].pos
    }

    /// Surface form of a token. Panics on an invalid index.
    pub fn form(&self, index: usize) -> &str {
        &self.tokens[index - 1].form
    }

    /// Head of `index`, [`ROOT`] for the root token.
    pub fn parent(&self, index: usize) -> Result<usize, TreeError> {
        self.check(index)?;
        Ok(self.heads[index - 1])
    }

    /// Head of `index` for an index known to be valid.
    pub fn head(&self, index: usize) -> usize {
        self.heads[index - 1]
    }

    /// Dependents of `index` in ascending order. `children(ROOT)` is the root.
    pub fn children(&self, index: usize) -> Result<Vec<usize>, TreeError> {
        if index != ROOT {
            self.check(index)?;
        }
        Ok(self.dependents(index).collect())
    }

    /// Dependents of `index` without validating it.
    pub fn dependents(&self, index: usize) -> impl Iterator<Item = usize> + '_ {
        (1..)
            .zip(&self.heads)
            .filter(move |&(_, &h)| h == index)
            .map(|(i, _)| i)
    }

    /// All `(child, head)` edges in child order; there are `len() - 1`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (1..)
            .zip(&self.heads)
            .filter(|&(_, &h)| h != ROOT)
            .map(|(i, &h)| (i, h))
    }

    pub fn edge_count(&self) -> usize {
        self.len() - 1
    }

    pub fn has_edge(&self, child: usize, head: usize) -> bool {
        head != ROOT && self.contains(child) && self.heads[child - 1] == head
    }

    /// True if `ancestor` lies strictly above `index` on its head chain.
    pub fn is_ancestor(&self, ancestor: usize, index: usize) -> bool {
        let mut current = self.heads[index - 1];
        while current != ROOT {
            if current == ancestor {
                return true;
            }
            current = self.heads[current - 1];
        }
        false
    }

    fn check(&self, index: usize) -> Result<(), TreeError> {
        if self.contains(index) {
            Ok(())
        } else {
            Err(TreeError::InvalidIndex { index })
        }
    }
}

/// A many-to-many word alignment as a set of 1-based
/// `(source index, target index)` links.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Alignment {
    links: BTreeSet<(usize, usize)>,
}

impl Alignment {
    pub fn new() -> Self {
        Alignment::default()
    }

    pub fn len(&self) -> usize {
        self.links.len()
    }

    pub fn is_empty(&self) -> bool {
        self.links.is_empty()
    }

    pub fn contains(&self, source: usize, target: usize) -> bool {
        self.links.contains(&(source, target))
    }

    /// Adds a link, returning false if it was already present.
    pub fn insert(&mut self, source: usize, target: usize) -> bool {
        self.links.insert((source, target))
    }

    pub fn remove(&mut self, source: usize, target: usize) -> bool {
        self.links.remove(&(source, target))
    }

    /// Links sorted by `(source, target)`.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.links.iter().copied()
    }

    /// Target indices linked to `source`, ascending.
    pub fn targets(&self, source: usize) -> impl Iterator<Item = usize> + '_ {
        self.links
            .range((source, 0)..=(source, usize::MAX))
            .map(|&(_, t)| t)
    }

    /// Source indices linked to `target`, ascending.
    pub fn sources(&self, target: usize) -> impl Iterator<Item = usize> + '_ {
        self.links
            .iter()
            .filter(move |&&(_, t)| t == target)
            .map(|&(s, _)| s)
    }

    pub fn is_source_aligned(&self, source: usize) -> bool {
        self.targets(source).next().is_some()
    }

    pub fn is_target_aligned(&self, target: usize) -> bool {
        self.sources(target).next().is_some()
    }

    /// The same links with source and target exchanged.
    pub fn inverted(&self) -> Alignment {
        self.iter().map(|(s, t)| (t, s)).collect()
    }
}

impl FromIterator<(usize, usize)> for Alignment {
    fn from_iter<I: IntoIterator<Item = (usize, usize)>>(iter: I) -> Self {
        Alignment {
            links: iter.into_iter().collect(),
        }
    }
}

/// A source tree, a target tree and the word alignment between them.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlignedPair {
    id: String,
    source: DepTree,
    target: DepTree,
    alignment: Alignment,
}

impl AlignedPair {
    pub fn new(
        id: impl Into<String>,
        source: DepTree,
        target: DepTree,
        alignment: Alignment,
    ) -> Result<Self, Error> {
        for (s, t) in alignment.iter() {
            if !source.contains(s) || !target.contains(t) {
                return Err(Error::AlignmentOutOfRange {
                    source_index: s,
                    target_index: t,
                    source_len: source.len(),
                    target_len: target.len(),
                });
            }
        }
        Ok(AlignedPair {
            id: id.into(),
            source,
            target,
            alignment,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn source(&self) -> &DepTree {
        &self.source
    }

    pub fn target(&self) -> &DepTree {
        &self.target
    }

    pub fn alignment(&self) -> &Alignment {
        &self.alignment
    }

    pub fn into_parts(self) -> (String, DepTree, DepTree, Alignment) {
        (self.id, self.source, self.target, self.alignment)
    }

    /// The pair as seen from one side: the trees swap roles and the
    /// alignment is inverted for [`crate::Direction::TargetToSource`].
    pub fn oriented(&self, direction: crate::Direction) -> Oriented<'_> {
        match direction {
            crate::Direction::SourceToTarget => Oriented {
                side: &self.source,
                other: &self.target,
                alignment: Cow::Borrowed(&self.alignment),
            },
            crate::Direction::TargetToSource => Oriented {
                side: &self.target,
                other: &self.source,
                alignment: Cow::Owned(self.alignment.inverted()),
            },
        }
    }
}

/// An aligned pair viewed from the side whose edges are being measured.
pub struct Oriented<'a> {
    pub side: &'a DepTree,
    pub other: &'a DepTree,
    /// Links from `side` indices to `other` indices.
    pub alignment: Cow<'a, Alignment>,
}

/// A sequence of aligned pairs with unique ids.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Corpus {
    pairs: Vec<AlignedPair>,
}

impl Corpus {
    pub fn new(pairs: Vec<AlignedPair>) -> Result<Self, Error> {
        let mut seen = BTreeSet::new();
        for pair in &pairs {
            if !seen.insert(pair.id.as_str()) {
                return Err(Error::DuplicateId(pair.id.clone()));
            }
        }
        Ok(Corpus { pairs })
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pairs(&self) -> &[AlignedPair] {
        &self.pairs
    }

    pub fn iter(&self) -> slice::Iter<'_, AlignedPair> {
        self.pairs.iter()
    }

    pub fn into_pairs(self) -> Vec<AlignedPair> {
        self.pairs
    }
}

impl<'a> IntoIterator for &'a Corpus {
    type Item = &'a AlignedPair;
    type IntoIter = slice::Iter<'a, AlignedPair>;

    fn into_iter(self) -> Self::IntoIter {
        self.pairs.iter()
    }
}
