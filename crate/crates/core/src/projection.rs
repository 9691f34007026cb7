//! Direct projection of POS tags and dependency heads from a parsed tree onto
//! the words of its translation.
//!
//! Ties are broken leftmost-first everywhere: a word linked to several words
//! on the other side uses the leftmost one. A projected word attaches to the
//! image of the nearest ancestor of its anchor that has an image other than
//! itself, skipping unaligned words of the parsed tree. Words without any
//! link stay unattached.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, TreeError};
use crate::model::{Alignment, DepTree, Token, ROOT};

/// POS assigned to words that receive no projected tag.
pub const UNKNOWN_POS: &str = "UNK";

/// A projected tree: every token has a projected POS, but only some have a
/// head.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProjectedTree {
    tokens: Vec<Token>,
    heads: Vec<Option<usize>>,
}

impl ProjectedTree {
    /// Builds a projected tree; the attached tokens must form an acyclic
    /// forest with at most one token attached to the root.
    pub fn new(tokens: Vec<Token>, heads: Vec<Option<usize>>) -> Result<Self, TreeError> {
        if heads.len() != tokens.len() {
            return Err(TreeError::HeadCount {
                expected: tokens.len(),
                found: heads.len(),
            });
        }
        let n = tokens.len();
        let mut root = None;
        for (index, head) in (1..).zip(&heads) {
            match *head {
                Some(h) if h > n => return Err(TreeError::DanglingHead { index, head: h }),
                Some(ROOT) => {
                    if let Some(first) = root {
                        return Err(TreeError::MultipleRoots {
                            first,
                            second: index,
                        });
                    }
                    root = Some(index);
                }
                _ => {}
            }
        }
        let tree = ProjectedTree { tokens, heads };
        for index in 1..=n {
            if tree.heads[index - 1].is_some_and(|h| tree.reaches(h, index)) {
                return Err(TreeError::Cycle { index });
            }
        }
        Ok(tree)
    }

    /// A fully attached projected tree with the tokens and heads of `tree`.
    pub fn from_tree(tree: &DepTree) -> Self {
        ProjectedTree {
            tokens: tree.tokens().to_vec(),
            heads: tree.heads().iter().copied().map(Some).collect(),
        }
    }

    /// The equivalent dependency tree if every token is attached.
    pub fn to_tree(&self) -> Option<DepTree> {
        let heads = self.heads.iter().copied().collect::<Option<Vec<_>>>()?;
        DepTree::new(self.tokens.clone(), heads).ok()
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn heads(&self) -> &[Option<usize>] {
        &self.heads
    }

    pub fn head(&self, index: usize) -> Option<usize> {
        self.heads[index - 1]
    }

    pub fn pos(&self, index: usize) -> &str {
        self.tokens[index - 1].pos()
    }

    pub fn root(&self) -> Option<usize> {
        (1..).zip(&self.heads).find(|&(_, &h)| h == Some(ROOT)).map(|(i, _)| i)
    }

    /// Indices of tokens that have a head.
    pub fn attached(&self) -> impl Iterator<Item = usize> + '_ {
        (1..).zip(&self.heads).filter(|(_, h)| h.is_some()).map(|(i, _)| i)
    }

    /// Attached `(child, head)` edges, excluding the root attachment.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (1..)
            .zip(&self.heads)
            .filter_map(|(i, h)| match *h {
                Some(ROOT) | None => None,
                Some(h) => Some((i, h)),
            })
    }

    /// Reverses the attached edge `(child, parent)` exactly like
    /// [`crate::ops::swap`].
    pub fn swap(&mut self, child: usize, parent: usize) -> Result<(), TreeError> {
        if parent == ROOT || child > self.len() || self.heads.get(child.wrapping_sub(1)) != Some(&Some(parent)) {
            return Err(TreeError::NotAnEdge { child, parent });
        }
        self.heads[child - 1] = self.heads[parent - 1];
        self.heads[parent - 1] = Some(child);
        Ok(())
    }

    // True if following heads from `from` arrives at `target`.
    fn reaches(&self, from: usize, target: usize) -> bool {
        let mut current = from;
        let mut steps = 0;
        while current != ROOT && steps <= self.len() {
            if current == target {
                return true;
            }
            match self.heads[current - 1] {
                Some(h) => current = h,
                None => return false,
            }
            steps += 1;
        }
        false
    }
}

/// POS tags for `tokens`, each copied from the leftmost parsed word it is
/// linked to, or [`UNKNOWN_POS`] for unlinked words. `alignment` links
/// indices of `tokens` (source) to indices of `parsed` (target).
pub fn project_pos(parsed: &DepTree, alignment: &Alignment, tokens: &[Token]) -> Vec<String> {
    (1..=tokens.len())
        .map(|i| match alignment.targets(i).next() {
            Some(e) => parsed.pos(e).to_string(),
            None => UNKNOWN_POS.to_string(),
        })
        .collect()
}

/// Projects the heads of `parsed` onto `tokens` through `alignment`.
///
/// The root is the leftmost word linked to the parsed root. If the parsed
/// root has no link, the leftmost word whose ancestor chain yields no head
/// becomes the root and the other such words attach to it.
pub fn project_tree(
    parsed: &DepTree,
    alignment: &Alignment,
    tokens: &[Token],
) -> Result<ProjectedTree, Error> {
    let n = tokens.len();
    if !(1..=n).any(|i| alignment.is_source_aligned(i)) {
        return Err(Error::ProjectionDegenerate);
    }
    let pos = project_pos(parsed, alignment, tokens);
    let tokens: Vec<Token> = tokens
        .iter()
        .zip(pos)
        .map(|(t, p)| Token::new(t.index(), t.form(), p))
        .collect();
    let image = |e: usize| alignment.sources(e).next();

    let mut projected = ProjectedTree {
        tokens,
        heads: vec![None; n],
    };
    let root = image(parsed.root());
    if let Some(r) = root {
        projected.heads[r - 1] = Some(ROOT);
    }

    let mut unplaced = Vec::new();
    for f in 1..=n {
        if Some(f) == root {
            continue;
        }
        let Some(mut e) = alignment.targets(f).next() else {
            continue;
        };
        loop {
            let h = parsed.head(e);
            if h == ROOT {
                unplaced.push(f);
                break;
            }
            if let Some(fh) = image(h) {
                if fh != f && !projected.reaches(fh, f) {
                    projected.heads[f - 1] = Some(fh);
                    break;
                }
            }
            e = h;
        }
    }

    let anchor = match root {
        Some(r) => Some(r),
        None => unplaced.first().copied().inspect(|&p| {
            projected.heads[p - 1] = Some(ROOT);
        }),
    };
    if let Some(a) = anchor {
        for &f in unplaced.iter().filter(|&&f| f != a) {
            projected.heads[f - 1] = Some(a);
        }
    }
    Ok(projected)
}

/// Leaves-first visiting order of a projected forest: dependents before
/// their heads, siblings left to right.
pub(crate) fn bottom_up_order(tree: &ProjectedTree) -> Vec<usize> {
    let n = tree.len();
    let mut dependents: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    let mut roots = Vec::new();
    for i in 1..=n {
        match tree.head(i) {
            Some(h) if h != ROOT => dependents[h].push(i),
            _ => roots.push(i),
        }
    }
    let mut order = Vec::with_capacity(n);
    let mut visited = BTreeSet::new();
    for r in roots {
        // (node, next dependent to visit)
        let mut stack = vec![(r, 0usize)];
        while let Some((node, next)) = stack.pop() {
            if let Some(&d) = dependents[node].get(next) {
                stack.push((node, next + 1));
                if visited.insert(d) {
                    stack.push((d, 0));
                }
            } else {
                order.push(node);
            }
        }
    }
    order
}
