//! The three tree rewrites: *remove* a token, *merge* a child into its
//! parent, and *swap* a child with its parent.
//!
//! Each call performs exactly one rewrite and returns a new tree. Remove and
//! merge delete a token, so surviving tokens are renumbered; the returned
//! [`Reindex`] maps old indices to new ones.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::TreeError;
use crate::model::{DepTree, Token, ROOT};

/// Mapping between the token indices of a tree before and after a rewrite.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Reindex {
    // forward[old - 1] is the new index of old token `old`.
    forward: Vec<Option<usize>>,
    // origin[new - 1] is the old token the new token descends from.
    origin: Vec<usize>,
}

impl Reindex {
    pub fn identity(len: usize) -> Self {
        Reindex {
            forward: (1..=len).map(Some).collect(),
            origin: (1..=len).collect(),
        }
    }

    /// New index of an old token. A merged child maps to the merged node; a
    /// removed token maps to `None`.
    pub fn get(&self, old: usize) -> Option<usize> {
        self.forward.get(old.checked_sub(1)?).copied().flatten()
    }

    /// The old token a new token descends from (the survivor for merges).
    pub fn origin(&self, new: usize) -> usize {
        self.origin[new - 1]
    }

    pub fn old_len(&self) -> usize {
        self.forward.len()
    }

    pub fn new_len(&self) -> usize {
        self.origin.len()
    }

    /// The mapping obtained by applying `self` and then `next`.
    pub fn then(&self, next: &Reindex) -> Reindex {
        debug_assert_eq!(self.new_len(), next.old_len());
        Reindex {
            forward: self
                .forward
                .iter()
                .map(|m| m.and_then(|mid| next.get(mid)))
                .collect(),
            origin: next.origin.iter().map(|&mid| self.origin(mid)).collect(),
        }
    }
}

/// A rewritten tree together with the index mapping from the input tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rewrite {
    pub tree: DepTree,
    pub reindex: Reindex,
}

/// Drops token `dropped` and renumbers the rest. `heads` are in old indices
/// and must no longer point at `dropped`. `redirect` is where the dropped
/// index maps to (the survivor of a merge).
fn compact(
    tree: &DepTree,
    heads: &[usize],
    dropped: usize,
    redirect: Option<usize>,
    survivor_form: Option<String>,
) -> Result<Rewrite, TreeError> {
    let renumber = |old: usize| if old > dropped { old - 1 } else { old };
    let forward: Vec<Option<usize>> = (1..=tree.len())
        .map(|old| {
            if old == dropped {
                redirect.map(renumber)
            } else {
                Some(renumber(old))
            }
        })
        .collect();
    let origin: Vec<usize> = (1..=tree.len()).filter(|&old| old != dropped).collect();

    let mut tokens = Vec::with_capacity(origin.len());
    let mut new_heads = Vec::with_capacity(origin.len());
    for (new, &old) in (1..).zip(&origin) {
        let token = &tree.tokens()[old - 1];
        let form = match (&survivor_form, redirect) {
            (Some(form), Some(survivor)) if survivor == old => form.clone(),
            _ => String::from(token.form()),
        };
        tokens.push(Token::new(new, form, token.pos()));
        let head = heads[old - 1];
        new_heads.push(if head == ROOT { ROOT } else { renumber(head) });
    }

    Ok(Rewrite {
        tree: DepTree::new(tokens, new_heads)?,
        reindex: Reindex { forward, origin },
    })
}

/// Removes token `w`, attaching its dependents to its head.
///
/// When `w` is the root its leftmost dependent becomes the new root and the
/// other dependents attach to that token.
pub fn remove(w: usize, tree: &DepTree) -> Result<Rewrite, TreeError> {
    let parent = tree.parent(w)?;
    if tree.len() == 1 {
        return Err(TreeError::LastToken);
    }
    let mut heads = tree.heads().to_vec();
    let new_head = if parent == ROOT {
        // n >= 2 and w is the root, so w has a dependent.
        let promoted = tree
            .dependents(w)
            .next()
            .ok_or(TreeError::Cycle { index: w })?;
        heads[promoted - 1] = ROOT;
        promoted
    } else {
        parent
    };
    for h in heads.iter_mut() {
        if *h == w {
            *h = new_head;
        }
    }
    compact(tree, &heads, w, None, None)
}

/// True if removing `w` promotes one of its dependents to root.
pub fn is_root_promotion(w: usize, tree: &DepTree) -> bool {
    tree.head(w) == ROOT
}

/// Merges `child` into its head `parent`. The merged token keeps the
/// parent's position and POS, takes the form `child+parent`, and inherits
/// the child's dependents.
pub fn merge(child: usize, parent: usize, tree: &DepTree) -> Result<Rewrite, TreeError> {
    if !tree.has_edge(child, parent) {
        return Err(TreeError::NotAnEdge { child, parent });
    }
    let mut heads = tree.heads().to_vec();
    for h in heads.iter_mut() {
        if *h == child {
            *h = parent;
        }
    }
    let form = format!("{}+{}", tree.form(child), tree.form(parent));
    compact(tree, &heads, child, Some(parent), Some(form))
}

/// Reverses the edge `(child, parent)`: `child` takes over the head of
/// `parent` and `parent` becomes a dependent of `child`. All other
/// attachments are unchanged. Token indices do not change.
pub fn swap(child: usize, parent: usize, tree: &DepTree) -> Result<DepTree, TreeError> {
    if !tree.has_edge(child, parent) {
        return Err(TreeError::NotAnEdge { child, parent });
    }
    let mut heads = tree.heads().to_vec();
    heads[child - 1] = heads[parent - 1];
    heads[parent - 1] = child;
    DepTree::new(tree.tokens().to_vec(), heads)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OpKind {
    Remove,
    Merge,
    Swap,
}

impl OpKind {
    pub fn as_str(self) -> &'static str {
        match self {
            OpKind::Remove => "REMOVE",
            OpKind::Merge => "MERGE",
            OpKind::Swap => "SWAP",
        }
    }
}

impl fmt::Display for OpKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which tree of an aligned pair an operation altered.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Source,
    Target,
}

impl Side {
    pub fn as_str(self) -> &'static str {
        match self {
            Side::Source => "SOURCE",
            Side::Target => "TARGET",
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One applied operation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OpLogEntry {
    pub pair_id: String,
    pub kind: OpKind,
    pub side: Side,
    /// POS of the child; for removals, POS of the removed token.
    pub child_pos: String,
    /// POS of the parent; `None` for removals.
    pub parent_pos: Option<String>,
    /// Forms of the affected tokens: `[removed]` or `[child, parent]`.
    pub forms: Vec<String>,
    /// Index of the child (or removed token) in the untransformed tree.
    pub child_origin: usize,
    /// Index of the parent in the untransformed tree; `None` for removals.
    pub parent_origin: Option<usize>,
    /// A removal of the root that promoted its leftmost dependent.
    pub root_promotion: bool,
}

pub type OpLog = Vec<OpLogEntry>;
