//! How often each operation applied, per POS tag or POS tag pair.
//!
//! The denominator of a rate is the number of times the tag (removals) or
//! the `(child, parent)` tag pair (merges and swaps) occurs on the altered
//! side of the untransformed corpus. An operation applied to an edge that
//! only came into existence through an earlier operation adds one to the
//! denominator as well, so a rate never exceeds 100%.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::metrics::{Direction, Ratio};
use crate::model::AlignedPair;
use crate::ops::{OpKind, OpLogEntry, Side};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PosPairStat {
    pub kind: OpKind,
    pub child_pos: String,
    /// `None` for removals.
    pub parent_pos: Option<String>,
    pub applied: u64,
    pub opportunities: u64,
}

impl PosPairStat {
    pub fn ratio(&self) -> Ratio {
        Ratio::new(self.applied, self.opportunities)
    }

    /// Applied over opportunities, as a percentage.
    pub fn rate(&self) -> f64 {
        self.ratio().percent()
    }
}

/// The tree altered when measuring in `direction`.
pub fn altered_side(direction: Direction) -> Side {
    match direction {
        Direction::SourceToTarget => Side::Source,
        Direction::TargetToSource => Side::Target,
    }
}

type Key = (OpKind, String, Option<String>);

/// Per-POS operation statistics for the side altered in `direction`.
///
/// `baseline` are the untransformed pairs and `log` the operations the
/// pipeline applied to them. Swaps are only ever applied to the source tree,
/// so no swap statistics are produced for the target side. Rows are sorted
/// by rate and then by applied count, both descending.
pub fn pos_breakdown<'a, 'l, I, L>(baseline: I, log: L, direction: Direction) -> Vec<PosPairStat>
where
    I: IntoIterator<Item = &'a AlignedPair>,
    L: IntoIterator<Item = &'l OpLogEntry>,
{
    let side = altered_side(direction);
    let mut edge_kinds = alloc::vec![OpKind::Merge];
    if side == Side::Source {
        edge_kinds.push(OpKind::Swap);
    }

    let mut table: BTreeMap<Key, (u64, u64)> = BTreeMap::new();
    let mut pairs = BTreeMap::new();
    for pair in baseline {
        let tree = match side {
            Side::Source => pair.source(),
            Side::Target => pair.target(),
        };
        for token in tree.tokens() {
            let key = (OpKind::Remove, token.pos().to_string(), None);
            table.entry(key).or_default().1 += 1;
        }
        for (child, parent) in tree.edges() {
            for &kind in &edge_kinds {
                let key = (
                    kind,
                    tree.pos(child).to_string(),
                    Some(tree.pos(parent).to_string()),
                );
                table.entry(key).or_default().1 += 1;
            }
        }
        pairs.insert(pair.id(), tree);
    }

    for entry in log {
        if entry.side != side {
            continue;
        }
        let key = (entry.kind, entry.child_pos.clone(), entry.parent_pos.clone());
        let counts = table.entry(key).or_default();
        counts.0 += 1;
        let seen_in_baseline = match (entry.kind, entry.parent_origin) {
            (OpKind::Remove, _) => pairs.contains_key(entry.pair_id.as_str()),
            (_, Some(parent)) => pairs
                .get(entry.pair_id.as_str())
                .is_some_and(|t| t.has_edge(entry.child_origin, parent)),
            (_, None) => false,
        };
        if !seen_in_baseline {
            counts.1 += 1;
        }
    }

    let mut stats: Vec<PosPairStat> = table
        .into_iter()
        .filter(|(_, (_, opportunities))| *opportunities > 0)
        .map(|((kind, child_pos, parent_pos), (applied, opportunities))| PosPairStat {
            kind,
            child_pos,
            parent_pos,
            applied,
            opportunities,
        })
        .collect();
    stats.sort_by(|a, b| {
        b.ratio()
            .cmp_value(a.ratio())
            .then(b.applied.cmp(&a.applied))
            .then_with(|| a.kind.cmp(&b.kind))
            .then_with(|| a.child_pos.cmp(&b.child_pos))
            .then_with(|| a.parent_pos.cmp(&b.parent_pos))
    });
    stats
}

/// Sum of applied counts for one operation kind.
pub fn total_applied(stats: &[PosPairStat], kind: OpKind) -> u64 {
    stats
        .iter()
        .filter(|s| s.kind == kind)
        .map(|s| s.applied)
        .sum()
}
