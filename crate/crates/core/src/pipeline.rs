//! Staged alteration of an aligned tree pair.
//!
//! 1. Remove spontaneous (unaligned) tokens from the source, then the target.
//! 2. Merge a token into its head when both are linked to the same word of
//!    the other tree, on the source and then the target side, repeated until
//!    no such link remains. The link of the merged child is dropped; its
//!    other links move to the merged node.
//! 3. Swap a source token with its head when the head is linked to a
//!    dependent of a word the token is linked to. Links are visited once in
//!    `(source, target)` order and each edge is swapped at most once.
//!
//! Every stage is deterministic. Operation logs record the indices of the
//! affected tokens in the untransformed trees.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::error::Error;
use crate::metrics::{pair_breakdown, Direction, MatchReport};
use crate::model::{AlignedPair, Alignment, DepTree, ROOT};
use crate::ops::{self, OpKind, OpLog, OpLogEntry, Reindex, Side};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Stage {
    Baseline,
    Remove,
    Merge,
    Swap,
}

impl Stage {
    pub const ALL: [Stage; 4] = [Stage::Baseline, Stage::Remove, Stage::Merge, Stage::Swap];

    pub fn as_str(self) -> &'static str {
        match self {
            Stage::Baseline => "BASELINE",
            Stage::Remove => "REMOVE",
            Stage::Merge => "MERGE",
            Stage::Swap => "SWAP",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Result of one stage on one pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StageOutput {
    pub pair: AlignedPair,
    /// Operations in application order. Indices in the entries refer to the
    /// stage input.
    pub log: OpLog,
    /// Source indices of the stage input to the output.
    pub source_map: Reindex,
    /// Target indices of the stage input to the output.
    pub target_map: Reindex,
}

struct Work {
    id: String,
    source: DepTree,
    target: DepTree,
    alignment: Alignment,
    source_map: Reindex,
    target_map: Reindex,
    log: OpLog,
}

impl Work {
    fn new(pair: &AlignedPair) -> Self {
        Work {
            id: pair.id().to_string(),
            source: pair.source().clone(),
            target: pair.target().clone(),
            alignment: pair.alignment().clone(),
            source_map: Reindex::identity(pair.source().len()),
            target_map: Reindex::identity(pair.target().len()),
            log: OpLog::new(),
        }
    }

    fn tree(&self, side: Side) -> &DepTree {
        match side {
            Side::Source => &self.source,
            Side::Target => &self.target,
        }
    }

    fn map(&self, side: Side) -> &Reindex {
        match side {
            Side::Source => &self.source_map,
            Side::Target => &self.target_map,
        }
    }

    fn is_aligned(&self, side: Side, index: usize) -> bool {
        match side {
            Side::Source => self.alignment.is_source_aligned(index),
            Side::Target => self.alignment.is_target_aligned(index),
        }
    }

    fn record(&mut self, kind: OpKind, side: Side, child: usize, parent: Option<usize>) {
        let tree = self.tree(side);
        let map = self.map(side);
        let mut forms = Vec::with_capacity(2);
        forms.push(tree.form(child).to_string());
        if let Some(p) = parent {
            forms.push(tree.form(p).to_string());
        }
        let entry = OpLogEntry {
            pair_id: self.id.clone(),
            kind,
            side,
            child_pos: tree.pos(child).to_string(),
            parent_pos: parent.map(|p| tree.pos(p).to_string()),
            forms,
            child_origin: map.origin(child),
            parent_origin: parent.map(|p| map.origin(p)),
            root_promotion: kind == OpKind::Remove && ops::is_root_promotion(child, tree),
        };
        self.log.push(entry);
    }

    fn apply(&mut self, side: Side, rewrite: ops::Rewrite) {
        let r = &rewrite.reindex;
        self.alignment = match side {
            Side::Source => self
                .alignment
                .iter()
                .filter_map(|(s, t)| Some((r.get(s)?, t)))
                .collect(),
            Side::Target => self
                .alignment
                .iter()
                .filter_map(|(s, t)| Some((s, r.get(t)?)))
                .collect(),
        };
        match side {
            Side::Source => {
                self.source_map = self.source_map.then(r);
                self.source = rewrite.tree;
            }
            Side::Target => {
                self.target_map = self.target_map.then(r);
                self.target = rewrite.tree;
            }
        }
    }

    fn finish(self) -> Result<StageOutput, Error> {
        Ok(StageOutput {
            pair: AlignedPair::new(self.id, self.source, self.target, self.alignment)?,
            log: self.log,
            source_map: self.source_map,
            target_map: self.target_map,
        })
    }

    fn remove_side(&mut self, side: Side) -> Result<(), Error> {
        let len = self.tree(side).len();
        if !(1..=len).any(|i| self.is_aligned(side, i)) {
            return Err(Error::DegenerateTree {
                id: self.id.clone(),
                side,
            });
        }
        // Leftmost spontaneous token first; indices shift after each removal.
        while let Some(w) = (1..=self.tree(side).len()).find(|&i| !self.is_aligned(side, i)) {
            self.record(OpKind::Remove, side, w, None);
            let rewrite = ops::remove(w, self.tree(side))?;
            self.apply(side, rewrite);
        }
        Ok(())
    }

    /// First link `(f, e)`, in link order, whose source token's head is also
    /// linked to `e`.
    fn source_merge_candidate(&self) -> Option<(usize, usize, usize)> {
        self.alignment.iter().find_map(|(f, e)| {
            let p = self.source.head(f);
            (p != ROOT && self.alignment.contains(p, e)).then_some((f, e, p))
        })
    }

    fn target_merge_candidate(&self) -> Option<(usize, usize, usize)> {
        self.alignment.iter().find_map(|(f, e)| {
            let p = self.target.head(e);
            (p != ROOT && self.alignment.contains(f, p)).then_some((f, e, p))
        })
    }

    fn merge_source(&mut self) -> Result<bool, Error> {
        let mut changed = false;
        while let Some((f, e, p)) = self.source_merge_candidate() {
            self.record(OpKind::Merge, Side::Source, f, Some(p));
            let rewrite = ops::merge(f, p, &self.source)?;
            self.alignment.remove(f, e);
            self.apply(Side::Source, rewrite);
            changed = true;
        }
        Ok(changed)
    }

    fn merge_target(&mut self) -> Result<bool, Error> {
        let mut changed = false;
        while let Some((f, e, p)) = self.target_merge_candidate() {
            self.record(OpKind::Merge, Side::Target, e, Some(p));
            let rewrite = ops::merge(e, p, &self.target)?;
            self.alignment.remove(f, e);
            self.apply(Side::Target, rewrite);
            changed = true;
        }
        Ok(changed)
    }

    fn swap_source(&mut self) -> Result<(), Error> {
        let links: Vec<(usize, usize)> = self.alignment.iter().collect();
        let mut swapped = BTreeSet::new();
        for (f, e) in links {
            let p = self.source.head(f);
            if p == ROOT || swapped.contains(&(f.min(p), f.max(p))) {
                continue;
            }
            let reversed = self
                .target
                .dependents(e)
                .any(|c| self.alignment.contains(p, c));
            if reversed {
                self.record(OpKind::Swap, Side::Source, f, Some(p));
                self.source = ops::swap(f, p, &self.source)?;
                swapped.insert((f.min(p), f.max(p)));
            }
        }
        Ok(())
    }
}

/// Removes every unaligned token, first from the source tree and then from
/// the target tree.
///
/// Fails with [`Error::DegenerateTree`] when no token of a side is aligned.
pub fn remove_spontaneous(pair: &AlignedPair) -> Result<StageOutput, Error> {
    let mut work = Work::new(pair);
    work.remove_side(Side::Source)?;
    work.remove_side(Side::Target)?;
    work.finish()
}

/// Merges tokens that share an aligned word with their head, on both sides,
/// until no such link remains.
pub fn merge_aligned(pair: &AlignedPair) -> Result<StageOutput, Error> {
    let mut work = Work::new(pair);
    loop {
        let source_changed = work.merge_source()?;
        let target_changed = work.merge_target()?;
        if !source_changed && !target_changed {
            break;
        }
    }
    work.finish()
}

/// Swaps source edges that are reversed in the target tree (one pass).
pub fn swap_reversed(pair: &AlignedPair) -> Result<StageOutput, Error> {
    let mut work = Work::new(pair);
    work.swap_source()?;
    work.finish()
}

/// Edge class breakdowns in both directions after a stage.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StageReport {
    pub stage: Stage,
    pub source_to_target: MatchReport,
    pub target_to_source: MatchReport,
    /// Operations applied by this stage; empty for the baseline.
    pub log: OpLog,
}

impl StageReport {
    fn measure(stage: Stage, pair: &AlignedPair, log: OpLog) -> Self {
        StageReport {
            stage,
            source_to_target: pair_breakdown(pair, Direction::SourceToTarget),
            target_to_source: pair_breakdown(pair, Direction::TargetToSource),
            log,
        }
    }

    fn empty(stage: Stage) -> Self {
        StageReport {
            stage,
            source_to_target: MatchReport::empty(Direction::SourceToTarget),
            target_to_source: MatchReport::empty(Direction::TargetToSource),
            log: OpLog::new(),
        }
    }

    pub fn report(&self, direction: Direction) -> &MatchReport {
        match direction {
            Direction::SourceToTarget => &self.source_to_target,
            Direction::TargetToSource => &self.target_to_source,
        }
    }

    fn absorb(&mut self, other: &StageReport) {
        self.source_to_target.absorb(&other.source_to_target);
        self.target_to_source.absorb(&other.target_to_source);
        self.log.extend(other.log.iter().cloned());
    }
}

/// A fully transformed pair with one report per stage, baseline first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairTransform {
    pub pair: AlignedPair,
    pub stages: Vec<StageReport>,
}

fn rebase(log: &mut OpLog, source: &Reindex, target: &Reindex) {
    for entry in log {
        let lineage = match entry.side {
            Side::Source => source,
            Side::Target => target,
        };
        entry.child_origin = lineage.origin(entry.child_origin);
        entry.parent_origin = entry.parent_origin.map(|p| lineage.origin(p));
    }
}

/// Runs remove, merge and swap on a pair, measuring after every stage.
pub fn transform_pair(pair: &AlignedPair) -> Result<PairTransform, Error> {
    type StageFn = fn(&AlignedPair) -> Result<StageOutput, Error>;
    const STEPS: [(Stage, StageFn); 3] = [
        (Stage::Remove, remove_spontaneous),
        (Stage::Merge, merge_aligned),
        (Stage::Swap, swap_reversed),
    ];

    let mut stages = Vec::with_capacity(4);
    stages.push(StageReport::measure(Stage::Baseline, pair, OpLog::new()));
    let mut current = pair.clone();
    let mut source_lineage = Reindex::identity(pair.source().len());
    let mut target_lineage = Reindex::identity(pair.target().len());
    for (stage, step) in STEPS {
        let mut out = step(&current)?;
        rebase(&mut out.log, &source_lineage, &target_lineage);
        source_lineage = source_lineage.then(&out.source_map);
        target_lineage = target_lineage.then(&out.target_map);
        stages.push(StageReport::measure(stage, &out.pair, out.log));
        current = out.pair;
    }
    Ok(PairTransform {
        pair: current,
        stages,
    })
}

/// A pair left out of corpus statistics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Excluded {
    pub id: String,
    pub error: Error,
}

/// Transformation of a whole corpus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusTransform {
    /// Untransformed pairs that were included, in corpus order.
    pub baseline: Vec<AlignedPair>,
    /// Transformed pairs, parallel to `baseline`.
    pub transformed: Vec<AlignedPair>,
    /// Aggregated reports, one per stage; empty when no pair was included.
    pub stages: Vec<StageReport>,
    pub excluded: Vec<Excluded>,
}

impl CorpusTransform {
    /// All operations of all stages in application order.
    pub fn log(&self) -> impl Iterator<Item = &OpLogEntry> {
        self.stages.iter().flat_map(|s| s.log.iter())
    }
}

/// Transforms every pair. Pairs that fail (for instance because a side
/// consists only of spontaneous words) are excluded from all stages.
pub fn transform_corpus<'a, I>(pairs: I) -> CorpusTransform
where
    I: IntoIterator<Item = &'a AlignedPair>,
{
    let mut result = CorpusTransform {
        baseline: Vec::new(),
        transformed: Vec::new(),
        stages: Vec::new(),
        excluded: Vec::new(),
    };
    for pair in pairs {
        match transform_pair(pair) {
            Ok(t) => {
                if result.stages.is_empty() {
                    result.stages = Stage::ALL.iter().map(|&s| StageReport::empty(s)).collect();
                }
                for (total, stage) in result.stages.iter_mut().zip(&t.stages) {
                    total.absorb(stage);
                }
                result.baseline.push(pair.clone());
                result.transformed.push(t.pair);
            }
            Err(error) => result.excluded.push(Excluded {
                id: pair.id().to_string(),
                error,
            }),
        }
    }
    result
}

/// Stage reports aggregated over a corpus (the per-stage table).
pub fn corpus_stage_table<'a, I>(pairs: I) -> Vec<StageReport>
where
    I: IntoIterator<Item = &'a AlignedPair>,
{
    transform_corpus(pairs).stages
}
