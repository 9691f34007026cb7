//! Edge matching and divergence classification.
//!
//! An edge `(child, parent)` of one tree *matches* the other tree when some
//! word aligned to `child` is a dependent of some word aligned to `parent`.
//! Corpus level figures are micro averages: matched edges summed over all
//! pairs divided by edges summed over all pairs.

use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, AddAssign};

use crate::model::{AlignedPair, Alignment, DepTree};

/// Which tree's edges are counted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    SourceToTarget,
    TargetToSource,
}

impl Direction {
    pub const BOTH: [Direction; 2] = [Direction::SourceToTarget, Direction::TargetToSource];

    pub fn as_str(self) -> &'static str {
        match self {
            Direction::SourceToTarget => "src-tgt",
            Direction::TargetToSource => "tgt-src",
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// An exact count ratio. Percentages are only computed for presentation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Ratio {
    pub numerator: u64,
    pub denominator: u64,
}

impl Ratio {
    pub fn new(numerator: u64, denominator: u64) -> Self {
        Ratio {
            numerator,
            denominator,
        }
    }

    /// `100 * numerator / denominator`, or 0 when the denominator is 0.
    pub fn percent(self) -> f64 {
        if self.denominator == 0 {
            0.0
        } else {
            100.0 * self.numerator as f64 / self.denominator as f64
        }
    }

    /// Exact comparison of the two values as rationals (0/0 counts as 0).
    pub fn cmp_value(self, other: Ratio) -> core::cmp::Ordering {
        let lhs = self.numerator as u128 * other.denominator.max(1) as u128;
        let rhs = other.numerator as u128 * self.denominator.max(1) as u128;
        lhs.cmp(&rhs)
    }
}

impl Add for Ratio {
    type Output = Ratio;

    fn add(self, rhs: Ratio) -> Ratio {
        Ratio::new(
            self.numerator + rhs.numerator,
            self.denominator + rhs.denominator,
        )
    }
}

impl AddAssign for Ratio {
    fn add_assign(&mut self, rhs: Ratio) {
        *self = *self + rhs;
    }
}

/// Divergence class of a single edge. Checked in declaration order; the
/// first class whose condition holds wins.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EdgeClass {
    Match,
    Swap,
    Merge,
    Unaligned,
    Other,
}

impl EdgeClass {
    pub const ALL: [EdgeClass; 5] = [
        EdgeClass::Match,
        EdgeClass::Swap,
        EdgeClass::Merge,
        EdgeClass::Unaligned,
        EdgeClass::Other,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            EdgeClass::Match => "MATCH",
            EdgeClass::Swap => "SWAP",
            EdgeClass::Merge => "MERGE",
            EdgeClass::Unaligned => "UNALIGNED",
            EdgeClass::Other => "OTHER",
        }
    }

    fn slot(self) -> usize {
        self as usize
    }
}

impl fmt::Display for EdgeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Target words linked to source word `source`.
pub fn aligned_targets(source: usize, alignment: &Alignment) -> Vec<usize> {
    alignment.targets(source).collect()
}

/// Source words linked to target word `target`.
pub fn aligned_sources(target: usize, alignment: &Alignment) -> Vec<usize> {
    alignment.sources(target).collect()
}

/// True if the edge `(child, parent)` is mirrored by an edge of `other`,
/// i.e. an image of `child` is headed by an image of `parent`.
pub fn edge_matches(child: usize, parent: usize, other: &DepTree, alignment: &Alignment) -> bool {
    alignment.targets(child).any(|a| {
        let head = other.head(a);
        alignment.contains(parent, head)
    })
}

/// Classifies the edge `(child, parent)` against `other`.
pub fn classify_edge(
    child: usize,
    parent: usize,
    other: &DepTree,
    alignment: &Alignment,
) -> EdgeClass {
    if edge_matches(child, parent, other, alignment) {
        return EdgeClass::Match;
    }
    // An image of the parent is headed by an image of the child.
    let swapped = alignment
        .targets(parent)
        .any(|b| alignment.contains(child, other.head(b)));
    if swapped {
        return EdgeClass::Swap;
    }
    if alignment
        .targets(child)
        .any(|t| alignment.contains(parent, t))
    {
        return EdgeClass::Merge;
    }
    if !alignment.is_source_aligned(child) || !alignment.is_source_aligned(parent) {
        return EdgeClass::Unaligned;
    }
    EdgeClass::Other
}

/// Matched edges over all edges of the measured side of one pair.
pub fn sent_match(pair: &AlignedPair, direction: Direction) -> Ratio {
    let view = pair.oriented(direction);
    let matched = view
        .side
        .edges()
        .filter(|&(c, p)| edge_matches(c, p, view.other, &view.alignment))
        .count();
    Ratio::new(matched as u64, view.side.edge_count() as u64)
}

/// Micro-averaged match ratio over a sequence of pairs.
pub fn corpus_match<'a, I>(pairs: I, direction: Direction) -> Ratio
where
    I: IntoIterator<Item = &'a AlignedPair>,
{
    pairs
        .into_iter()
        .map(|pair| sent_match(pair, direction))
        .fold(Ratio::default(), Add::add)
}

/// Counts of edge classes over the edges of one side of a corpus.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MatchReport {
    pub direction: Direction,
    counts: [u64; 5],
    child_unaligned: u64,
}

impl MatchReport {
    pub fn empty(direction: Direction) -> Self {
        MatchReport {
            direction,
            counts: [0; 5],
            child_unaligned: 0,
        }
    }

    /// Total number of edges classified.
    pub fn edges(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn count(&self, class: EdgeClass) -> u64 {
        self.counts[class.slot()]
    }

    pub fn ratio(&self, class: EdgeClass) -> Ratio {
        Ratio::new(self.count(class), self.edges())
    }

    pub fn percent(&self, class: EdgeClass) -> f64 {
        self.ratio(class).percent()
    }

    /// Unaligned edges whose child is spontaneous (a subset of
    /// [`EdgeClass::Unaligned`]).
    pub fn child_unaligned(&self) -> u64 {
        self.child_unaligned
    }

    pub fn record(&mut self, class: EdgeClass, child_unaligned: bool) {
        self.counts[class.slot()] += 1;
        if class == EdgeClass::Unaligned && child_unaligned {
            self.child_unaligned += 1;
        }
    }

    /// Adds the counts of another report for the same direction.
    pub fn absorb(&mut self, other: &MatchReport) {
        debug_assert_eq!(self.direction, other.direction);
        for (mine, theirs) in self.counts.iter_mut().zip(other.counts) {
            *mine += theirs;
        }
        self.child_unaligned += other.child_unaligned;
    }
}

/// Classifies every edge of the measured side of one pair.
pub fn pair_breakdown(pair: &AlignedPair, direction: Direction) -> MatchReport {
    let view = pair.oriented(direction);
    let mut report = MatchReport::empty(direction);
    for (child, parent) in view.side.edges() {
        let class = classify_edge(child, parent, view.other, &view.alignment);
        report.record(class, !view.alignment.is_source_aligned(child));
    }
    report
}

/// Edge class counts over all pairs.
pub fn breakdown<'a, I>(pairs: I, direction: Direction) -> MatchReport
where
    I: IntoIterator<Item = &'a AlignedPair>,
{
    let mut report = MatchReport::empty(direction);
    for pair in pairs {
        report.absorb(&pair_breakdown(pair, direction));
    }
    report
}
