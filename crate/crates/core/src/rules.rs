//! Swap-correction rules learned from projected trees, and attachment
//! scoring of projected trees against gold trees.
//!
//! Rules are keyed on projected POS tags, which are available for unseen
//! sentences. A training edge counts as swapped when the gold tree contains
//! the same edge in the opposite direction.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::ops::{Add, AddAssign};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::model::{AlignedPair, DepTree, ROOT};
use crate::projection::{bottom_up_order, project_tree, ProjectedTree};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SwapRule {
    pub child_pos: String,
    pub parent_pos: String,
    /// Observed edges with this POS pattern that the gold tree reverses.
    pub swapped: u64,
    /// Observed edges with this POS pattern.
    pub support: u64,
}

impl SwapRule {
    pub fn new(child_pos: impl Into<String>, parent_pos: impl Into<String>, swapped: u64, support: u64) -> Self {
        SwapRule {
            child_pos: child_pos.into(),
            parent_pos: parent_pos.into(),
            swapped,
            support,
        }
    }

    /// Fraction of observed edges that were swapped.
    pub fn frequency(&self) -> f64 {
        if self.support == 0 {
            0.0
        } else {
            self.swapped as f64 / self.support as f64
        }
    }
}

/// Projects each target tree onto its source words and counts, per projected
/// `(child, parent)` POS pattern, how many projected edges appear reversed in
/// the gold source tree. Candidates are sorted by pattern.
pub fn collect_swap_stats<'a, I>(train: I) -> Vec<SwapRule>
where
    I: IntoIterator<Item = &'a AlignedPair>,
{
    let mut counts: BTreeMap<(String, String), (u64, u64)> = BTreeMap::new();
    for pair in train {
        let gold = pair.source();
        let Ok(projected) = project_tree(pair.target(), pair.alignment(), gold.tokens()) else {
            continue;
        };
        for (child, head) in projected.edges() {
            let key = (
                String::from(projected.pos(child)),
                String::from(projected.pos(head)),
            );
            let entry = counts.entry(key).or_default();
            entry.1 += 1;
            if gold.head(head) == child {
                entry.0 += 1;
            }
        }
    }
    counts
        .into_iter()
        .map(|((child_pos, parent_pos), (swapped, support))| SwapRule {
            child_pos,
            parent_pos,
            swapped,
            support,
        })
        .collect()
}

/// Keeps candidates with frequency at least `threshold` and support at least
/// `min_support`, most supported first.
pub fn learn_swap_rules(candidates: &[SwapRule], threshold: f64, min_support: u64) -> Vec<SwapRule> {
    let mut rules: Vec<SwapRule> = candidates
        .iter()
        .filter(|c| c.support > 0 && c.support >= min_support && c.frequency() >= threshold)
        .cloned()
        .collect();
    rules.sort_by(|a, b| {
        b.support
            .cmp(&a.support)
            .then_with(|| a.child_pos.cmp(&b.child_pos))
            .then_with(|| a.parent_pos.cmp(&b.parent_pos))
    });
    rules
}

/// Swaps every attached edge whose POS pattern matches a rule, visiting
/// dependents before their heads. Each edge is considered once, against the
/// structure left by the swaps made so far.
pub fn apply_swap_rules(projected: &ProjectedTree, rules: &[SwapRule]) -> ProjectedTree {
    let patterns: BTreeSet<(&str, &str)> = rules
        .iter()
        .map(|r| (r.child_pos.as_str(), r.parent_pos.as_str()))
        .collect();
    let mut out = projected.clone();
    if patterns.is_empty() {
        return out;
    }
    let mut considered = BTreeSet::new();
    for node in bottom_up_order(projected) {
        let Some(head) = out.head(node) else { continue };
        if head == ROOT || !considered.insert((node.min(head), node.max(head))) {
            continue;
        }
        if patterns.contains(&(out.pos(node), out.pos(head))) {
            out.swap(node, head).expect("attached edge");
        }
    }
    out
}

/// Attachment counts of predicted against gold edges.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct EvalResult {
    pub predicted: u64,
    pub gold: u64,
    pub correct: u64,
}

impl EvalResult {
    pub fn precision(&self) -> f64 {
        percent(self.correct, self.predicted)
    }

    pub fn recall(&self) -> f64 {
        percent(self.correct, self.gold)
    }

    /// Harmonic mean of precision and recall, computed from the counts.
    pub fn f1(&self) -> f64 {
        percent(2 * self.correct, self.predicted + self.gold)
    }
}

fn percent(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 * 100.0 / den as f64
    }
}

impl Add for EvalResult {
    type Output = EvalResult;

    fn add(self, rhs: EvalResult) -> EvalResult {
        EvalResult {
            predicted: self.predicted + rhs.predicted,
            gold: self.gold + rhs.gold,
            correct: self.correct + rhs.correct,
        }
    }
}

impl AddAssign for EvalResult {
    fn add_assign(&mut self, rhs: EvalResult) {
        *self = *self + rhs;
    }
}

impl core::iter::Sum for EvalResult {
    fn sum<I: Iterator<Item = EvalResult>>(iter: I) -> EvalResult {
        iter.fold(EvalResult::default(), Add::add)
    }
}

/// Scores the non-root attached edges of `predicted` against the non-root
/// edges of `gold`.
pub fn evaluate_attachment(predicted: &ProjectedTree, gold: &DepTree) -> Result<EvalResult, Error> {
    let same_words = predicted.len() == gold.len()
        && predicted
            .tokens()
            .iter()
            .zip(gold.tokens())
            .all(|(p, g)| p.form() == g.form());
    if !same_words {
        return Err(Error::TokenMismatch);
    }
    let mut result = EvalResult {
        gold: gold.edge_count() as u64,
        ..EvalResult::default()
    };
    for (child, head) in predicted.edges() {
        result.predicted += 1;
        if gold.head(child) == head {
            result.correct += 1;
        }
    }
    Ok(result)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub train_fraction: f64,
    pub threshold: f64,
    pub min_support: u64,
    pub seed: u64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            train_fraction: 0.8,
            threshold: 0.8,
            min_support: 3,
            seed: 42,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    /// Ids of the training pairs, in corpus order.
    pub train: Vec<String>,
    /// Ids of the held-out pairs, in corpus order.
    pub test: Vec<String>,
    pub candidates: Vec<SwapRule>,
    pub rules: Vec<SwapRule>,
    /// Plain projection.
    pub baseline: EvalResult,
    /// Projection followed by the learned swaps.
    pub corrected: EvalResult,
    /// Held-out pairs with no aligned source word; they count as predicting
    /// no edges.
    pub unprojectable: Vec<String>,
}

/// Splits `pairs` by a seeded shuffle into `round(n * train_fraction)`
/// training pairs and the rest. Returns indices into `pairs`, each part in
/// corpus order.
pub fn split_indices(n: usize, train_fraction: f64, seed: u64) -> Result<(Vec<usize>, Vec<usize>), Error> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::InvalidParameter("train fraction must lie strictly between 0 and 1"));
    }
    let n_train = libm_round(n as f64 * train_fraction);
    if n_train == 0 {
        return Err(Error::EmptySplit("training"));
    }
    if n_train >= n {
        return Err(Error::EmptySplit("test"));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut train = order[..n_train].to_vec();
    let mut test = order[n_train..].to_vec();
    train.sort_unstable();
    test.sort_unstable();
    Ok((train, test))
}

// Round half away from zero for non-negative values, without std.
fn libm_round(x: f64) -> usize {
    let floor = x as usize;
    if x - floor as f64 >= 0.5 {
        floor + 1
    } else {
        floor
    }
}

/// Learns rules on a seeded training split and scores projection with and
/// without them on the held-out pairs.
pub fn holdout_experiment(pairs: &[AlignedPair], config: ExperimentConfig) -> Result<ExperimentReport, Error> {
    if config.threshold.is_nan() || config.threshold < 0.0 {
        return Err(Error::InvalidParameter("threshold must be non-negative"));
    }
    let (train_idx, test_idx) = split_indices(pairs.len(), config.train_fraction, config.seed)?;
    let candidates = collect_swap_stats(train_idx.iter().map(|&i| &pairs[i]));
    let rules = learn_swap_rules(&candidates, config.threshold, config.min_support);

    let mut baseline = EvalResult::default();
    let mut corrected = EvalResult::default();
    let mut unprojectable = Vec::new();
    for &i in &test_idx {
        let pair = &pairs[i];
        let gold = pair.source();
        match project_tree(pair.target(), pair.alignment(), gold.tokens()) {
            Ok(projected) => {
                baseline += evaluate_attachment(&projected, gold)?;
                corrected += evaluate_attachment(&apply_swap_rules(&projected, &rules), gold)?;
            }
            Err(Error::ProjectionDegenerate) => {
                let none = EvalResult {
                    gold: gold.edge_count() as u64,
                    ..EvalResult::default()
                };
                baseline += none;
                corrected += none;
                unprojectable.push(String::from(pair.id()));
            }
            Err(e) => return Err(e),
        }
    }

    let ids = |idx: &[usize]| idx.iter().map(|&i| String::from(pairs[i].id())).collect();
    Ok(ExperimentReport {
        config,
        train: ids(&train_idx),
        test: ids(&test_idx),
        candidates,
        rules,
        baseline,
        corrected,
        unprojectable,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::{classify_edge, EdgeClass};
    use crate::model::{Alignment, Token};
    use alloc::vec;

    fn words(pos: &[&str]) -> Vec<Token> {
        (1..).zip(pos).map(|(i, p)| Token::new(i, alloc::format!("w{i}"), *p)).collect()
    }

    fn sample_candidates() -> Vec<SwapRule> {
        vec![
            SwapRule::new("NN", "IN", 33, 33),
            SwapRule::new("NNP", "IN", 12, 12),
            SwapRule::new("JJ", "VBD", 1, 1),
            SwapRule::new("VBZ", "VBG", 3, 5),
            SwapRule::new("VBG", "VBZ", 2, 7),
            SwapRule::new("VBG", "NN", 1, 20),
        ]
    }

    fn patterns(rules: &[SwapRule]) -> Vec<(&str, &str)> {
        rules.iter().map(|r| (r.child_pos.as_str(), r.parent_pos.as_str())).collect()
    }

    #[test]
    fn threshold_and_support_are_inclusive() {
        let all = learn_swap_rules(&sample_candidates(), 0.8, 0);
        assert_eq!(patterns(&all), [("NN", "IN"), ("NNP", "IN"), ("JJ", "VBD")]);
        let floor = learn_swap_rules(&sample_candidates(), 0.8, 3);
        assert_eq!(patterns(&floor), [("NN", "IN"), ("NNP", "IN")]);
        assert_eq!(learn_swap_rules(&sample_candidates(), 0.6, 5).len(), 3);
        assert!(learn_swap_rules(&[], 0.0, 0).is_empty());
    }

    #[test]
    fn stacked_chain_trace() {
        // w4(NN) -> w3(IN) -> w2(NN) -> w1(IN, root)
        let p = ProjectedTree::new(words(&["IN", "NN", "IN", "NN"]), vec![Some(0), Some(1), Some(2), Some(3)])
            .unwrap();
        let out = apply_swap_rules(&p, &[SwapRule::new("NN", "IN", 1, 1)]);
        assert_eq!(out.heads(), &[Some(2), Some(0), Some(4), Some(2)]);
        assert_eq!(apply_swap_rules(&p, &[]), p);
    }

    #[test]
    fn rule_turns_projected_edge_into_match() {
        // gold: ghar(NN, root) <- mein(IN); projection: mein root, ghar under it
        let gold = DepTree::from_rows(&[("ghar", "NN", 0), ("mein", "IN", 1)]).unwrap();
        let p = ProjectedTree::new(
            vec![Token::new(1, "ghar", "NN"), Token::new(2, "mein", "IN")],
            vec![Some(2), Some(0)],
        )
        .unwrap();
        let out = apply_swap_rules(&p, &[SwapRule::new("NN", "IN", 1, 1)]);
        let fixed = out.to_tree().unwrap();
        assert!(fixed.has_edge(2, 1));
        let identity: Alignment = (1..=2).map(|i| (i, i)).collect();
        assert_eq!(classify_edge(2, 1, &gold, &identity), EdgeClass::Match);
        assert_eq!(evaluate_attachment(&out, &gold).unwrap().f1(), 100.0);
    }

    #[test]
    fn partial_attachment_scores() {
        let gold = DepTree::from_rows(&[
            ("w1", "X", 0),
            ("w2", "X", 1),
            ("w3", "X", 1),
            ("w4", "X", 3),
            ("w5", "X", 4),
        ])
        .unwrap();
        let pred = ProjectedTree::new(
            words(&["X"; 5]),
            vec![Some(0), Some(1), Some(2), Some(3), None],
        )
        .unwrap();
        let r = evaluate_attachment(&pred, &gold).unwrap();
        assert_eq!((r.predicted, r.gold, r.correct), (3, 4, 2));
        assert_eq!(alloc::format!("{:.2} {:.2} {:.2}", r.precision(), r.recall(), r.f1()), "66.67 50.00 57.14");
        let empty = EvalResult { gold: 4, ..EvalResult::default() };
        assert_eq!((empty.precision(), empty.recall(), empty.f1()), (0.0, 0.0, 0.0));
    }

    #[test]
    fn mismatched_words_are_rejected() {
        let gold = DepTree::from_rows(&[("a", "X", 0)]).unwrap();
        let pred = ProjectedTree::new(words(&["X"]), vec![Some(0)]).unwrap();
        assert_eq!(evaluate_attachment(&pred, &gold), Err(Error::TokenMismatch));
    }

    #[test]
    fn split_sizes() {
        let (train, test) = split_indices(50, 0.8, 42).unwrap();
        assert_eq!((train.len(), test.len()), (40, 10));
        assert_eq!(split_indices(50, 0.8, 42).unwrap(), (train, test));
        assert_eq!(split_indices(1, 0.8, 1), Err(Error::EmptySplit("test")));
        assert_eq!(split_indices(1, 0.2, 1), Err(Error::EmptySplit("training")));
        assert!(split_indices(10, 1.0, 1).is_err());
    }
}
