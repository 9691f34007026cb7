// Random trees, alignments and pairs shared by the property tests.
#![allow(dead_code)]

use divkit_core::{AlignedPair, Alignment, DepTree, Token};
use proptest::prelude::*;

pub const TAGS: [&str; 4] = ["NN", "IN", "VB", "DT"];

/// Head vector of a random tree: tokens are attached in a random order, each
/// to a token attached earlier.
pub fn arb_heads(max_len: usize) -> impl Strategy<Value = Vec<usize>> {
    (1..=max_len).prop_flat_map(arb_heads_exact)
}

pub fn tokens(n: usize, prefix: &str, tags: &[usize]) -> Vec<Token> {
    (1..=n)
        .map(|i| Token::new(i, format!("{prefix}{i}"), TAGS[tags[i - 1] % TAGS.len()]))
        .collect()
}

pub fn arb_tree_with(max_len: usize, prefix: &'static str) -> impl Strategy<Value = DepTree> {
    arb_heads(max_len).prop_flat_map(move |heads| {
        let n = heads.len();
        prop::collection::vec(0..TAGS.len(), n)
            .prop_map(move |tags| DepTree::new(tokens(n, prefix, &tags), heads.clone()).unwrap())
    })
}

pub fn arb_tree(max_len: usize) -> impl Strategy<Value = DepTree> {
    arb_tree_with(max_len, "w")
}

/// Any subset of links, each present with probability `density`.
pub fn arb_alignment(n: usize, m: usize, density: f64) -> impl Strategy<Value = Alignment> {
    prop::collection::vec(prop::bool::weighted(density), n * m).prop_map(move |bits| {
        bits.iter()
            .enumerate()
            .filter(|(_, b)| **b)
            .map(|(k, _)| (k / m + 1, k % m + 1))
            .collect()
    })
}

/// Each source word links to at most one target word.
pub fn arb_functional_alignment(n: usize, m: usize) -> impl Strategy<Value = Alignment> {
    prop::collection::vec(prop::option::weighted(0.8, 1..=m), n).prop_map(|targets| {
        (1..)
            .zip(targets)
            .filter_map(|(s, t)| t.map(|t| (s, t)))
            .collect()
    })
}

pub fn arb_pair(max_len: usize) -> impl Strategy<Value = AlignedPair> {
    (arb_tree_with(max_len, "f"), arb_tree_with(max_len, "e"), 0.05f64..0.4).prop_flat_map(
        |(f, e, density)| {
            let (n, m) = (f.len(), e.len());
            arb_alignment(n, m, density).prop_map(move |a| {
                AlignedPair::new("r", f.clone(), e.clone(), a).unwrap()
            })
        },
    )
}

pub fn arb_functional_pair(max_len: usize) -> impl Strategy<Value = AlignedPair> {
    (arb_tree_with(max_len, "f"), arb_tree_with(max_len, "e")).prop_flat_map(|(f, e)| {
        let (n, m) = (f.len(), e.len());
        arb_functional_alignment(n, m)
            .prop_map(move |a| AlignedPair::new("r", f.clone(), e.clone(), a).unwrap())
    })
}

/// Same-length trees linked by a random permutation.
pub fn arb_bijective_pair(max_len: usize) -> impl Strategy<Value = AlignedPair> {
    arb_tree_with(max_len, "e").prop_flat_map(|e| {
        let n = e.len();
        (
            Just((1..=n).collect::<Vec<_>>()).prop_shuffle(),
            arb_heads_exact(n),
            prop::collection::vec(0..TAGS.len(), n),
        )
            .prop_map(move |(perm, heads, tags)| {
                let f = DepTree::new(tokens(n, "f", &tags), heads).unwrap();
                let a: Alignment = (1..).zip(perm).collect();
                AlignedPair::new("b", f, e.clone(), a).unwrap()
            })
    })
}

pub fn arb_heads_exact(n: usize) -> impl Strategy<Value = Vec<usize>> {
    (
        Just((1..=n).collect::<Vec<_>>()).prop_shuffle(),
        prop::collection::vec(any::<prop::sample::Index>(), n),
    )
        .prop_map(|(order, picks)| {
            let mut heads = vec![0; order.len()];
            for k in 1..order.len() {
                heads[order[k] - 1] = order[picks[k].index(k)];
            }
            heads
        })
}

/// Corpora of up to `max_pairs` pairs with distinct ids.
pub fn arb_corpus<S>(pair: S, max_pairs: usize) -> impl Strategy<Value = Vec<AlignedPair>>
where
    S: Strategy<Value = AlignedPair>,
{
    prop::collection::vec(pair, 1..=max_pairs).prop_map(|pairs| {
        pairs
            .into_iter()
            .enumerate()
            .map(|(i, p)| {
                let (_, f, e, a) = p.into_parts();
                AlignedPair::new(format!("r{i}"), f, e, a).unwrap()
            })
            .collect()
    })
}

/// Validity of a head vector checked by following every chain.
pub fn valid_heads(heads: &[usize]) -> bool {
    let n = heads.len();
    if n == 0 || heads.iter().filter(|&&h| h == 0).count() != 1 {
        return false;
    }
    if heads.iter().any(|&h| h > n) {
        return false;
    }
    (1..=n).all(|start| {
        let mut node = start;
        for _ in 0..=n {
            if node == 0 {
                return true;
            }
            node = heads[node - 1];
        }
        false
    })
}

/// Class counts in MATCH, SWAP, MERGE, UNALIGNED, OTHER order, plus the
/// spontaneous-child count, found by enumerating every (edge, a, b) triple.
/// `forward` measures the source tree; otherwise the target tree is measured
/// through the reversed links.
pub fn oracle_counts(pair: &AlignedPair, forward: bool) -> ([u64; 5], u64) {
    let (side, other) = if forward {
        (pair.source(), pair.target())
    } else {
        (pair.target(), pair.source())
    };
    let links: Vec<(usize, usize)> = pair
        .alignment()
        .iter()
        .map(|(s, t)| if forward { (s, t) } else { (t, s) })
        .collect();
    let linked = |x: usize, y: usize| links.contains(&(x, y));
    let has_link = |x: usize| links.iter().any(|&(s, _)| s == x);
    let oh = other.heads();

    let mut counts = [0u64; 5];
    let mut child_unaligned = 0;
    for (ci, &p) in side.heads().iter().enumerate() {
        let c = ci + 1;
        if p == 0 {
            continue;
        }
        let (mut matched, mut swapped, mut merged) = (false, false, false);
        for a in 1..=other.len() {
            for b in 1..=other.len() {
                if linked(c, a) && linked(p, b) {
                    matched |= oh[a - 1] == b;
                    swapped |= oh[b - 1] == a;
                    merged |= a == b;
                }
            }
        }
        let slot = if matched {
            0
        } else if swapped {
            1
        } else if merged {
            2
        } else if !has_link(c) || !has_link(p) {
            if !has_link(c) {
                child_unaligned += 1;
            }
            3
        } else {
            4
        };
        counts[slot] += 1;
    }
    (counts, child_unaligned)
}

/// Edges of `e` carried through a one-to-one alignment onto source indices.
pub fn mapped_edges(pair: &AlignedPair) -> Vec<(usize, Option<usize>)> {
    let to_source = |t: usize| {
        pair.alignment()
            .iter()
            .find(|&(_, tt)| tt == t)
            .map(|(s, _)| s)
            .unwrap()
    };
    let mut edges: Vec<(usize, Option<usize>)> = pair
        .target()
        .heads()
        .iter()
        .enumerate()
        .map(|(i, &h)| (to_source(i + 1), Some(if h == 0 { 0 } else { to_source(h) })))
        .collect();
    edges.sort();
    edges
}
