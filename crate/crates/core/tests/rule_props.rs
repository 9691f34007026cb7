mod common;

use common::{arb_pair, TAGS};
use divkit_core::projection::{project_tree, ProjectedTree};
use divkit_core::rules::{apply_swap_rules, evaluate_attachment, learn_swap_rules, SwapRule};
use proptest::prelude::*;

fn arb_candidates() -> impl Strategy<Value = Vec<SwapRule>> {
    prop::collection::vec((0..TAGS.len(), 0..TAGS.len(), 1u64..40, any::<prop::sample::Index>()), 0..12)
        .prop_map(|rows| {
            rows.into_iter()
                .map(|(c, p, support, k)| SwapRule::new(TAGS[c], TAGS[p], k.index(support as usize + 1) as u64, support))
                .collect()
        })
}

fn arb_rules() -> impl Strategy<Value = Vec<SwapRule>> {
    prop::collection::vec((0..TAGS.len(), 0..TAGS.len()), 0..4)
        .prop_map(|rows| rows.into_iter().map(|(c, p)| SwapRule::new(TAGS[c], TAGS[p], 1, 1)).collect())
}

fn projected(pair: &divkit_core::AlignedPair) -> Option<ProjectedTree> {
    project_tree(pair.target(), pair.alignment(), pair.source().tokens()).ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn stricter_settings_never_add_rules(
        cands in arb_candidates(),
        t in 0.0f64..1.0,
        dt in 0.0f64..0.5,
        s in 0u64..20,
        ds in 0u64..10,
    ) {
        let loose = learn_swap_rules(&cands, t, s);
        let strict = learn_swap_rules(&cands, t + dt, s + ds);
        prop_assert!(strict.iter().all(|r| loose.contains(r)));
        prop_assert!(loose.windows(2).all(|w| w[0].support >= w[1].support));
    }

    #[test]
    fn applying_rules_keeps_a_forest(pair in arb_pair(10), rules in arb_rules()) {
        let Some(p) = projected(&pair) else { return Ok(()) };
        prop_assert_eq!(apply_swap_rules(&p, &[]), p.clone());
        let out = apply_swap_rules(&p, &rules);
        prop_assert!(ProjectedTree::new(out.tokens().to_vec(), out.heads().to_vec()).is_ok());
        prop_assert_eq!(out.attached().count(), p.attached().count());
        prop_assert_eq!(apply_swap_rules(&p, &rules), out);
    }

    #[test]
    fn scores_are_consistent(pair in arb_pair(10)) {
        let Some(p) = projected(&pair) else { return Ok(()) };
        let r = evaluate_attachment(&p, pair.source()).unwrap();
        prop_assert!(r.correct <= r.predicted.min(r.gold));
        let (lo, hi) = (r.precision().min(r.recall()), r.precision().max(r.recall()));
        prop_assert!(r.f1() >= lo - 1e-9 && r.f1() <= hi + 1e-9);
        if p.attached().count() == p.len() {
            prop_assert_eq!(r.precision(), r.recall());
        }
    }
}
