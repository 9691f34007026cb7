//! Tab-separated and JSON renderings of the analysis results.
//!
//! Both renderings carry the same rows and notes. TSV files start with `#`
//! comment lines, then a header row. Percentages have one decimal,
//! precision, recall and F1 two.

use std::fmt::Write as _;

use divkit_core::pipeline::CorpusTransform;
use divkit_core::pos_stats::{pos_breakdown, PosPairStat};
use divkit_core::rules::{EvalResult, ExperimentReport, SwapRule};
use divkit_core::{Direction, EdgeClass, OpLogEntry};
use serde::Serialize;

pub const STAGE_NOTES: &[&str] = &[
    "edge classes are exclusive and tested in the order MATCH, SWAP, MERGE, UNALIGNED, OTHER",
    "unaligned_child counts unaligned edges whose child is spontaneous",
    "percentages are over all edges of the measured side (micro-average)",
];

pub const POS_NOTES: &[&str] = &[
    "opportunities are occurrences in the untransformed trees of the altered side, plus operations applied to edges that earlier operations created",
    "swaps are only applied to source trees",
];

fn one_decimal(x: f64) -> String {
    format!("{x:.1}")
}

fn two_decimals(x: f64) -> String {
    format!("{x:.2}")
}

// The JSON value of a formatted number, so both renderings agree.
fn reparse(s: &str) -> f64 {
    s.parse().expect("formatted number")
}

fn preamble(out: &mut String, notes: &[&str]) {
    for note in notes {
        let _ = writeln!(out, "# {note}");
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable report");
    s.push('\n');
    s
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExcludedRow {
    pub id: String,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StageRow {
    pub direction: String,
    pub stage: String,
    #[serde(rename = "match")]
    pub matched: String,
    pub swap: String,
    pub unaligned: String,
    pub unaligned_child: String,
    pub merge: String,
    pub other: String,
    pub edges: u64,
}

const STAGE_HEADER: [&str; 9] = [
    "direction",
    "stage",
    "match",
    "swap",
    "unaligned",
    "unaligned_child",
    "merge",
    "other",
    "edges",
];

pub fn stage_rows(transform: &CorpusTransform, directions: &[Direction]) -> Vec<StageRow> {
    let mut rows = Vec::new();
    for &direction in directions {
        for stage in &transform.stages {
            let r = stage.report(direction);
            let pct = |class| one_decimal(r.percent(class));
            let child = divkit_core::Ratio::new(r.child_unaligned(), r.edges()).percent();
            rows.push(StageRow {
                direction: direction.to_string(),
                stage: stage.stage.to_string(),
                matched: pct(EdgeClass::Match),
                swap: pct(EdgeClass::Swap),
                unaligned: pct(EdgeClass::Unaligned),
                unaligned_child: one_decimal(child),
                merge: pct(EdgeClass::Merge),
                other: pct(EdgeClass::Other),
                edges: r.edges(),
            });
        }
    }
    rows
}

fn excluded_rows(transform: &CorpusTransform) -> Vec<ExcludedRow> {
    transform
        .excluded
        .iter()
        .map(|e| ExcludedRow {
            id: e.id.clone(),
            reason: e.error.to_string(),
        })
        .collect()
}

pub fn stage_table_tsv(transform: &CorpusTransform, directions: &[Direction]) -> String {
    let mut out = String::new();
    preamble(&mut out, STAGE_NOTES);
    for e in excluded_rows(transform) {
        let _ = writeln!(out, "# excluded {}: {}", e.id, e.reason);
    }
    out.push_str(&STAGE_HEADER.join("\t"));
    out.push('\n');
    for r in stage_rows(transform, directions) {
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            r.direction, r.stage, r.matched, r.swap, r.unaligned, r.unaligned_child, r.merge, r.other, r.edges
        );
    }
    out
}

#[derive(Serialize)]
struct JsonStageRow {
    direction: String,
    stage: String,
    #[serde(rename = "match")]
    matched: f64,
    swap: f64,
    unaligned: f64,
    unaligned_child: f64,
    merge: f64,
    other: f64,
    edges: u64,
}

#[derive(Serialize)]
struct StageTableJson<'a> {
    notes: &'a [&'a str],
    excluded: Vec<ExcludedRow>,
    rows: Vec<JsonStageRow>,
}

pub fn stage_table_json(transform: &CorpusTransform, directions: &[Direction]) -> String {
    let rows = stage_rows(transform, directions)
        .into_iter()
        .map(|r| JsonStageRow {
            direction: r.direction,
            stage: r.stage,
            matched: reparse(&r.matched),
            swap: reparse(&r.swap),
            unaligned: reparse(&r.unaligned),
            unaligned_child: reparse(&r.unaligned_child),
            merge: reparse(&r.merge),
            other: reparse(&r.other),
            edges: r.edges,
        })
        .collect();
    to_json(&StageTableJson {
        notes: STAGE_NOTES,
        excluded: excluded_rows(transform),
        rows,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PosRow {
    pub direction: String,
    pub kind: String,
    pub child_pos: String,
    pub parent_pos: Option<String>,
    pub applied: u64,
    pub opportunities: u64,
    pub rate: f64,
}

/// POS statistics of the requested directions; rows with no applied
/// operation are left out unless `include_zero` is set.
pub fn pos_rows(transform: &CorpusTransform, directions: &[Direction], include_zero: bool) -> Vec<PosRow> {
    let mut rows = Vec::new();
    for &direction in directions {
        let stats: Vec<PosPairStat> = pos_breakdown(&transform.baseline, transform.log(), direction);
        rows.extend(stats.into_iter().filter(|s| include_zero || s.applied > 0).map(|s| PosRow {
            direction: direction.to_string(),
            kind: s.kind.to_string(),
            rate: reparse(&one_decimal(s.rate())),
            child_pos: s.child_pos,
            parent_pos: s.parent_pos,
            applied: s.applied,
            opportunities: s.opportunities,
        }));
    }
    rows
}

pub fn pos_table_tsv(rows: &[PosRow]) -> String {
    let mut out = String::new();
    preamble(&mut out, POS_NOTES);
    out.push_str("direction\tkind\tchild_pos\tparent_pos\tapplied\topportunities\trate\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}\t{:.1}",
            r.direction,
            r.kind,
            r.child_pos,
            r.parent_pos.as_deref().unwrap_or("-"),
            r.applied,
            r.opportunities,
            r.rate
        );
    }
    out
}

#[derive(Serialize)]
struct PosTableJson<'a> {
    notes: &'a [&'a str],
    rows: &'a [PosRow],
}

pub fn pos_table_json(rows: &[PosRow]) -> String {
    to_json(&PosTableJson { notes: POS_NOTES, rows })
}

pub const ROOT_PROMOTION: &str = "ROOT-PROMOTION";

#[derive(Serialize)]
struct OpRow<'a> {
    id: &'a str,
    side: &'static str,
    kind: &'static str,
    child_pos: &'a str,
    parent_pos: Option<&'a str>,
    child: usize,
    parent: Option<usize>,
    child_form: &'a str,
    parent_form: Option<&'a str>,
    note: Option<&'static str>,
}

fn op_row(e: &OpLogEntry) -> OpRow<'_> {
    OpRow {
        id: &e.pair_id,
        side: e.side.as_str(),
        kind: e.kind.as_str(),
        child_pos: &e.child_pos,
        parent_pos: e.parent_pos.as_deref(),
        child: e.child_origin,
        parent: e.parent_origin,
        child_form: &e.forms[0],
        parent_form: e.forms.get(1).map(String::as_str),
        note: e.root_promotion.then_some(ROOT_PROMOTION),
    }
}

/// The operation log. Token indices refer to the untransformed trees.
pub fn oplog_tsv<'a, I: IntoIterator<Item = &'a OpLogEntry>>(log: I) -> String {
    let mut out = String::from("# token indices refer to the untransformed trees\n");
    out.push_str("id\tside\tkind\tchild_pos\tparent_pos\tchild\tparent\tchild_form\tparent_form\tnote\n");
    for e in log {
        let r = op_row(e);
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            r.id,
            r.side,
            r.kind,
            r.child_pos,
            r.parent_pos.unwrap_or("-"),
            r.child,
            r.parent.map_or_else(|| "-".to_string(), |p| p.to_string()),
            r.child_form,
            r.parent_form.unwrap_or("-"),
            r.note.unwrap_or("-"),
        );
    }
    out
}

pub fn oplog_json<'a, I: IntoIterator<Item = &'a OpLogEntry>>(log: I) -> String {
    let rows: Vec<OpRow> = log.into_iter().map(op_row).collect();
    to_json(&rows)
}

#[derive(Serialize)]
struct RuleRow<'a> {
    child_pos: &'a str,
    parent_pos: &'a str,
    frequency: f64,
    support: u64,
}

fn rule_row(r: &SwapRule) -> RuleRow<'_> {
    RuleRow {
        child_pos: &r.child_pos,
        parent_pos: &r.parent_pos,
        frequency: reparse(&format!("{:.3}", r.frequency())),
        support: r.support,
    }
}

pub fn rules_tsv(rules: &[SwapRule]) -> String {
    let mut out = String::from("child_pos\tparent_pos\tfrequency\tsupport\n");
    for r in rules.iter().map(rule_row) {
        let _ = writeln!(out, "{}\t{}\t{:.3}\t{}", r.child_pos, r.parent_pos, r.frequency, r.support);
    }
    out
}

pub fn rules_json(rules: &[SwapRule]) -> String {
    to_json(&rules.iter().map(rule_row).collect::<Vec<_>>())
}

#[derive(Serialize)]
struct EvalRow {
    system: &'static str,
    precision: f64,
    recall: f64,
    f1: f64,
    predicted: u64,
    gold: u64,
    correct: u64,
}

fn eval_row(system: &'static str, r: &EvalResult) -> EvalRow {
    EvalRow {
        system,
        precision: reparse(&two_decimals(r.precision())),
        recall: reparse(&two_decimals(r.recall())),
        f1: reparse(&two_decimals(r.f1())),
        predicted: r.predicted,
        gold: r.gold,
        correct: r.correct,
    }
}

#[derive(Serialize)]
struct ExperimentConfigJson {
    train_fraction: f64,
    threshold: f64,
    min_support: u64,
    seed: u64,
}

#[derive(Serialize)]
struct ExperimentJson<'a> {
    config: ExperimentConfigJson,
    train_pairs: usize,
    test_ids: &'a [String],
    unprojectable: &'a [String],
    rules: Vec<RuleRow<'a>>,
    rows: [EvalRow; 2],
}

pub fn experiment_tsv(report: &ExperimentReport) -> String {
    let c = &report.config;
    let mut out = String::new();
    let _ = writeln!(out, "# train_fraction {}", c.train_fraction);
    let _ = writeln!(out, "# threshold {}", c.threshold);
    let _ = writeln!(out, "# min_support {}", c.min_support);
    let _ = writeln!(out, "# seed {}", c.seed);
    let _ = writeln!(out, "# train_pairs {}", report.train.len());
    let _ = writeln!(out, "# test_ids {}", report.test.join(" "));
    if !report.unprojectable.is_empty() {
        let _ = writeln!(out, "# unprojectable {}", report.unprojectable.join(" "));
    }
    for r in report.rules.iter().map(rule_row) {
        let _ = writeln!(out, "# rule {} {} {:.3} {}", r.child_pos, r.parent_pos, r.frequency, r.support);
    }
    out.push_str("system\tprecision\trecall\tf1\tpredicted\tgold\tcorrect\n");
    for r in [eval_row("baseline", &report.baseline), eval_row("corrected", &report.corrected)] {
        let _ = writeln!(
            out,
            "{}\t{:.2}\t{:.2}\t{:.2}\t{}\t{}\t{}",
            r.system, r.precision, r.recall, r.f1, r.predicted, r.gold, r.correct
        );
    }
    out
}

pub fn experiment_json(report: &ExperimentReport) -> String {
    let c = &report.config;
    to_json(&ExperimentJson {
        config: ExperimentConfigJson {
            train_fraction: c.train_fraction,
            threshold: c.threshold,
            min_support: c.min_support,
            seed: c.seed,
        },
        train_pairs: report.train.len(),
        test_ids: &report.test,
        unprojectable: &report.unprojectable,
        rules: report.rules.iter().map(rule_row).collect(),
        rows: [eval_row("baseline", &report.baseline), eval_row("corrected", &report.corrected)],
    })
}
