mod common;

use std::path::Path;
use std::process::{Command, Output};

use common::*;

fn divkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_divkit"))
        .args(args)
        .env("DIVKIT_LOG", "quiet")
        .output()
        .unwrap()
}

fn stdout_of(args: &[&str]) -> String {
    let out = divkit(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn analyze_golden() {
    let a = fixture_a_path();
    let input = path_str(&a);
    let g = golden_dir();
    check_golden(&g.join("analyze_fixture_a.tsv"), &stdout_of(&["analyze", "--input", input]));
    check_golden(
        &g.join("analyze_fixture_a.json"),
        &stdout_of(&["analyze", "--input", input, "--format", "json"]),
    );
    check_golden(
        &g.join("analyze_fixture_a_tgt_src.tsv"),
        &stdout_of(&["analyze", "--input", input, "--direction", "tgt-src"]),
    );
}

#[test]
fn direction_flag_selects_rows() {
    let a = fixture_a_path();
    let both = stdout_of(&["analyze", "--input", path_str(&a)]);
    let one = stdout_of(&["analyze", "--input", path_str(&a), "--direction", "src-tgt"]);
    let rows = |s: &str| s.lines().filter(|l| !l.starts_with('#')).count();
    assert_eq!(rows(&both), 9);
    assert_eq!(rows(&one), 5);
    assert!(one.lines().skip_while(|l| l.starts_with('#')).skip(1).all(|l| l.starts_with("src-tgt\t")));
}

#[test]
fn posstats_golden() {
    let a = fixture_a_path();
    let g = golden_dir();
    check_golden(&g.join("posstats_fixture_a.tsv"), &stdout_of(&["posstats", "--input", path_str(&a)]));
    check_golden(
        &g.join("posstats_fixture_a_all.tsv"),
        &stdout_of(&["posstats", "--input", path_str(&a), "--include-zero"]),
    );
}

#[test]
fn transform_and_project_golden() {
    let a = fixture_a_path();
    let dir = tempfile::tempdir().unwrap();
    stdout_of(&["transform", "--input", path_str(&a), "--out", path_str(dir.path())]);
    let g = golden_dir();
    check_golden(
        &g.join("transform_fixture_a.txt"),
        &std::fs::read_to_string(dir.path().join("transformed.txt")).unwrap(),
    );
    check_golden(
        &g.join("oplog_fixture_a.tsv"),
        &std::fs::read_to_string(dir.path().join("oplog.tsv")).unwrap(),
    );
    check_golden(&g.join("project_fixture_a.txt"), &stdout_of(&["project", "--input", path_str(&a)]));
}

#[test]
fn experiment_golden() {
    let b = fixture_b_path();
    let dir = tempfile::tempdir().unwrap();
    stdout_of(&["experiment", "--input", path_str(&b), "--out", path_str(dir.path())]);
    let g = golden_dir();
    let read = |name: &str| std::fs::read_to_string(dir.path().join(name)).unwrap();
    check_golden(&g.join("experiment_fixture_b.tsv"), &read("experiment.tsv"));
    check_golden(&g.join("rules_fixture_b.tsv"), &read("rules.tsv"));
    assert_eq!(read("rules.tsv"), "child_pos\tparent_pos\tfrequency\tsupport\nNN\tIN\t1.000\t40\n");
}

#[test]
fn huge_support_floor_changes_nothing() {
    let b = fixture_b_path();
    let out = stdout_of(&["experiment", "--input", path_str(&b), "--min-support", "1000"]);
    let rows: Vec<Vec<&str>> = out
        .lines()
        .filter(|l| l.starts_with("baseline") || l.starts_with("corrected"))
        .map(|l| l.split('\t').skip(1).collect())
        .collect();
    assert_eq!(rows[0], rows[1]);
    assert!(!out.contains("# rule"));
}

#[test]
fn other_seeds_are_deterministic_too() {
    let b = fixture_b_path();
    let args = ["experiment", "--input", path_str(&b), "--seed", "7"];
    assert_eq!(stdout_of(&args), stdout_of(&args));
    assert_ne!(stdout_of(&args), stdout_of(&["experiment", "--input", path_str(&b)]));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.txt");
    std::fs::write(&empty, "").unwrap();
    let out = divkit(&["analyze", "--input", path_str(&empty)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("empty corpus"));

    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "# id 1\n## source\n1\ta\tX\t0\n## target\n1\tb\tX\t0\n## align\n1-2\n").unwrap();
    let out = divkit(&["posstats", "--input", path_str(&bad)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 7"));

    let missing = dir.path().join("missing.txt");
    assert_eq!(divkit(&["analyze", "--input", path_str(&missing)]).status.code(), Some(1));

    let b = fixture_b_path();
    for args in [
        ["--threshold", "1.5"],
        ["--threshold", "-0.1"],
        ["--train-fraction", "1"],
        ["--train-fraction", "0"],
        ["--min-support", "-1"],
    ] {
        let mut full = vec!["experiment", "--input", path_str(&b)];
        full.extend(args);
        assert_eq!(divkit(&full).status.code(), Some(2), "{args:?}");
    }
    assert_eq!(divkit(&["analyze"]).status.code(), Some(2));
    assert_eq!(divkit(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        divkit(&["analyze", "--input", path_str(&b), "--direction", "up"]).status.code(),
        Some(2)
    );
    assert_eq!(divkit(&["--help"]).status.code(), Some(0));
}

#[test]
fn header_only_corpus_gives_header_only_tables() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("none.txt");
    std::fs::write(&path, "# languages en hi\n").unwrap();
    let out = stdout_of(&["posstats", "--input", path_str(&path)]);
    assert!(out.ends_with("direction\tkind\tchild_pos\tparent_pos\tapplied\topportunities\trate\n"));
    let out = stdout_of(&["analyze", "--input", path_str(&path)]);
    assert!(out.ends_with("other\tedges\n"));
}

#[test]
fn no_operations_means_no_posstats_rows() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("same.txt");
    std::fs::write(
        &path,
        "# id 1\n## source\n1\ta\tX\t0\n2\tb\tY\t1\n## target\n1\tc\tX\t0\n2\td\tY\t1\n## align\n1-1 2-2\n",
    )
    .unwrap();
    let out = stdout_of(&["posstats", "--input", path_str(&path)]);
    assert!(out.lines().last().unwrap().starts_with("direction\t"));
}

#[test]
fn unprojectable_pairs_come_out_unattached() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("none.txt");
    std::fs::write(&path, "# id 1\n## source\n1\ta\tX\t0\n## target\n1\tb\tY\t0\n## align\n\n").unwrap();
    let out = stdout_of(&["project", "--input", path_str(&path)]);
    assert!(out.ends_with("## projected\n1\ta\tUNK\t-1\n"));
}
