// Fixture access and the generator behind fixture_b.txt.
#![allow(dead_code)]

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use divkit::{parse_corpus, CorpusDocument};

pub fn fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

pub fn fixture_a_path() -> PathBuf {
    fixture_dir().join("fixture_a.txt")
}

pub fn fixture_b_path() -> PathBuf {
    fixture_dir().join("fixture_b.txt")
}

pub fn load(path: &Path) -> CorpusDocument {
    parse_corpus(&std::fs::read_to_string(path).unwrap()).unwrap()
}

/// Compares `actual` with a stored file. With `DIVKIT_BLESS` set the file is
/// rewritten instead.
pub fn check_golden(path: &Path, actual: &str) {
    if std::env::var_os("DIVKIT_BLESS").is_some() {
        std::fs::write(path, actual).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(actual, expected, "output differs from {}", path.display());
}

/// Shape of one synthetic instance.
#[derive(Clone, Copy, Debug)]
pub struct Shape {
    /// Verbs attached to the noun.
    pub verbs: usize,
    /// Whether the gold tree has an unaligned particle.
    pub particle: bool,
}

pub const FIXTURE_B_SIZE: usize = 50;

pub fn fixture_b_shape(i: usize) -> Shape {
    Shape {
        verbs: 1 + i % 3,
        particle: i % 2 == 1,
    }
}

const NOUNS: [(&str, &str); 10] = [
    ("ghar", "house"),
    ("shahar", "city"),
    ("bazaar", "market"),
    ("school", "school"),
    ("daftar", "office"),
    ("gaon", "village"),
    ("mandir", "temple"),
    ("bagicha", "garden"),
    ("station", "station"),
    ("kamra", "room"),
];
const POSTPOSITIONS: [(&str, &str); 4] = [("mein", "in"), ("se", "from"), ("tak", "to"), ("par", "on")];
const VERBS: [(&str, &str); 6] = [
    ("ja", "go"),
    ("aa", "come"),
    ("ruk", "stay"),
    ("baith", "sit"),
    ("chal", "walk"),
    ("dekh", "see"),
];

/// Synthetic corpus: in the gold source tree a noun heads its postposition and its
/// verbs; in the target tree the preposition is the root and heads the noun,
/// which heads the verbs. Every word but the particle is linked one-to-one.
pub fn fixture_b_text() -> String {
    let mut out = String::from("# languages hi en\n");
    for i in 0..FIXTURE_B_SIZE {
        let shape = fixture_b_shape(i);
        let noun = NOUNS[i % NOUNS.len()];
        let post = POSTPOSITIONS[i % POSTPOSITIONS.len()];
        let verbs: Vec<(&str, &str)> = (0..shape.verbs).map(|j| VERBS[(i + j) % VERBS.len()]).collect();

        let _ = write!(out, "\n# id b{:02}\n## source\n", i + 1);
        let _ = writeln!(out, "1\t{}\tNN\t0", noun.0);
        let _ = writeln!(out, "2\t{}\tPSP\t1", post.0);
        for (j, v) in verbs.iter().enumerate() {
            let _ = writeln!(out, "{}\t{}\tVM\t1", 3 + j, v.0);
        }
        if shape.particle {
            let _ = writeln!(out, "{}\tbhi\tRP\t1", 3 + shape.verbs);
        }
        out.push_str("## target\n");
        let _ = writeln!(out, "1\t{}\tIN\t0", post.1);
        let _ = writeln!(out, "2\t{}\tNN\t1", noun.1);
        for (j, v) in verbs.iter().enumerate() {
            let _ = writeln!(out, "{}\t{}\tVB\t2", 3 + j, v.1);
        }
        out.push_str("## align\n1-2 2-1");
        for j in 0..shape.verbs {
            let _ = write!(out, " {0}-{0}", 3 + j);
        }
        out.push('\n');
    }
    out
}
