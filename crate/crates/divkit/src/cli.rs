//! The `divkit` command line.
//!
//! Exit status is 0 on success, 1 when the input cannot be read or parsed
//! and 2 for invalid options.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use divkit_core::pipeline::transform_corpus;
use divkit_core::projection::{project_tree, ProjectedTree};
use divkit_core::rules::{holdout_experiment, ExperimentConfig};
use divkit_core::{Direction, Error as CoreError, Token};
use log::{info, warn};

use crate::format::{parse_corpus, serialize_corpus, serialize_projected, CorpusDocument};
use crate::report;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "divkit", version, about = "Divergence analysis for word-aligned dependency tree pairs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Corpus file.
    #[arg(long)]
    pub input: PathBuf,
    /// Directory for the output files; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Tsv)]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Tsv,
    Json,
}

impl Format {
    fn extension(self) -> &'static str {
        match self {
            Format::Tsv => "tsv",
            Format::Json => "json",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DirectionArg {
    #[value(name = "src-tgt")]
    SrcTgt,
    #[value(name = "tgt-src")]
    TgtSrc,
    Both,
}

impl DirectionArg {
    fn directions(self) -> &'static [Direction] {
        match self {
            DirectionArg::SrcTgt => &[Direction::SourceToTarget],
            DirectionArg::TgtSrc => &[Direction::TargetToSource],
            DirectionArg::Both => &Direction::BOTH,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Edge class percentages after each transformation stage.
    Analyze {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = DirectionArg::Both)]
        direction: DirectionArg,
    },
    /// How often each operation applied, per POS tag pair.
    Posstats {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = DirectionArg::Both)]
        direction: DirectionArg,
        /// Also list tags and tag pairs no operation applied to.
        #[arg(long)]
        include_zero: bool,
    },
    /// Transformed corpus; with --out also the operation log.
    Transform {
        #[command(flatten)]
        common: Common,
    },
    /// Target trees projected onto the source words.
    Project {
        #[command(flatten)]
        common: Common,
    },
    /// Learn swap rules on a training split and score them on the rest.
    Experiment {
        #[command(flatten)]
        common: Common,
        /// Minimum swap frequency of a rule, between 0 and 1.
        #[arg(long, default_value_t = 0.8)]
        threshold: f64,
        /// Minimum number of observed edges of a rule.
        #[arg(long, default_value_t = 3)]
        min_support: u64,
        /// Share of pairs used for training, strictly between 0 and 1.
        #[arg(long, default_value_t = 0.8)]
        train_fraction: f64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
}

#[derive(Debug)]
enum Failure {
    Input(String),
    Config(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Input(_) => EXIT_INPUT,
            Failure::Config(_) => EXIT_CONFIG,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Config(m) => m,
        }
    }
}

fn read_document(path: &Path) -> Result<CorpusDocument, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let doc = parse_corpus(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    info!("read {} pairs from {}", doc.corpus.len(), path.display());
    Ok(doc)
}

/// Where output goes: named files in a directory, or standard output.
struct Sink<'a> {
    dir: Option<&'a Path>,
    stdout: &'a mut dyn Write,
}

impl Sink<'_> {
    /// Writes `content` to `name` in the output directory. Without a
    /// directory only `primary` outputs are printed.
    fn emit(&mut self, name: &str, content: &str, primary: bool) -> Result<(), Failure> {
        match self.dir {
            Some(dir) => {
                let path = dir.join(name);
                fs::write(&path, content).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
                info!("wrote {}", path.display());
                Ok(())
            }
            None if primary => self
                .stdout
                .write_all(content.as_bytes())
                .map_err(|e| Failure::Input(format!("standard output: {e}"))),
            None => Ok(()),
        }
    }
}

fn execute(command: Command, stdout: &mut dyn Write) -> Result<(), Failure> {
    let common = match &command {
        Command::Analyze { common, .. }
        | Command::Posstats { common, .. }
        | Command::Transform { common }
        | Command::Project { common }
        | Command::Experiment { common, .. } => common,
    };
    if let Command::Experiment {
        threshold,
        train_fraction,
        ..
    } = &command
    {
        if !(0.0..=1.0).contains(threshold) {
            return Err(Failure::Config(format!("--threshold must be between 0 and 1, got {threshold}")));
        }
        if !(*train_fraction > 0.0 && *train_fraction < 1.0) {
            return Err(Failure::Config(format!(
                "--train-fraction must be strictly between 0 and 1, got {train_fraction}"
            )));
        }
    }
    if let Some(dir) = &common.out {
        fs::create_dir_all(dir).map_err(|e| Failure::Config(format!("{}: {e}", dir.display())))?;
    }
    let doc = read_document(&common.input)?;
    let format = common.format;
    let ext = format.extension();
    let mut sink = Sink {
        dir: common.out.as_deref(),
        stdout,
    };

    match command {
        Command::Analyze { direction, .. } => {
            let t = transform_corpus(&doc.corpus);
            for e in &t.excluded {
                warn!("excluded pair {}: {}", e.id, e.error);
            }
            let dirs = direction.directions();
            let text = match format {
                Format::Tsv => report::stage_table_tsv(&t, dirs),
                Format::Json => report::stage_table_json(&t, dirs),
            };
            sink.emit(&format!("stages.{ext}"), &text, true)
        }
        Command::Posstats {
            direction,
            include_zero,
            ..
        } => {
            let t = transform_corpus(&doc.corpus);
            let rows = report::pos_rows(&t, direction.directions(), include_zero);
            let text = match format {
                Format::Tsv => report::pos_table_tsv(&rows),
                Format::Json => report::pos_table_json(&rows),
            };
            sink.emit(&format!("pos_stats.{ext}"), &text, true)
        }
        Command::Transform { .. } => {
            let t = transform_corpus(&doc.corpus);
            for e in &t.excluded {
                warn!("pair {} left unchanged: {}", e.id, e.error);
            }
            // Excluded pairs are written unchanged, in corpus order.
            let mut transformed = t.transformed.iter();
            let pairs = doc
                .corpus
                .iter()
                .map(|p| {
                    if t.excluded.iter().any(|e| e.id == p.id()) {
                        p.clone()
                    } else {
                        transformed.next().expect("one output per included pair").clone()
                    }
                })
                .collect();
            let out = CorpusDocument::new(
                divkit_core::Corpus::new(pairs).expect("ids are unchanged"),
                doc.source_language.clone(),
                doc.target_language.clone(),
            );
            sink.emit("transformed.txt", &serialize_corpus(&out), true)?;
            let log = match format {
                Format::Tsv => report::oplog_tsv(t.log()),
                Format::Json => report::oplog_json(t.log()),
            };
            sink.emit(&format!("oplog.{ext}"), &log, false)
        }
        Command::Project { .. } => {
            let mut trees = Vec::new();
            for pair in doc.corpus.iter() {
                let tokens = pair.source().tokens();
                let tree = match project_tree(pair.target(), pair.alignment(), tokens) {
                    Ok(tree) => tree,
                    Err(CoreError::ProjectionDegenerate) => {
                        warn!("pair {}: no aligned source word, nothing projected", pair.id());
                        unattached(tokens)
                    }
                    Err(e) => return Err(Failure::Input(format!("pair {}: {e}", pair.id()))),
                };
                trees.push((pair.id(), tree));
            }
            let text = serialize_projected(
                &doc.source_language,
                &doc.target_language,
                trees.iter().map(|(id, t)| (*id, t)),
            );
            sink.emit("projected.txt", &text, true)
        }
        Command::Experiment {
            threshold,
            min_support,
            train_fraction,
            seed,
            ..
        } => {
            let config = ExperimentConfig {
                train_fraction,
                threshold,
                min_support,
                seed,
            };
            let result = holdout_experiment(doc.corpus.pairs(), config).map_err(|e| match e {
                CoreError::EmptySplit(_) | CoreError::InvalidParameter(_) => Failure::Config(e.to_string()),
                other => Failure::Input(other.to_string()),
            })?;
            for id in &result.unprojectable {
                warn!("held-out pair {id} has no aligned source word");
            }
            info!("learned {} rules", result.rules.len());
            let (text, rules) = match format {
                Format::Tsv => (report::experiment_tsv(&result), report::rules_tsv(&result.rules)),
                Format::Json => (report::experiment_json(&result), report::rules_json(&result.rules)),
            };
            sink.emit(&format!("experiment.{ext}"), &text, true)?;
            sink.emit(&format!("rules.{ext}"), &rules, false)
        }
    }
}

fn unattached(tokens: &[Token]) -> ProjectedTree {
    let tokens = tokens
        .iter()
        .map(|t| Token::new(t.index(), t.form(), divkit_core::projection::UNKNOWN_POS))
        .collect::<Vec<_>>();
    let heads = vec![None; tokens.len()];
    ProjectedTree::new(tokens, heads).expect("no attachments")
}

/// Runs the tool and returns its exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(rendered.as_bytes())
            } else {
                stdout.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    match execute(cli.command, stdout) {
        Ok(()) => EXIT_OK,
        Err(failure) => {
            let _ = writeln!(stderr, "divkit: {}", failure.message());
            failure.code()
        }
    }
}
