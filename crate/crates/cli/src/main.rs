//! Batch front end for the index and the sensitivity laboratory.
//!
//! All positions on the command line are 1-based.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use cdawg_lab::cdawg::{self, Cdawg};
use cdawg_lab::edits::{apply_edit, EditKind, EditOp};
use cdawg_lab::partition::{build_maps, partition_repeats, report_document, verify_with_maps};
use cdawg_lab::sensitivity::{
    exhaustive_scan, family, FamilyName, FamilySpec, ScanConfig, ALL_KINDS,
};
use cdawg_lab::Text;

#[derive(Parser)]
#[command(name = "cdawg-lab", version, about = "CDAWG index and edit-sensitivity laboratory", long_about = None)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Text source: exactly one of an inline argument or a file of raw bytes.
#[derive(Args)]
#[group(required = true, multiple = false)]
struct InputSource {
    /// Inline text (printable characters).
    #[arg(long)]
    text: Option<String>,
    /// File read as raw bytes; byte values are the alphabet.
    #[arg(long)]
    input: Option<PathBuf>,
}

impl InputSource {
    fn read(&self) -> Result<Text> {
        match (&self.text, &self.input) {
            (Some(s), None) => {
                if !s.chars().all(|c| c.is_ascii() && !c.is_ascii_control()) {
                    bail!("--text accepts printable ASCII; use --input for raw bytes");
                }
                Ok(Text::from(s.as_str()))
            }
            (None, Some(path)) => {
                let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
                Ok(Text::new(bytes))
            }
            _ => unreachable!("clap enforces the group"),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum OpKind {
    Ins,
    Del,
    Sub,
}

impl From<OpKind> for EditKind {
    fn from(k: OpKind) -> Self {
        match k {
            OpKind::Ins => EditKind::Insertion,
            OpKind::Del => EditKind::Deletion,
            OpKind::Sub => EditKind::Substitution,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Build the index and write it to disk.
    Build {
        #[command(flatten)]
        source: InputSource,
        /// Output path for the serialized index.
        #[arg(long)]
        out: PathBuf,
        /// Also write a Graphviz rendering.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Report n, e (edge count), node count and alphabet size.
    Stats {
        #[command(flatten)]
        source: InputSource,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Count (and optionally locate) a pattern in a stored index.
    Query {
        #[arg(long)]
        index: PathBuf,
        #[arg(long)]
        pattern: String,
        /// Also print the 1-based starting positions.
        #[arg(long)]
        locate: bool,
    },
    /// Classify the maximal repeats of T' for one edit and verify the lemmas.
    Classify {
        #[arg(long)]
        text: String,
        #[arg(long, value_enum)]
        op: OpKind,
        /// 1-based edit position.
        #[arg(long)]
        pos: usize,
        /// Inserted/substituted character (required for ins/sub).
        #[arg(long = "char")]
        ch: Option<char>,
    },
    /// Exhaustively verify the partition lemmas; exits nonzero on violation.
    Verify {
        /// Alphabet the scanned texts range over, e.g. "ab".
        #[arg(long)]
        alphabet: String,
        #[arg(long = "max-len")]
        max_len: usize,
        /// Edit kinds to apply (default: all three).
        #[arg(long, value_enum, num_args = 1..)]
        kinds: Option<Vec<OpKind>>,
        /// Alphabet for inserted/substituted characters
        /// (default: text alphabet plus one fresh character).
        #[arg(long = "edit-alphabet")]
        edit_alphabet: Option<String>,
        #[arg(long)]
        jobs: Option<usize>,
        /// Wall-clock budget in seconds; a partial run is flagged incomplete.
        #[arg(long = "budget-secs")]
        budget_secs: Option<u64>,
    },
    /// Exhaustive sensitivity sweep; writes per-edit CSV and prints a summary.
    Scan {
        #[arg(long)]
        alphabet: String,
        #[arg(long = "max-len")]
        max_len: usize,
        #[arg(long, value_enum, num_args = 1..)]
        kinds: Option<Vec<OpKind>>,
        #[arg(long = "edit-alphabet")]
        edit_alphabet: Option<String>,
        /// CSV output path (one row per (T, op)).
        #[arg(long)]
        report: PathBuf,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long = "budget-secs")]
        budget_secs: Option<u64>,
    },
    /// Print a classic family word (fibonacci, thue_morse, unary_b).
    Family {
        #[arg(long)]
        name: String,
        #[arg(long)]
        k: usize,
        /// Also print the index statistics of the word.
        #[arg(long)]
        stats: bool,
    },
}

fn edit_op(kind: OpKind, pos: usize, ch: Option<char>) -> Result<EditOp> {
    let byte = |c: Option<char>| -> Result<u8> {
        let c = c.ok_or_else(|| anyhow!("--char is required for this edit kind"))?;
        u8::try_from(c).map_err(|_| anyhow!("--char must be a single byte"))
    };
    Ok(match kind {
        OpKind::Ins => EditOp::insertion(pos, byte(ch)?),
        OpKind::Del => EditOp::deletion(pos),
        OpKind::Sub => EditOp::substitution(pos, byte(ch)?),
    })
}

fn scan_config(
    alphabet: &str,
    max_len: usize,
    kinds: &Option<Vec<OpKind>>,
    edit_alphabet: &Option<String>,
    budget_secs: Option<u64>,
) -> Result<ScanConfig> {
    if alphabet.is_empty() {
        bail!("--alphabet must be non-empty");
    }
    let mut cfg = ScanConfig::new(max_len, alphabet.as_bytes());
    if let Some(ea) = edit_alphabet {
        cfg.edit_alphabet = ea.as_bytes().to_vec();
    }
    cfg.kinds = kinds
        .as_ref()
        .map(|ks| ks.iter().map(|&k| EditKind::from(k)).collect())
        .unwrap_or_else(|| ALL_KINDS.to_vec());
    cfg.budget = budget_secs.map(Duration::from_secs);
    Ok(cfg)
}

fn set_jobs(jobs: Option<usize>) -> Result<()> {
    if let Some(n) = jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring worker threads")?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Build { source, out, dot } => {
            let t = source.read()?;
            let index = cdawg::build(&t)?;
            fs::write(&out, index.serialize()).with_context(|| format!("writing {}", out.display()))?;
            if let Some(dot_path) = dot {
                fs::write(&dot_path, index.export_dot())
                    .with_context(|| format!("writing {}", dot_path.display()))?;
            }
            let s = index.stats();
            println!("indexed n={} e={} nodes={}", s.n, s.edge_count, s.node_count);
        }
        Command::Stats { source, format } => {
            let t = source.read()?;
            let s = cdawg::build(&t)?.stats();
            match format {
                Format::Text => println!(
                    "n = {}\ne = {}\nnodes = {}\nsigma = {}",
                    s.n, s.edge_count, s.node_count, s.alphabet_size
                ),
                Format::Json => println!("{}", serde_json::to_string_pretty(&s)?),
                Format::Csv => {
                    println!("n,e,nodes,sigma");
                    println!("{},{},{},{}", s.n, s.edge_count, s.node_count, s.alphabet_size);
                }
            }
        }
        Command::Query { index, pattern, locate } => {
            let bytes = fs::read(&index).with_context(|| format!("reading {}", index.display()))?;
            let idx = Cdawg::deserialize(&bytes)?;
            let p = Text::from(pattern.as_str());
            println!("count: {}", idx.count_pattern(&p));
            if locate {
                let positions: Vec<String> =
                    idx.locate_pattern(&p).iter().map(ToString::to_string).collect();
                println!("positions: [{}]", positions.join(", "));
            }
        }
        Command::Classify { text, op, pos, ch } => {
            let t = Text::from(text.as_str());
            let ctx = apply_edit(&t, edit_op(op, pos, ch)?, true)?;
            let report = partition_repeats(&ctx);
            let maps = build_maps(&ctx, &report);
            let lemmas = verify_with_maps(&ctx, &report, &maps);
            println!("{}", serde_json::to_string_pretty(&report_document(&ctx, &report, &maps, &lemmas))?);
            if !lemmas.all_passed() {
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::Verify { alphabet, max_len, kinds, edit_alphabet, jobs, budget_secs } => {
            set_jobs(jobs)?;
            let mut cfg = scan_config(&alphabet, max_len, &kinds, &edit_alphabet, budget_secs)?;
            cfg.verify_lemmas = true;
            let report = exhaustive_scan(&cfg);
            println!("{}", serde_json::to_string_pretty(&report.summary_document())?);
            if !report.complete {
                eprintln!("warning: budget expired; report is partial");
            }
            if report.has_violations() {
                for v in report.lemma_violations.iter().take(20) {
                    eprintln!("violation: {v}");
                }
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::Scan { alphabet, max_len, kinds, edit_alphabet, report, jobs, budget_secs } => {
            set_jobs(jobs)?;
            let cfg = scan_config(&alphabet, max_len, &kinds, &edit_alphabet, budget_secs)?;
            let result = exhaustive_scan(&cfg);
            fs::write(&report, result.to_csv())
                .with_context(|| format!("writing {}", report.display()))?;
            println!("{}", serde_json::to_string_pretty(&result.summary_document())?);
            if result.has_violations() {
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::Family { name, k, stats } => {
            let name: FamilyName = name.parse()?;
            let word = family(FamilySpec { name, k })?;
            println!("{word}");
            if stats {
                let s = cdawg::build(&word)?.stats();
                println!("n = {}, e = {}, nodes = {}", s.n, s.edge_count, s.node_count);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
