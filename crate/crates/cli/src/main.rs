//! `flagtutte`: compute invariants, run identity checks, list pseudo-bases
//! and dump the corpus.
//!
//! Exit codes: 0 success, 2 input error, 3 internal assertion, 4 identity
//! falsified.

use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use flagtutte::corpus;
use flagtutte::invariants::{self, INVARIANTS};
use flagtutte::io::{flag_to_json, matroid_to_json, parse_document, Document};
use flagtutte::verify::{self, IDENTITIES};
use flagtutte::{pseudo_bases, Error, FlagMatroid};

#[derive(Parser, Debug)]
#[command(name = "flagtutte", version, about = "Exact Tutte-type invariants of matroids and flag matroids")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, env = "FLAGTUTTE_THREADS", global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum CorpusKind {
    Matroids,
    Quotients,
    Flags,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute one invariant of a matroid or flag matroid.
    Compute {
        #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(INVARIANTS))]
        invariant: String,
        /// File path or inline JSON document.
        #[arg(long)]
        input: String,
        /// Also print the torus-equivariant refinement (kt, lvt).
        #[arg(long)]
        equivariant: bool,
    },
    /// Check an identity on one input, or over the corpus without --input.
    Verify {
        #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(IDENTITIES))]
        identity: String,
        #[arg(long)]
        input: Option<String>,
        #[arg(long, default_value_t = corpus::DEFAULT_SEED)]
        seed: u64,
    },
    /// List the pseudo-bases of a quotient grouped by size.
    Pseudobases {
        #[arg(long)]
        input: String,
    },
    /// Print the deterministic corpus, one document per line.
    Corpus {
        #[arg(long, value_enum, default_value_t = CorpusKind::Matroids)]
        kind: CorpusKind,
        #[arg(long, default_value_t = 6)]
        max_n: usize,
        #[arg(long, default_value_t = corpus::DEFAULT_SEED)]
        seed: u64,
    },
}

/// Why a command stopped.
enum Failure {
    Input(String),
    Internal(String),
    Falsified(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_internal() {
            Failure::Internal(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

fn read_input(arg: &str) -> Result<Document, Failure> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| Failure::Input(format!("{arg}: {e}")))?
    };
    parse_document(&text).map_err(|e| Failure::Input(format!("{arg}: {e}")))
}

fn compute(invariant: &str, input: &str, equivariant: bool, format: Format) -> Result<String, Failure> {
    let fm = read_input(input)?.input.into_flag();
    let r = invariants::compute(invariant, &fm, equivariant)?;
    Ok(match format {
        Format::Text => {
            let mut out = r.polynomial.to_string();
            if let Some(e) = &r.equivariant {
                write!(out, "\n{e}").expect("string write");
            }
            out
        }
        Format::Json => {
            let mut v = json!({
                "invariant": r.invariant,
                "input_hash": format!("{:016x}", r.input_hash),
                "polynomial": r.polynomial.to_string(),
                "coefficients": r.polynomial,
            });
            if let Some(e) = &r.equivariant {
                v["equivariant"] = serde_json::to_value(e).expect("polynomial serializes");
            }
            v.to_string()
        }
    })
}

fn run_verify(identity: &str, input: Option<&str>, seed: u64, format: Format) -> Result<String, Failure> {
    let doc = input.map(read_input).transpose()?;
    let report = verify::run_identity(identity, doc.as_ref(), seed)?;
    let out = match format {
        Format::Text => report.to_string(),
        Format::Json => report.to_json(),
    };
    if report.passed() {
        Ok(out)
    } else {
        Err(Failure::Falsified(out))
    }
}

fn quotient_of(fm: &FlagMatroid) -> Result<(&flagtutte::Matroid, &flagtutte::Matroid), Failure> {
    match fm.constituents() {
        [m] => Ok((m, m)),
        [a, b] => Ok((a, b)),
        _ => Err(Failure::Input(format!("expected a matroid quotient, got {} constituents", fm.len()))),
    }
}

fn pseudobases(input: &str, format: Format) -> Result<String, Failure> {
    let fm = read_input(input)?.input.into_flag();
    let (m1, m2) = quotient_of(&fm)?;
    let pb = pseudo_bases(m1, m2)?;
    let profile = invariants::size_profile(&pb);
    Ok(match format {
        Format::Text => {
            let mut out = String::new();
            for (size, count) in &profile {
                let sets: Vec<String> = pb.iter().filter(|s| s.len() == *size).map(|s| s.to_string()).collect();
                writeln!(out, "size {size} ({count}): {}", sets.join(" ")).expect("string write");
            }
            let sizes: Vec<String> = profile.iter().map(|(s, c)| format!("{s}:{c}")).collect();
            write!(out, "sizes {{{}}}", sizes.join(", ")).expect("string write");
            out
        }
        Format::Json => {
            let sizes: serde_json::Map<String, Value> =
                profile.iter().map(|(s, c)| (s.to_string(), json!(c))).collect();
            let sets: Vec<Vec<usize>> = pb.iter().map(|s| s.iter().map(|i| i + 1).collect()).collect();
            json!({"sizes": sizes, "pseudo_bases": sets}).to_string()
        }
    })
}

fn dump_corpus(kind: CorpusKind, max_n: usize, seed: u64, format: Format) -> Result<String, Failure> {
    if max_n == 0 || max_n > 7 {
        return Err(Failure::Input(format!("--max-n must lie in 1..=7, got {max_n}")));
    }
    let docs: Vec<Value> = match kind {
        CorpusKind::Matroids => corpus::matroids(max_n, seed).iter().map(matroid_to_json).collect(),
        CorpusKind::Quotients => corpus::quotients(max_n, seed)
            .into_iter()
            .map(|(a, b)| flag_to_json(&FlagMatroid::new(vec![a, b]).expect("corpus quotient")))
            .collect(),
        CorpusKind::Flags => corpus::flags(max_n, seed).iter().map(flag_to_json).collect(),
    };
    Ok(match format {
        Format::Text => docs.iter().map(Value::to_string).collect::<Vec<_>>().join("\n"),
        Format::Json => Value::Array(docs).to_string(),
    })
}

fn run(cli: &Cli) -> Result<String, Failure> {
    match &cli.command {
        Command::Compute { invariant, input, equivariant } => compute(invariant, input, *equivariant, cli.format),
        Command::Verify { identity, input, seed } => run_verify(identity, input.as_deref(), *seed, cli.format),
        Command::Pseudobases { input } => pseudobases(input, cli.format),
        Command::Corpus { kind, max_n, seed } => dump_corpus(*kind, *max_n, *seed, cli.format),
    }
}

/// Writes to stdout; a closed pipe is not an error.
fn emit(text: &str) {
    use std::io::Write;
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot configure {n} threads: {e}");
            return ExitCode::from(3);
        }
    }
    match run(&cli) {
        Ok(out) => {
            emit(&out);
            ExitCode::SUCCESS
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Falsified(report)) => {
            emit(&report);
            ExitCode::from(4)
        }
    }
}
