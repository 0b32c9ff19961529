use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use bitsim_core::encoder::BitCode;
use bitsim_core::engine::{ChunkCache, SimilarityMatrix};
use bitsim_core::oracle::cross_check;
use bitsim_core::similarity::{self, check_properties, BitScore};
use bitsim_core::{parse_expr, parse_tbox, EncodingContext, Error, SimilarityConfig, TBox};

const EXIT_USAGE: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_UNDEFINED: u8 = 3;
const EXIT_FAILURE: u8 = 4;

/// Encode description-logic concepts as bit-codes and compare them.
#[derive(Parser)]
#[command(name = "bitsim", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Options,
}

#[derive(Args)]
struct Options {
    /// Chunk size for the similarity engine.
    #[arg(long = "chunk", global = true, default_value_t = 64, value_parser = clap::value_parser!(u64).range(1..))]
    chunk: u64,
    /// Multiply similarity by the code-generativity ratio.
    #[arg(long, global = true)]
    penalty: bool,
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 1000)]
    trials: usize,
    /// Print per-position breakdowns.
    #[arg(short, long, global = true)]
    verbose: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Print the bit-code of each name (all concepts when none are given).
    Encode { tbox: PathBuf, names: Vec<String> },
    /// Aggregate similarity of two concept expressions.
    Sim { tbox: PathBuf, a: String, b: String },
    /// Similarity of the conjunction against the disjunction.
    Jaccard { tbox: PathBuf, a: String, b: String },
    /// Whether the first expression is subsumed by the second.
    Subsume { tbox: PathBuf, a: String, b: String },
    /// Least common subsumer of two atomic concepts.
    Lcs { tbox: PathBuf, a: String, b: String },
    /// Code-generativity of an expression or serialized code.
    Fcg { tbox: PathBuf, code: String },
    /// All-pairs similarity over every concept of the terminology.
    Matrix { tbox: PathBuf },
    /// Randomized similarity property suite.
    Check { tbox: PathBuf },
    /// Compare the encoder against the brute-force oracle.
    Crosscheck { tbox: PathBuf },
    /// Time all-pairs similarity at several chunk sizes.
    Bench { tbox: PathBuf },
}

enum Failure {
    Input(String),
    Undefined(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Undefined(_) => Failure::Undefined(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

type Outcome = Result<String, Failure>;

fn load(path: &PathBuf) -> Result<(TBox, EncodingContext), Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let tbox = parse_tbox(&text)?;
    let ctx = EncodingContext::new(&tbox)?;
    Ok((tbox, ctx))
}

fn encode(ctx: &EncodingContext, text: &str) -> Result<BitCode, Failure> {
    Ok(ctx.encode(&parse_expr(text)?)?)
}

fn config(opts: &Options) -> SimilarityConfig {
    SimilarityConfig {
        generativity_penalty: opts.penalty,
        chunk_size: opts.chunk as usize,
    }
}

fn all_codes(tbox: &TBox, ctx: &EncodingContext) -> Result<(Vec<String>, Vec<BitCode>), Failure> {
    let names = tbox.concept_names();
    let codes = names
        .iter()
        .map(|n| ctx.encode_name(n))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((names, codes))
}

fn breakdown(report: &similarity::SimilarityReport) -> String {
    let mut out = String::from("position\ta\tb\tweight\tscore\n");
    for p in &report.per_position {
        let score = match p.outcome {
            BitScore::Score(s) => format!("{s:.6}"),
            BitScore::Ignored => "ignored".into(),
            BitScore::Undefined => "undefined".into(),
        };
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{score}",
            p.position, p.pair.0, p.pair.1, p.weight
        );
    }
    for s in &report.segments {
        let _ = writeln!(out, "segment\t{}\t{}\t1\t{:.6}", s.in_a, s.in_b, s.score);
    }
    if let Some((fa, fb)) = report.fcg_pair {
        let _ = writeln!(out, "fcg\t{fa}\t{fb}");
    }
    out
}

fn run(cli: &Cli) -> Outcome {
    let opts = &cli.opts;
    let cfg = config(opts);
    match &cli.command {
        Command::Encode { tbox, names } => {
            let (tbox, ctx) = load(tbox)?;
            let names = if names.is_empty() {
                tbox.concept_names()
            } else {
                names.clone()
            };
            let mut out = String::new();
            for n in &names {
                let _ = writeln!(out, "{n}\t{}", encode(&ctx, n)?);
            }
            Ok(out)
        }
        Command::Sim { tbox, a, b } => {
            let (_, ctx) = load(tbox)?;
            let (x, y) = (encode(&ctx, a)?, encode(&ctx, b)?);
            let report = bitsim_core::engine::sim_chunked(&x, &y, &cfg, &ChunkCache::default())?;
            let mut out = format!("{:.6}\n", report.score);
            if opts.verbose {
                out.push_str(&breakdown(&report));
            }
            Ok(out)
        }
        Command::Jaccard { tbox, a, b } => {
            let (_, ctx) = load(tbox)?;
            let report = similarity::bitsim_jaccard(&parse_expr(a)?, &parse_expr(b)?, &ctx, &cfg)?;
            let mut out = format!("{:.6}\n", report.score);
            if opts.verbose {
                out.push_str(&breakdown(&report));
            }
            Ok(out)
        }
        Command::Subsume { tbox, a, b } => {
            let (_, ctx) = load(tbox)?;
            Ok(format!(
                "{}\n",
                similarity::subsumes(&encode(&ctx, a)?, &encode(&ctx, b)?)?
            ))
        }
        Command::Lcs { tbox, a, b } => {
            let (_, ctx) = load(tbox)?;
            Ok(format!("{}\n", similarity::lcs_atomic(a, b, &ctx)?))
        }
        Command::Fcg { tbox, code } => {
            let (_, ctx) = load(tbox)?;
            let code = match parse_expr(code) {
                Ok(expr) => ctx.encode(&expr)?,
                Err(_) => ctx.deserialize(code)?,
            };
            Ok(format!("{}\n", similarity::fcg::fcg(&code)?))
        }
        Command::Matrix { tbox } => {
            let (tbox, ctx) = load(tbox)?;
            let (names, codes) = all_codes(&tbox, &ctx)?;
            let m = bitsim_core::engine::all_pairs(&codes, &cfg, &ChunkCache::default())?;
            Ok(m.to_tsv(&names))
        }
        Command::Check { tbox } => {
            let (tbox, _) = load(tbox)?;
            let report = check_properties(&tbox, &cfg, opts.seed, opts.trials)?;
            let tsv = report.to_tsv();
            if report.all_passed() {
                Ok(tsv)
            } else {
                Err(Failure::Check(tsv))
            }
        }
        Command::Crosscheck { tbox } => {
            let (tbox, _) = load(tbox)?;
            let report = cross_check(&tbox, opts.trials, opts.seed)?;
            eprintln!("{}", report.summary());
            let tsv = report.to_tsv();
            if report.disagreements() == 0 {
                Ok(tsv)
            } else {
                Err(Failure::Check(tsv))
            }
        }
        Command::Bench { tbox } => {
            let (tbox, ctx) = load(tbox)?;
            let (_, codes) = all_codes(&tbox, &ctx)?;
            let mut out = String::from("chunk_size\tpairs\tns_per_pair\thit_rate\n");
            for chunk in [1usize, 8, 64, 256] {
                let cfg = SimilarityConfig {
                    chunk_size: chunk,
                    ..cfg
                };
                let cache = ChunkCache::default();
                let start = Instant::now();
                let mut pairs = 0usize;
                // a cold pass, then a warm one served from the cache
                for _ in 0..2 {
                    let m: SimilarityMatrix = bitsim_core::engine::all_pairs(&codes, &cfg, &cache)?;
                    pairs += m.size * (m.size + 1) / 2;
                }
                let ns = start.elapsed().as_nanos() as f64 / pairs.max(1) as f64;
                let _ = writeln!(
                    out,
                    "{chunk}\t{pairs}\t{ns:.1}\t{:.4}",
                    cache.stats().hit_rate()
                );
            }
            Ok(out)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INPUT)
        }
        Err(Failure::Undefined(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_UNDEFINED)
        }
        Err(Failure::Check(report)) => {
            print!("{report}");
            ExitCode::from(EXIT_FAILURE)
        }
    }
}
