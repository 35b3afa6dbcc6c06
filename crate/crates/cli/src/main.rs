//! Batch front end. Subcommands wrap the library operations and print
//! machine-readable output; identical invocations produce byte-identical
//! stdout.
//!
//! Exit codes: 0 success, 2 usage or domain error, 3 resource cap
//! exceeded, 1 internal invariant violation.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use lj_core::arith::{a_invariant, effectivity_screen, BlockParams, ScreenKind};
use lj_core::brauer::{brauer_trace, reduce_mod_l, RootIdentification};
use lj_core::error::Error;
use lj_core::gf::{Field, FieldMatrix};
use lj_core::groth::{
    closed_form_matrix, invert_unitriangular, scan_block, DecompositionMatrix, MatrixSource,
};
use lj_core::kl::{KlContext, DEFAULT_MAX_LENGTH};
use lj_core::quiver::orbit_poset;
use lj_core::segcomb::enumerate_block;

#[derive(Parser)]
#[command(name = "lj", about = "Exact block combinatorics of the mod-l transfer", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the canonical multisegment basis of a block.
    Block(BlockArgs),
    /// Effectivity scan over the epsilon = d blocks up to a bound.
    Scan(ScanArgs),
    /// Decomposition matrix of a block (optionally its inverse).
    Decomp(DecompArgs),
    /// Kazhdan-Lusztig polynomial of a window pair.
    Kl(KlArgs),
    /// Brauer-trace evaluation.
    #[command(subcommand)]
    Brauer(BrauerCommand),
    /// Numeric invariants and screens.
    #[command(subcommand)]
    Arith(ArithCommand),
    /// Orbit closure poset of a block.
    Poset(PosetArgs),
}

#[derive(Args)]
struct BlockArgs {
    /// Block size d.
    #[arg(long)]
    d: u64,
    /// Order of q mod l; defaults to d (the superunipotent epsilon = d block).
    #[arg(long)]
    epsilon: Option<u64>,
}

#[derive(Args)]
struct ScanArgs {
    /// Scan every d <= dmax.
    #[arg(long)]
    dmax: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Matrix source.
    #[arg(long, value_enum, default_value_t = Source::ClosedForm)]
    source: Source,
}

#[derive(Args)]
struct DecompArgs {
    #[arg(long)]
    d: u64,
    #[arg(long, value_enum, default_value_t = Source::ClosedForm)]
    source: Source,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Print the inverse matrix n(b, a) instead of m(b, a).
    #[arg(long)]
    inverse: bool,
}

#[derive(Args)]
struct KlArgs {
    /// Rank d of the affine symmetric group.
    #[arg(long)]
    d: usize,
    /// Window of u, comma separated, e.g. "2,1,3".
    #[arg(long, allow_hyphen_values = true)]
    u: String,
    /// Window of w (entries may be negative, e.g. "-1,4").
    #[arg(long, allow_hyphen_values = true)]
    w: String,
    /// Memo cache file (versioned JSON); read if present, updated on exit.
    #[arg(long)]
    cache: Option<PathBuf>,
    /// Cap on l(w).
    #[arg(long, default_value_t = DEFAULT_MAX_LENGTH)]
    max_length: u64,
}

#[derive(Subcommand)]
enum BrauerCommand {
    /// Brauer trace of an operator given as a JSON matrix file.
    Trace(BrauerTraceArgs),
}

#[derive(Args)]
struct BrauerTraceArgs {
    /// JSON file {"l": .., "m": .., "modulus": [..], "rows": [[[..]..]..]}.
    #[arg(long)]
    matrix: PathBuf,
}

#[derive(Subcommand)]
enum ArithCommand {
    /// a-invariant (d/t)(q^t - 1).
    Ainv(AinvArgs),
    /// Effectivity screen verdict.
    Screen(ScreenArgs),
}

#[derive(Args)]
struct AinvArgs {
    #[arg(long)]
    d: u64,
    #[arg(long)]
    t: u64,
    #[arg(long)]
    q: u64,
}

#[derive(Args)]
struct ScreenArgs {
    #[arg(long)]
    d: u64,
    #[arg(long)]
    q: u64,
    #[arg(long)]
    l: u64,
    /// non-elliptic | liftable | non-self-twist | nu-stable | other
    #[arg(long)]
    kind: String,
}

#[derive(Args)]
struct PosetArgs {
    /// Quiver period e.
    #[arg(long)]
    e: u64,
    /// Dimension vector, comma separated, e.g. "1,1".
    #[arg(long)]
    dims: String,
    /// Emit Graphviz DOT instead of JSON.
    #[arg(long)]
    dot: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Source {
    ClosedForm,
    Kl,
}

impl From<Source> for MatrixSource {
    fn from(s: Source) -> MatrixSource {
        match s {
            Source::ClosedForm => MatrixSource::ClosedForm,
            Source::Kl => MatrixSource::KlComputed,
        }
    }
}

/// Documented ceiling for closed-form blocks (the basis has 2^d - 1
/// elements; d = 12 is a 4095 x 4095 integer matrix).
const DMAX_CEILING: u64 = 12;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e);
            match e {
                Error::Resource(_) => ExitCode::from(3),
                Error::Internal(_) => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Block(args) => {
            let d = args.d;
            let epsilon = args.epsilon.unwrap_or(d);
            if epsilon == 0 || d % epsilon != 0 {
                return Err(Error::Domain(format!(
                    "epsilon = {} must divide d = {}",
                    epsilon, d
                )));
            }
            let dims = vec![d / epsilon; epsilon as usize];
            let block = enumerate_block(epsilon, &dims)?;
            println!("{}", serde_json::to_string_pretty(&block)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Scan(args) => {
            if args.dmax > DMAX_CEILING {
                return Err(Error::Resource(format!(
                    "dmax = {} exceeds the ceiling {}",
                    args.dmax, DMAX_CEILING
                )));
            }
            let mut reports = Vec::new();
            for d in 1..=args.dmax {
                reports.push(scan_block(d, args.source.into())?);
            }
            let all = reports.iter().all(|r| r.all_effective);
            match args.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&reports)?),
                Format::Csv => {
                    println!("d,epsilon,id,effective,sign");
                    for r in &reports {
                        for s in &r.simples {
                            println!(
                                "{},{},{},{},{}",
                                r.d,
                                r.epsilon,
                                csv_quote(&s.id),
                                s.effective,
                                s.sign
                            );
                        }
                    }
                }
            }
            if all {
                Ok(ExitCode::SUCCESS)
            } else {
                // For these blocks uniform effectivity is a theorem, so a
                // counterexample is an invariant violation.
                eprintln!("error: scan found a non-effective simple");
                Ok(ExitCode::from(1))
            }
        }
        Command::Decomp(args) => {
            let matrix = match args.source.into() {
                MatrixSource::ClosedForm => closed_form_matrix(args.d)?,
                MatrixSource::KlComputed => lj_core::bridge::kl_decomposition_matrix(args.d)?,
            };
            let printed: DecompositionMatrix = if args.inverse {
                let inv = invert_unitriangular(&matrix)?;
                DecompositionMatrix::new(matrix.basis.clone(), inv)?
            } else {
                matrix
            };
            match args.format {
                Format::Csv => print!("{}", printed.to_csv()),
                Format::Json => {
                    let ids: Vec<String> =
                        printed.basis.entries().iter().map(|ms| ms.id()).collect();
                    let body = serde_json::json!({
                        "d": args.d,
                        "ids": ids,
                        "entries": printed.entries(),
                    });
                    println!("{}", serde_json::to_string_pretty(&body)?);
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Kl(args) => {
            let u = parse_window(&args.u)?;
            let w = parse_window(&args.w)?;
            if u.len() != args.d || w.len() != args.d {
                return Err(Error::Domain(format!(
                    "windows must have length d = {}",
                    args.d
                )));
            }
            let u = lj_core::affine::AffinePermutation::new(u)?;
            let w = lj_core::affine::AffinePermutation::new(w)?;
            let ctx = KlContext::with_max_length(args.d, args.max_length);
            if let Some(path) = &args.cache {
                ctx.load_cache(path)?;
            }
            let p = ctx.kl_polynomial(&u, &w)?;
            if let Some(path) = &args.cache {
                ctx.save_cache(path)?;
            }
            println!("{}", serde_json::to_string(&p.coeffs().to_vec())?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Brauer(BrauerCommand::Trace(args)) => {
            let text = std::fs::read_to_string(&args.matrix)?;
            let input: MatrixInput =
                serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
            let field = Field::new(input.l, input.modulus)?;
            if field.m != input.m {
                return Err(Error::Parse(format!(
                    "modulus degree {} does not match m = {}",
                    field.m, input.m
                )));
            }
            let rho = FieldMatrix::from_rows(field.clone(), input.rows)?;
            if !rho.is_square() {
                return Err(Error::Domain("matrix must be square".into()));
            }
            let ident = RootIdentification::new(field.clone());
            let trace = brauer_trace(&rho, &ident)?;
            let reduced = reduce_mod_l(&trace, &ident)?;
            let body = serde_json::json!({
                "conductor": trace.conductor(),
                "coeffs": trace.coeffs(),
                "generator": ident.generator(),
                "reduction_mod_l": reduced,
            });
            println!("{}", serde_json::to_string_pretty(&body)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Arith(ArithCommand::Ainv(args)) => {
            let value = a_invariant(args.d, args.t, args.q)?;
            println!("{}", value);
            Ok(ExitCode::SUCCESS)
        }
        Command::Arith(ArithCommand::Screen(args)) => {
            let kind: ScreenKind = args.kind.parse()?;
            let block = BlockParams::new(args.d, args.q, args.l)?;
            let verdict = effectivity_screen(&block, kind);
            println!("epsilon={} verdict={}", block.epsilon, verdict);
            Ok(ExitCode::SUCCESS)
        }
        Command::Poset(args) => {
            let dims = parse_dims(&args.dims)?;
            let poset = orbit_poset(args.e, &dims)?;
            if args.dot {
                print!("{}", poset.to_dot());
            } else {
                println!("{}", serde_json::to_string_pretty(&poset.to_json())?);
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

#[derive(Deserialize)]
struct MatrixInput {
    l: u64,
    m: usize,
    modulus: Vec<u64>,
    rows: Vec<Vec<Vec<u64>>>,
}

fn parse_window(s: &str) -> Result<Vec<i64>, Error> {
    s.split(',')
        .map(|part| {
            part.trim()
                .parse::<i64>()
                .map_err(|_| Error::Parse(format!("bad window entry '{}'", part)))
        })
        .collect()
}

fn parse_dims(s: &str) -> Result<Vec<u64>, Error> {
    s.split(',')
        .map(|part| {
            part.trim()
                .parse::<u64>()
                .map_err(|_| Error::Parse(format!("bad dimension entry '{}'", part)))
        })
        .collect()
}

fn csv_quote(field: &str) -> String {
    if field.contains(',') || field.contains('"') || field.contains('\n') {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}
