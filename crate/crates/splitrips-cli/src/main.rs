//! `splitrips`: command-line front end.
//!
//! Every subcommand writes machine-readable output (JSON, or CSV for `bench`) to
//! stdout or `--out`; diagnostics go to stderr. Exit codes: `0` ok, `2` invalid
//! metric or unreadable input, `3` not circular decomposable, `4` method mismatch,
//! `5` capacity exceeded, `1` any other failure.

use clap::{Args, Parser, Subcommand};
use serde_json::{Value, json};
use splitrips::bench::{rows_to_csv, run_benchmark};
use splitrips::field::FieldTag;
use splitrips::io::{Format, NumericMode, parse_order, read_matrix};
use splitrips::number::{format_rational, parse_rational};
use splitrips::pipeline::{self, Engine, Method};
use splitrips::{DistanceMatrix, Error, Result};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "splitrips", version, about = "Vietoris-Rips homology through split decompositions")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Distance matrix file (CSV or JSON).
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Input format; guessed from the extension when omitted.
    #[arg(long, global = true)]
    format: Option<Format>,
    /// Read decimal entries exactly instead of snapping them to the 1e-9 grid.
    #[arg(long, global = true)]
    exact: bool,
    /// Coefficient field: q, f2 or fp:<p>.
    #[arg(long, global = true, default_value = "q")]
    field: FieldTag,
    /// Highest homology degree.
    #[arg(long, global = true, default_value_t = 2)]
    maxdim: usize,
    /// Worker threads.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Random seed.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// d-splits with isolation indices, split-prime residue and gluing tree.
    Decompose,
    /// Circular order, weights, sigma, M, M-bar and the monotone flag.
    Recognize {
        /// Cyclic order to use (1-based, comma separated) instead of searching.
        #[arg(long)]
        order: Option<String>,
    },
    /// Persistence barcode, or Betti numbers at one radius or across a sweep.
    Persistence {
        /// auto, oracle, circular, mv or block.
        #[arg(long, default_value = "auto")]
        method: Method,
        /// Check the result against the oracle.
        #[arg(long)]
        verify: bool,
        /// Betti numbers of the open complex at this radius.
        #[arg(long, conflicts_with = "sweep")]
        r: Option<String>,
        /// Betti numbers at every critical radius.
        #[arg(long)]
        sweep: bool,
    },
    /// Runtime of direct and block persistence on chained sphere samples (CSV).
    Bench {
        /// Block counts, as `1..6` or `1,2,4,6`.
        #[arg(long, default_value = "1..4")]
        blocks: String,
        /// Points per block.
        #[arg(long, default_value_t = 10)]
        points: usize,
        /// Homology degrees, as `2`, `1..2` or `1,2`.
        #[arg(long, default_value = "2")]
        dims: String,
    },
}

fn parse_list(text: &str) -> Result<Vec<usize>> {
    let bad = || Error::Parse(format!("expected `a..b` or a comma list, got `{text}`"));
    if let Some((a, b)) = text.split_once("..") {
        let a: usize = a.trim().parse().map_err(|_| bad())?;
        let b: usize = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
        return Ok((a..=b).collect());
    }
    text.split(',').map(|s| s.trim().parse().map_err(|_| bad())).collect()
}

fn load(g: &Global) -> Result<DistanceMatrix> {
    let path = g.input.as_ref().ok_or_else(|| Error::Parse("--input is required".into()))?;
    let mode = if g.exact { NumericMode::Exact } else { NumericMode::Float };
    read_matrix(path, g.format, mode)
}

fn persistence_cmd(g: &Global, method: Method, verify: bool, r: Option<&str>, sweep: bool) -> Result<Value> {
    let m = load(g)?;
    let engine = Engine::new(&m, method, g.field, g.maxdim)?;
    if verify {
        pipeline::verify(&engine, &m)?;
    }
    let mut out = if let Some(r) = r {
        serde_json::to_value(engine.betti(&parse_rational(r)?)?)?
    } else if sweep {
        let rows = pipeline::sweep_radii(&m)
            .iter()
            .map(|r| Ok(json!({"r": format_rational(r), "betti": engine.betti(r)?.betti})))
            .collect::<Result<Vec<_>>>()?;
        json!({"method": engine.method(), "field": g.field, "sweep": rows})
    } else {
        let mut v = json!({"method": engine.method(), "barcode": engine.persistence()?});
        if let Some(plan) = engine.plan() {
            v["part_sizes"] = json!(plan.part_sizes());
        }
        v
    };
    if verify {
        out["verified"] = json!(true);
    }
    Ok(out)
}

fn run(cli: &Cli) -> Result<String> {
    let g = &cli.global;
    if let Some(j) = g.jobs {
        pipeline::set_worker_threads(j)?;
    }
    let value = match &cli.command {
        Command::Decompose => pipeline::decompose_report(&load(g)?)?,
        Command::Recognize { order } => {
            let m = load(g)?;
            let order = order.as_deref().map(|o| parse_order(o, m.n())).transpose()?;
            pipeline::recognize_report(&m, order.as_deref())?
        }
        Command::Persistence { method, verify, r, sweep } => persistence_cmd(g, *method, *verify, r.as_deref(), *sweep)?,
        Command::Bench { blocks, points, dims } => {
            let rows = run_benchmark(&parse_list(blocks)?, *points, &parse_list(dims)?, g.seed, g.field)?;
            return rows_to_csv(&rows);
        }
    };
    Ok(serde_json::to_string_pretty(&value)? + "\n")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(text) => {
            let written = match &cli.global.out {
                Some(path) => std::fs::write(path, text).map_err(Error::from),
                None => {
                    print!("{text}");
                    Ok(())
                }
            };
            match written {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(e.exit_code() as u8)
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
