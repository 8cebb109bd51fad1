//! `archruns`: batch CLI over the arch-process run machinery.
//!
//! Exit status: 0 success, 1 usage error, 2 domain error (invalid shape,
//! unsupported operation, out-of-range rank, malformed run), 3 verification
//! failure (selftest found a hard-invariant breach).
//!
//! stdout carries data, stderr carries diagnostics. Counts and ranks are
//! read and written as decimal strings end to end, so no precision is ever
//! silently lost. The environment variable `ARCHRUNS_CACHE` supplies a
//! default `--cache` path.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;

use archruns::cache::{load_count_table, save_count_table};
use archruns::closed_form::closed_form_report;
use archruns::counting::{build_position_table, lower_bound, upper_bound, CountTable};
use archruns::series::report::verify_series;
use archruns::text::{parse_run_text, run_to_json, RunDoc};
use archruns::{
    build_count_table, enumerate_runs, rank, sample, sample_probability, unrank, visited_cells,
    ChaChaSource, Error, Run, Shape,
};

#[derive(Parser)]
#[command(
    name = "archruns",
    about = "Count, sample, rank, unrank and verify runs of (n,k)-arch processes",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Args)]
struct ShapeArgs {
    /// Trunk-gap parameter of the process
    #[arg(long)]
    n: u32,
    /// Number of arches
    #[arg(long)]
    k: u32,
}

#[derive(Args)]
struct CommonArgs {
    /// Output format
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Count-table cache file (defaults to $ARCHRUNS_CACHE)
    #[arg(long)]
    cache: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Exact number of runs of the (n,k)-arch process
    Count {
        #[command(flatten)]
        shape: ShapeArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Factorial lower and upper bounds on the number of runs (k <= n)
    Bounds {
        #[command(flatten)]
        shape: ShapeArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// All runs, one per line, in deterministic lexicographic order
    Enumerate {
        #[command(flatten)]
        shape: ShapeArgs,
        /// Abort if the process has more runs than this
        #[arg(long, default_value_t = 1_000_000)]
        cap: u64,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Uniform random runs (k <= n)
    Sample {
        #[command(flatten)]
        shape: ShapeArgs,
        /// RNG seed; same seed, same output
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of runs to draw
        #[arg(long, default_value_t = 1)]
        count: u64,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// The run with a given rank in the position-major total order
    Unrank {
        #[command(flatten)]
        shape: ShapeArgs,
        /// Rank, a decimal integer in [0, t(n,k))
        #[arg(long)]
        rank: String,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// The rank of a run (tokens as trailing arguments or one quoted string)
    Rank {
        #[command(flatten)]
        shape: ShapeArgs,
        #[command(flatten)]
        common: CommonArgs,
        /// Run tokens, e.g. a1 b1 c1
        #[arg(required = true)]
        run: Vec<String>,
    },
    /// Exact probability that `sample` outputs the given run
    Prob {
        #[command(flatten)]
        shape: ShapeArgs,
        #[command(flatten)]
        common: CommonArgs,
        /// Run tokens, e.g. a1 b1 c1
        #[arg(required = true)]
        run: Vec<String>,
    },
    /// Exact power-series verification of the generating-function equations
    VerifySeries {
        /// Bivariate truncation order
        #[arg(long, default_value_t = 12)]
        order: usize,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Closed-form vs recurrence crosscheck report
    CrosscheckClosedForm {
        /// Largest trunk-gap parameter
        #[arg(long, default_value_t = 8)]
        n: u32,
        /// Largest arch count
        #[arg(long, default_value_t = 6)]
        k: u32,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// CSV of the distinct (k,n) table cells touched while sampling
    Scatter {
        #[command(flatten)]
        shape: ShapeArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        count: u64,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run the acceptance checks and print a pass/fail table
    Selftest {
        /// Restrict to oracle sizes of at most 10^4 runs
        #[arg(long)]
        quick: bool,
    },
}

fn main() -> ExitCode {
    // behave like cat when the consumer closes the pipe early
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn default_cache(flag: Option<PathBuf>) -> Option<PathBuf> {
    flag.or_else(|| std::env::var_os("ARCHRUNS_CACHE").map(PathBuf::from))
}

/// Builds or loads the count table; a corrupt cache is reported on stderr
/// and recomputed, never trusted.
fn get_table(n: u32, k: u32, cache: Option<PathBuf>) -> Result<CountTable, Error> {
    let cache = default_cache(cache);
    if let Some(path) = &cache {
        match load_count_table(path, n, k) {
            Ok(Some(table)) => return Ok(table),
            Ok(None) => {}
            Err(e) => eprintln!("warning: {e}; recomputing"),
        }
    }
    let table = build_count_table(n, k)?;
    if let Some(path) = &cache {
        if let Err(e) = save_count_table(path, &table) {
            eprintln!("warning: could not write cache {}: {e}", path.display());
        }
    }
    Ok(table)
}

fn parse_run_args(tokens: &[String]) -> Result<Run, Error> {
    parse_run_text(&tokens.join(" "))
}

fn reject_csv(format: Format, what: &str) -> Result<(), ExitCode> {
    if format == Format::Csv {
        eprintln!("error: {what} has no csv form");
        return Err(ExitCode::from(1));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.cmd {
        Cmd::Count { shape, common } => {
            if let Err(code) = reject_csv(common.format, "count") {
                return Ok(code);
            }
            let table = get_table(shape.n, shape.k, common.cache)?;
            match common.format {
                Format::Json => println!(
                    "{}",
                    serde_json::json!({"n": shape.n, "k": shape.k, "count": table.total().to_string()})
                ),
                _ => println!("{}", table.total()),
            }
        }
        Cmd::Bounds { shape, common } => {
            if let Err(code) = reject_csv(common.format, "bounds") {
                return Ok(code);
            }
            let lo = lower_bound(shape.n, shape.k)?;
            let hi = upper_bound(shape.n, shape.k)?;
            match common.format {
                Format::Json => println!(
                    "{}",
                    serde_json::json!({"n": shape.n, "k": shape.k, "lower": lo.to_string(), "upper": hi.to_string()})
                ),
                _ => println!("{lo} {hi}"),
            }
        }
        Cmd::Enumerate { shape, cap, common } => {
            if let Err(code) = reject_csv(common.format, "enumerate") {
                return Ok(code);
            }
            let s = Shape::new(shape.n, shape.k)?;
            let runs = enumerate_runs(s, cap)?;
            match common.format {
                Format::Json => {
                    let docs: Vec<RunDoc> = runs.iter().map(|r| RunDoc::new(s, r)).collect();
                    println!("{}", serde_json::to_string(&docs).expect("serializable"));
                }
                _ => {
                    for r in &runs {
                        println!("{r}");
                    }
                }
            }
        }
        Cmd::Sample {
            shape,
            seed,
            count,
            common,
        } => {
            if let Err(code) = reject_csv(common.format, "sample") {
                return Ok(code);
            }
            let s = Shape::new(shape.n, shape.k)?;
            let table = get_table(shape.n, shape.k, common.cache)?;
            let mut out = Vec::with_capacity(count as usize);
            // sample i comes from ChaCha sub-stream i of `seed`, so the
            // output is a pure function of (seed, count) regardless of
            // any future fan-out across workers
            for i in 0..count {
                let mut rng = ChaChaSource::substream(seed, i);
                out.push(sample(&table, s, &mut rng)?);
            }
            match common.format {
                Format::Json => {
                    let docs: Vec<RunDoc> = out.iter().map(|r| RunDoc::new(s, r)).collect();
                    println!("{}", serde_json::to_string(&docs).expect("serializable"));
                }
                _ => {
                    for r in &out {
                        println!("{r}");
                    }
                }
            }
        }
        Cmd::Unrank {
            shape,
            rank: rank_str,
            common,
        } => {
            if let Err(code) = reject_csv(common.format, "unrank") {
                return Ok(code);
            }
            let s = Shape::new(shape.n, shape.k)?;
            let r: BigUint = rank_str.parse().map_err(|_| {
                Error::Parse(format!("rank must be a decimal integer, got {rank_str:?}"))
            })?;
            let table = get_table(shape.n, shape.k, common.cache)?;
            let ptable = build_position_table(shape.n, shape.k)?;
            let run = unrank(&ptable, &table, s, &r)?;
            match common.format {
                Format::Json => println!("{}", run_to_json(s, &run)),
                _ => println!("{run}"),
            }
        }
        Cmd::Rank { shape, common, run } => {
            if let Err(code) = reject_csv(common.format, "rank") {
                return Ok(code);
            }
            let s = Shape::new(shape.n, shape.k)?;
            let run = parse_run_args(&run)?;
            let table = get_table(shape.n, shape.k, common.cache)?;
            let ptable = build_position_table(shape.n, shape.k)?;
            let r = rank(&ptable, &table, s, &run)?;
            match common.format {
                Format::Json => println!("{}", serde_json::json!({"rank": r.to_string()})),
                _ => println!("{r}"),
            }
        }
        Cmd::Prob { shape, common, run } => {
            if let Err(code) = reject_csv(common.format, "prob") {
                return Ok(code);
            }
            let s = Shape::new(shape.n, shape.k)?;
            let run = parse_run_args(&run)?;
            let table = get_table(shape.n, shape.k, common.cache)?;
            let p = sample_probability(&table, s, &run)?;
            match common.format {
                Format::Json => println!("{}", serde_json::json!({"probability": p.to_string()})),
                _ => println!("{p}"),
            }
        }
        Cmd::VerifySeries { order, common } => {
            if let Err(code) = reject_csv(common.format, "verify-series") {
                return Ok(code);
            }
            let report = verify_series(order);
            match common.format {
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&report).expect("serializable")
                ),
                _ => print!("{report}"),
            }
            if !report.pde.clean || !report.bivariate_cubic_ok() {
                eprintln!("verification failure: a hard series invariant does not hold");
                return Ok(ExitCode::from(3));
            }
        }
        Cmd::CrosscheckClosedForm { n, k, common } => {
            if let Err(code) = reject_csv(common.format, "crosscheck-closed-form") {
                return Ok(code);
            }
            let report = closed_form_report(n, k);
            match common.format {
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&report).expect("serializable")
                ),
                _ => print!("{report}"),
            }
        }
        Cmd::Scatter {
            shape,
            seed,
            count,
            common,
        } => {
            let s = Shape::new(shape.n, shape.k)?;
            let table = get_table(shape.n, shape.k, common.cache)?;
            let mut rng = ChaChaSource::from_seed_u64(seed);
            let cells = visited_cells(&table, s, &mut rng, count)?;
            // CSV is the native format here: `k,n` per line
            for (kp, np) in cells {
                println!("{kp},{np}");
            }
        }
        Cmd::Selftest { quick } => {
            let results = archruns::selftest::run_all(quick);
            let mut failed = 0;
            for r in &results {
                println!(
                    "{} {:<28} {}",
                    if r.passed { "PASS" } else { "FAIL" },
                    r.name,
                    r.detail
                );
                if !r.passed {
                    failed += 1;
                }
            }
            if failed > 0 {
                eprintln!("{failed} check(s) failed");
                return Ok(ExitCode::from(3));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
