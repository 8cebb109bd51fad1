//! Runs of `(n,k)`-arch processes.
//!
//! An arch process is a DAG made of a trunk `a1 … ak, x1 … x_{n-k},
//! c1 … ck` together with `k` arches `ai -> bi -> ci`; a *run* is a linear
//! extension of that DAG. This crate provides
//!
//! * the process model and a brute-force linear-extension oracle
//!   ([`model`], [`brute`]),
//! * exact run counting through a bivariate recurrence, position-refined
//!   counting, factorial bounds, a closed-form evaluator over `Q[sqrt(pi)]`
//!   and leading-order asymptotics ([`counting`], [`closed_form`],
//!   [`asympt`]),
//! * uniform random sampling, exact sampling probabilities, and the
//!   ranking/unranking bijection ([`engine`], [`random`]),
//! * exact truncated power-series verification of the generating-function
//!   identities satisfied by the counting sequence ([`series`]),
//! * an on-disk memo cache and small statistics helpers ([`cache`],
//!   [`stats`]), and a self-test suite ([`selftest`]).

pub mod asympt;
pub mod brute;
pub mod cache;
pub mod closed_form;
pub mod counting;
pub mod engine;
pub mod model;
pub mod random;
pub mod selftest;
pub mod series;
pub mod stats;
pub mod text;

pub use brute::{count_runs_brute, enumerate_runs};
pub use counting::{build_count_table, build_position_table, CountTable, PositionTable};
pub use engine::{rank, sample, sample_probability, unrank, visited_cells};
pub use model::{action_set, precedence_pairs, validate_run, Action, Run, Shape};
pub use random::{ChaChaSource, RandomSource};

/// Errors shared across the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid shape: n={n}, k={k} requires k <= n+1")]
    InvalidShape { n: u32, k: u32 },
    #[error("{0}")]
    Domain(String),
    #[error("enumeration exceeded the cap of {cap} runs")]
    CapExceeded { cap: u64 },
    #[error("cell ({n},{k}) is outside the table built for ({base_n},{base_k})")]
    MissingCell {
        n: u32,
        k: u32,
        base_n: u32,
        base_k: u32,
    },
    #[error("rank {rank} is out of range: the process has {total} runs")]
    RankOutOfRange { rank: String, total: String },
    #[error("sampling and unranking cover k <= n only (got n={n}, k={k})")]
    UnsupportedShape { n: u32, k: u32 },
    #[error("invalid run: {0}")]
    InvalidRun(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("cache rejected: {0}")]
    CacheInvalid(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
