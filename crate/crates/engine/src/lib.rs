//! A simulated MapReduce/MPC cluster.
//!
//! Machines hold resident state and exchange word-sized messages in
//! synchronous rounds. Every round is accounted: words received, sent and
//! the peak resident footprint per machine, checked against a hard budget.
//! Machine steps see only their own state, their inbox (ordered by sender
//! and key) and an rng derived from `(seed, round, machine)`, so runs are
//! reproducible under any scheduling.

pub mod cluster;
pub mod config;
pub mod error;
pub mod retry;
pub mod trace;
pub mod tree;
pub mod words;

pub use cluster::{machine_seed, Cluster, Ctx, Envelope, Mailbox};
pub use config::{ceil_pow, density_exponent, ClusterConfig, ClusterParams, Scale};
pub use error::EngineError;
pub use retry::{run_with_retries, AttemptError, RetryError};
pub use trace::{AttemptRecord, RoundRecord, Trace, TraceLevel};
pub use tree::{ceil_log, Tree};
pub use words::{bitset_words, Words};
