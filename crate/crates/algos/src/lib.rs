//! Randomized local ratio and hungry-greedy algorithms running on the
//! simulated cluster of `lrmr-engine`.
//!
//! Every driver is generic over the weight scalar and returns an
//! [`Outcome`] holding the solution and the trace of the successful attempt.

pub mod colouring;
pub mod common;
pub mod error;
pub mod hungry_greedy;
pub mod parallel_set_cover;
pub mod rlr_matching;
pub mod rlr_set_cover;

pub use colouring::{colour_bound, edge_colouring, group_count, group_degree_bound, vertex_colouring, ColourOptions};
pub use common::{threshold, Outcome, Shards};
pub use error::AlgoError;
pub use hungry_greedy::{maximal_clique, mis_fast, mis_simple, relabel_active};
pub use parallel_set_cover::{approx_sc_ln_delta, potential_phi, preprocess_weights, Preprocessed};
pub use rlr_matching::{approx_b_matching, approx_max_matching};
pub use rlr_set_cover::{approx_sc_f, vertex_cover_2approx, ScOptions};

pub type Result<T> = std::result::Result<T, AlgoError>;
