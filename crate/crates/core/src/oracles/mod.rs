//! Single-machine reference algorithms.

pub mod brute_force;
pub mod colouring;
pub mod greedy;
pub mod local_ratio;

pub use brute_force::{max_weight_b_matching, max_weight_matching, min_set_cover, BRUTE_FORCE_CAP};
pub use colouring::{first_fit, greedy_vertex_colouring_seq, misra_gries_edge_colouring_seq, EdgeColourer};
pub use greedy::{eps_greedy_set_cover_seq, greedy_mis_seq};
pub use local_ratio::{
    lr_bmatching_seq, lr_matching_naive, lr_matching_seq, lr_set_cover_seq, BMatchingReduction, MatchingReduction,
    SetCoverReduction,
};
