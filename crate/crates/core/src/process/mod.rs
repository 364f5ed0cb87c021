//! The exponential-clock process `G_{n,R}(t)`, hitting times, the truncated
//! subgraph `H`, the sets `S(t)` and `G*`, D-out sampling and its coupling,
//! and static `G_{n,P}` sampling.

mod clocks;
mod derived;
mod sampling;

pub use clocks::{
    sample_clocks, sample_clocks_with, sample_directed_clocks, Arrival, ClockAssignment, DirectedClockAssignment,
};
pub use derived::{
    build_h, coupling_check, coupling_violations, deficient_vertices, g_star, graph_at, hitting_index, hitting_time,
    hitting_times, small_vertex_set, HittingTimes,
};
pub use sampling::{
    sample_d_out, sample_out_neighbors, sample_static, sample_static_with, DOutGraph, ProbabilityMatrix,
};

/// Default truncation `D = max(k + 4, 8)`.
pub fn default_d(k: usize) -> usize {
    (k + 4).max(8)
}
