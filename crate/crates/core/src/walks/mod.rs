//! `(R, G)`-alternating random walks: exact propagation, simulation,
//! theta-truncation, `R_alt` weights and hitting and spread estimates.

mod family;
mod spec;
mod stats;

pub use family::{
    concat, enumerate_alternating_walks, is_alternating, is_non_lazy, is_non_repeating, is_strictly_alternating,
    odd_edges, r_alt, r_g, WalkFamily,
};
pub use spec::{
    distribution_to_string, point_start, propagate_exact, simulate, stationary_start, uniform_start, walk_to_string,
    AlternatingWalkSpec, Kernel, SimulatedWalk, WalkSampler, PROPAGATION_CAP,
};
pub use stats::{
    check_near_uniform, endpoint_spread, exact_hitting_probability, hitting_probability, spread_of, Estimate,
    SpreadParams, SpreadReport,
};
