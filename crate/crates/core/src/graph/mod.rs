//! Graph snapshots, k-graphs and `A_k` certificates, exact oracles for small
//! graphs, and the expansion and light-tail checks.

mod exact;
mod expansion;
mod kgraph;
mod simple;

pub use exact::{
    exact_max_k_graph, exact_s_k, hamilton_cycle_dp, longest_path_or_cycle, max_matching_dp, DP_CAP, EXACT_SK_CAP,
};
pub use expansion::{
    expansion_check, expansion_check_exhaustive, expansion_check_sampled, heavy_vertices, light_tail_check,
    se_class_check, ExpansionMethod, ExpansionReport, LightTail, SeReport, EXHAUSTIVE_CAP,
};
pub use kgraph::{is_certificate_for_a_k, s_k_size, CertificateCheck, Component, KGraph, Violation};
pub use simple::{canon, Edge, Graph};
