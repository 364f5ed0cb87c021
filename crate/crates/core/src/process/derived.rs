use std::collections::BTreeMap;

use super::{ClockAssignment, DirectedClockAssignment};
use crate::graph::{Edge, Graph};

/// Snapshot `G_{n,R}(t)`.
pub fn graph_at(clocks: &ClockAssignment, t: f64) -> Graph {
    clocks.graph_of_prefix(clocks.count_until(t))
}

/// Index (in arrival order) of the arrival completing minimum degree `k`.
pub fn hitting_index(clocks: &ClockAssignment, k: usize) -> Option<usize> {
    if k == 0 {
        return None;
    }
    let mut worst = 0usize;
    for u in 0..clocks.n() {
        let &i = clocks.incident(u).get(k - 1)?;
        worst = worst.max(i as usize);
    }
    Some(worst)
}

/// `τ_k`, or infinity when some vertex has fewer than `k` finite clocks.
pub fn hitting_time(clocks: &ClockAssignment, k: usize) -> f64 {
    if k == 0 {
        return 0.0;
    }
    hitting_index(clocks, k).map_or(f64::INFINITY, |i| clocks.arrivals()[i].time)
}

/// Vertices with fewer than `k` finite clocks.
pub fn deficient_vertices(clocks: &ClockAssignment, k: usize) -> Vec<usize> {
    (0..clocks.n()).filter(|&u| clocks.incident(u).len() < k).collect()
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct HittingTimes {
    pub tau_k: BTreeMap<usize, f64>,
    /// `T_D(u)` for each requested `D`, indexed by vertex.
    pub per_vertex_td: BTreeMap<usize, Vec<f64>>,
}

pub fn hitting_times(clocks: &ClockAssignment, ks: &[usize], ds: &[usize]) -> HittingTimes {
    HittingTimes {
        tau_k: ks.iter().map(|&k| (k, hitting_time(clocks, k))).collect(),
        per_vertex_td: ds
            .iter()
            .map(|&d| (d, (0..clocks.n()).map(|u| clocks.t_d(u, d)).collect()))
            .collect(),
    }
}

/// `H`: arrivals up to `tau` that are among the first `D` at one endpoint.
pub fn build_h(clocks: &ClockAssignment, d: usize, tau: f64) -> Graph {
    let limit = clocks.count_until(tau);
    let mut keep: Vec<u32> = Vec::new();
    for u in 0..clocks.n() {
        keep.extend(clocks.incident(u).iter().take(d).filter(|&&i| (i as usize) < limit));
    }
    keep.sort_unstable();
    keep.dedup();
    let arr = clocks.arrivals();
    Graph::from_edges(clocks.n(), keep.iter().map(|&i| (arr[i as usize].u, arr[i as usize].v))).expect("valid")
}

/// `S(t)`: vertices of degree less than `D` at time `t`.
pub fn small_vertex_set(clocks: &ClockAssignment, t: f64, d: usize) -> Vec<usize> {
    (0..clocks.n()).filter(|&u| clocks.degree_at(u, t) < d).collect()
}

/// `G*`: arrivals up to `t1`, plus arrivals up to `tau_k` touching `S(t0)`.
pub fn g_star(clocks: &ClockAssignment, d: usize, t0: f64, t1: f64, tau_k: f64) -> Graph {
    let mut small = vec![false; clocks.n()];
    for u in small_vertex_set(clocks, t0, d) {
        small[u] = true;
    }
    let edges = clocks
        .arrivals()
        .iter()
        .filter(|a| a.time <= t1 || (a.time <= tau_k && (small[a.u] || small[a.v])))
        .map(|a| (a.u, a.v));
    Graph::from_edges(clocks.n(), edges).expect("valid")
}

/// Whether `H` built from `E = min(X(u,v), X(v,u))` lies inside `H^+_D ∪ H^-_D`.
pub fn coupling_check(directed: &DirectedClockAssignment, d: usize, tau_k: f64) -> bool {
    coupling_violations(directed, d, tau_k).is_empty()
}

/// Edges of `H` missing from `H^+_D ∪ H^-_D`.
pub fn coupling_violations(directed: &DirectedClockAssignment, d: usize, tau_k: f64) -> Vec<Edge> {
    let clocks = directed.undirected();
    let h = build_h(&clocks, d, tau_k);
    let union = directed.out_in_union(d);
    h.edges().into_iter().filter(|e| union.binary_search(e).is_err()).collect()
}
