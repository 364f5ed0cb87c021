use crate::graph::{is_certificate_for_a_k, Component, Graph, KGraph};
use crate::packing::hamilton::{posa_hamilton_search_with, HamiltonOutcome, SearchParams};
use crate::packing::matching::maximum_matching;
use crate::rng::{trial_rng, Rng};

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct PackFailure {
    /// 0-based index of the failing stage; stage `k/2` is the matching.
    pub stage: usize,
    /// True when the failure proves `G` lacks `A_k`.
    pub certified: bool,
    pub reason: String,
    pub attempts: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PackParams {
    pub search: SearchParams,
    /// Greedy attempts with fresh streams before giving up.
    pub attempts: usize,
}

impl Default for PackParams {
    fn default() -> Self {
        Self {
            search: SearchParams::default(),
            attempts: 8,
        }
    }
}

/// Greedy `A_k` certificate: `k/2` edge-disjoint Hamilton cycles, then a
/// matching of size `n/2` if `k` is odd. Any returned packing has been
/// validated with [`is_certificate_for_a_k`].
pub fn pack_a_k(g: &Graph, k: usize, params: &PackParams, seed: u64) -> Result<KGraph, PackFailure> {
    assert!(k >= 1, "k must be positive");
    let n = g.n();
    let fail = |stage, certified, reason: String, attempts| PackFailure {
        stage,
        certified,
        reason,
        attempts,
    };
    // Every vertex needs degree k in any A_k witness.
    let low_degree = n > 0 && g.min_degree() < k;
    let mut last = None;
    for attempt in 0..params.attempts.max(1) {
        let mut rng = trial_rng(seed, attempt as u64);
        match pack_once(g, k, params, &mut rng) {
            Ok(f) => {
                let check = is_certificate_for_a_k(g, &f, k);
                assert!(check.accepted, "greedy packing produced an invalid certificate: {:?}", check.violations);
                return Ok(f);
            }
            Err((stage, certified, reason)) => {
                if certified || low_degree {
                    return Err(fail(stage, true, reason, attempt + 1));
                }
                last = Some((stage, reason));
            }
        }
    }
    let (stage, reason) = last.expect("at least one attempt");
    Err(fail(stage, false, reason, params.attempts.max(1)))
}

fn pack_once(g: &Graph, k: usize, params: &PackParams, rng: &mut Rng) -> Result<KGraph, (usize, bool, String)> {
    let n = g.n();
    let mut rest = g.clone();
    let mut cycles = Vec::with_capacity(k / 2);
    for stage in 0..k / 2 {
        let res = posa_hamilton_search_with(&rest, params.search, rng);
        match res.outcome {
            HamiltonOutcome::Cycle(c) => {
                for i in 0..n {
                    rest.remove_edge(c[i], c[(i + 1) % n]);
                }
                cycles.push(Component::Cycle(c));
            }
            // Only the first stage sees G itself; later stages depend on greedy choices.
            HamiltonOutcome::NoCycle { reason, .. } => {
                return Err((stage, stage == 0, format!("no Hamilton cycle: {reason:?}")));
            }
            HamiltonOutcome::Exhausted { best_path } => {
                return Err((stage, false, format!("search exhausted, best path {} vertices", best_path.len())));
            }
        }
    }
    let matching = if k % 2 == 1 {
        let m = maximum_matching(&rest);
        if m.len() < n / 2 {
            return Err((k / 2, k == 1, format!("maximum matching has {} < {} edges", m.len(), n / 2)));
        }
        Some(m)
    } else {
        None
    };
    Ok(KGraph::new(k, cycles, matching))
}
