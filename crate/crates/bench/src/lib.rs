//! Fixtures shared by the benchmarks.

use hitpack_core::experiments::{static_probabilities, target_degree};
use hitpack_core::process::sample_static;
use hitpack_core::{Graph, RateMatrix};

/// Constant-row rates with mean degree `ln n + (k - 1) ln ln n + c`.
pub fn threshold_rates(n: usize, k: usize, c: f64) -> RateMatrix {
    let d = target_degree(n, k, c);
    RateMatrix::complete(n, d / (n - 1) as f64).expect("valid rates")
}

/// A static sample with minimum degree at least `k`.
pub fn dense_enough(n: usize, k: usize, c: f64, seed: u64) -> Graph {
    let p = static_probabilities(&threshold_rates(n, k, c)).expect("valid probabilities");
    (seed..)
        .map(|s| sample_static(&p, s))
        .find(|g| g.min_degree() >= k)
        .expect("some sample qualifies")
}
