use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numeric::binomial_stderr;
use crate::rng::trial_rng;
use crate::walks::spec::{AlternatingWalkSpec, PROPAGATION_CAP};

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Estimate {
    pub value: f64,
    pub stderr: f64,
    pub trials: u64,
}

/// Rejects starting laws with some `pi_0(v) > c / n`.
pub fn check_near_uniform(spec: &AlternatingWalkSpec, c: f64) -> Result<()> {
    let n = spec.n() as f64;
    match spec.start().iter().enumerate().find(|&(_, &p)| p > c / n * (1.0 + 1e-12)) {
        Some((v, p)) => Err(Error::Precondition(format!("start mass {p} at {v} exceeds {c}/n"))),
        None => Ok(()),
    }
}

fn membership(n: usize, set: &[usize]) -> Result<Vec<bool>> {
    let mut m = vec![false; n];
    for &v in set {
        if v >= n {
            return Err(Error::InvalidArgument(format!("vertex {v} out of range")));
        }
        m[v] = true;
    }
    Ok(m)
}

/// Monte Carlo estimate of `pi(tau(S) <= horizon)`, where `tau(S)` is the
/// first index with `w_i` in `S`. The start law must satisfy
/// `pi_0(v) <= c / n`.
pub fn hitting_probability(
    spec: &AlternatingWalkSpec,
    set: &[usize],
    horizon: usize,
    trials: u64,
    c: f64,
    seed: u64,
) -> Result<Estimate> {
    check_near_uniform(spec, c)?;
    let in_s = membership(spec.n(), set)?;
    if set.is_empty() {
        return Ok(Estimate { value: 0.0, stderr: 0.0, trials });
    }
    let sampler = spec.sampler();
    let hits: u64 = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t);
            let mut cur = sampler.sample_start(&mut rng);
            if in_s[cur] {
                return 1;
            }
            for i in 1..=horizon {
                cur = sampler.step(i, cur, &mut rng);
                if in_s[cur] {
                    return 1;
                }
            }
            0
        })
        .sum();
    Ok(Estimate {
        value: if trials == 0 { 0.0 } else { hits as f64 / trials as f64 },
        stderr: binomial_stderr(hits, trials),
        trials,
    })
}

/// `pi(tau(S) <= horizon)` by propagation with absorption in `S`.
pub fn exact_hitting_probability(spec: &AlternatingWalkSpec, set: &[usize], horizon: usize) -> Result<f64> {
    let n = spec.n();
    if n > PROPAGATION_CAP {
        return Err(Error::TooLarge { n, cap: PROPAGATION_CAP });
    }
    let in_s = membership(n, set)?;
    let mut absorbed = 0.0;
    let mut pi = spec.start().to_vec();
    for i in 0..=horizon {
        if i > 0 {
            pi = if i % 2 == 1 { spec.odd_step(&pi) } else { spec.even_step(&pi) };
        }
        for v in 0..n {
            if in_s[v] {
                absorbed += pi[v];
                pi[v] = 0.0;
            }
        }
    }
    Ok(absorbed.min(1.0))
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct SpreadReport {
    /// Largest `rho` with `|{u : h(u) >= rho / n}| >= rho n`.
    pub rho_hat: f64,
    pub u_set: Vec<usize>,
    /// Endpoint histogram `h(u)`; sums to the family probability.
    pub histogram: Vec<f64>,
}

/// `rho_hat = max_m min(m / n, n h_(m))` over the decreasing order of `h`.
pub fn spread_of(histogram: &[f64]) -> SpreadReport {
    let n = histogram.len();
    let mut sorted: Vec<f64> = histogram.to_vec();
    sorted.sort_unstable_by(|a, b| b.total_cmp(a));
    let nf = n as f64;
    let rho_hat = sorted
        .iter()
        .enumerate()
        .map(|(i, &p)| ((i + 1) as f64 / nf).min(nf * p))
        .fold(0.0, f64::max);
    let u_set = (0..n)
        .filter(|&u| rho_hat > 0.0 && histogram[u] >= rho_hat / nf)
        .collect();
    SpreadReport {
        rho_hat,
        u_set,
        histogram: histogram.to_vec(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpreadParams {
    /// `j`; walks have `2j` steps.
    pub half_length: usize,
    pub trials: u64,
    pub seed: u64,
    /// Rejects `j` below this, usually `mix(R)`.
    pub min_half_length: usize,
}

/// Empirical endpoint spread of the walks of length `2j` kept by `family`.
pub fn endpoint_spread(
    spec: &AlternatingWalkSpec,
    params: SpreadParams,
    family: impl Fn(&[usize]) -> bool + Sync,
) -> Result<SpreadReport> {
    if params.half_length < params.min_half_length {
        return Err(Error::Precondition(format!(
            "half length {} below the mixing length {}",
            params.half_length, params.min_half_length
        )));
    }
    let n = spec.n();
    let sampler = spec.sampler();
    let length = 2 * params.half_length;
    let counts = (0..params.trials)
        .into_par_iter()
        .fold(
            || vec![0u64; n],
            |mut acc, t| {
                let mut rng = trial_rng(params.seed, t);
                let w = sampler.simulate(length, &mut rng);
                if family(&w.vertices) {
                    acc[*w.vertices.last().expect("nonempty")] += 1;
                }
                acc
            },
        )
        .reduce(
            || vec![0u64; n],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );
    let total = params.trials.max(1) as f64;
    Ok(spread_of(&counts.iter().map(|&c| c as f64 / total).collect::<Vec<_>>()))
}
