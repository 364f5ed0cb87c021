use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{longest_path_or_cycle, se_class_check, Graph, SeReport, DP_CAP};
use crate::numeric::binomial_stderr;
use crate::packing::maximum_matching;
use crate::rng::trial_rng;
use crate::spectral::RateMatrix;
use crate::sprinkle::instance::{sample_xp_mask, SprinkleInstance};

/// Parameters of the sparse-expander check run before boosting.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeRequirement {
    pub k: usize,
    pub beta: f64,
    pub theta: f64,
    pub max_tail_fraction: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoostParams {
    /// `i` in `{1, 2}`: matching number or longest path/cycle.
    pub i: usize,
    /// `p(u, v) = scale * R(u, v)` off `G`.
    pub scale: f64,
    pub trials: u64,
    pub seed: u64,
    pub require_se: Option<SeRequirement>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct BoostTrial {
    pub trial: u64,
    pub added: usize,
    pub value: usize,
    pub improved: bool,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct BoostReport {
    pub base_value: usize,
    pub improved: u64,
    pub trials: u64,
    pub fraction: f64,
    pub stderr: f64,
    pub se: Option<SeReport>,
    pub records: Vec<BoostTrial>,
}

/// `s_1` by blossom matching, `s_2` by the exact longest path/cycle program.
pub fn s_i(g: &Graph, i: usize) -> Result<usize> {
    match i {
        1 => Ok(maximum_matching(g).len()),
        2 => Ok(longest_path_or_cycle(g)?.edge_count()),
        _ => Err(Error::InvalidArgument(format!("i must be 1 or 2, got {i}"))),
    }
}

/// Fraction of sprinkles `G^p = G ∪ X_p` with `s_i(G^p) > s_i(G)`.
pub fn boost_experiment(g: &Graph, r: &RateMatrix, params: &BoostParams) -> Result<BoostReport> {
    let n = g.n();
    let i = params.i;
    if !(1..=2).contains(&i) {
        return Err(Error::InvalidArgument(format!("i must be 1 or 2, got {i}")));
    }
    if i == 2 && n > DP_CAP {
        return Err(Error::TooLarge { n, cap: DP_CAP });
    }
    if r.n() != n {
        return Err(Error::InvalidArgument("rate matrix and graph sizes differ".into()));
    }
    if !(params.scale >= 0.0 && params.scale.is_finite()) {
        return Err(Error::InvalidArgument(format!("bad scale {}", params.scale)));
    }
    let base = s_i(g, i)?;
    if base >= i * n / 2 {
        return Err(Error::Precondition(format!("s_{i}(G) = {base} is already maximal")));
    }
    let se = match params.require_se {
        Some(req) => {
            let rep = se_class_check(g, r, req.k, req.beta, req.theta, req.max_tail_fraction);
            if !rep.pass {
                return Err(Error::Precondition(format!("G fails the SE_{i} check")));
            }
            Some(rep)
        }
        None => None,
    };
    let inst = SprinkleInstance::non_edges(g, |u, v| params.scale * r.get(u, v))?;
    let records: Vec<BoostTrial> = (0..params.trials)
        .into_par_iter()
        .map(|t| {
            let mask = sample_xp_mask(&inst, &mut trial_rng(params.seed, t));
            let mut h = g.clone();
            let mut added = 0;
            for (x, &on) in mask.iter().enumerate() {
                if on {
                    let (u, v) = inst.pair(x).expect("pair instance");
                    h.add_edge(u, v);
                    added += 1;
                }
            }
            let value = s_i(&h, i).expect("size checked");
            BoostTrial {
                trial: t,
                added,
                value,
                improved: value > base,
            }
        })
        .collect();
    let improved = records.iter().filter(|t| t.improved).count() as u64;
    Ok(BoostReport {
        base_value: base,
        improved,
        trials: params.trials,
        fraction: if params.trials == 0 { 0.0 } else { improved as f64 / params.trials as f64 },
        stderr: binomial_stderr(improved, params.trials),
        se,
        records,
    })
}
