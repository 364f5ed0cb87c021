use rand::seq::SliceRandom;
use rand::Rng as _;
use rand_distr::{Distribution, Exp1};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::experiments::config::ExperimentConfig;
use crate::experiments::hosts::HostFamily;
use crate::experiments::output::{Cell, Table};
use crate::graph::{exact_s_k, expansion_check_sampled, light_tail_check, Graph, EXACT_SK_CAP};
use crate::numeric::binomial_stderr;
use crate::packing::{enumerate_boosters, pack_a_k, BoosterKind, PackParams, AUGMENTING_CAP, PATH_CAP};
use crate::process::{
    build_h, coupling_violations, hitting_index, sample_clocks_with, sample_directed_clocks, sample_static_with,
    ProbabilityMatrix,
};
use crate::rng::{trial_rng, trial_seed};
use crate::spectral::{
    check_rm_membership_with, expander_mixing_residual, gamma_k_of_rows, mu_sigma, spectral_gap, transition_matrix,
    RateMatrix,
};
use crate::sprinkle::{s_i, sample_xp_mask, SprinkleInstance};

/// Targets outside this band get a warning: the estimate needs many more trials.
const EDGE_BAND: (f64, f64) = (0.05, 0.95);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    In,
    Not,
    Inconclusive,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::In => "in",
            Verdict::Not => "not",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// `A_k` membership decided by the exact oracle at `n <= 12`, else by the
/// greedy packer. Also returns whether a conclusive heuristic verdict
/// disagreed with the oracle.
pub fn ak_verdict(g: &Graph, k: usize, params: &PackParams, seed: u64) -> (Verdict, bool) {
    let heuristic = match pack_a_k(g, k, params, seed) {
        Ok(_) => Verdict::In,
        Err(f) if f.certified => Verdict::Not,
        Err(_) => Verdict::Inconclusive,
    };
    if g.n() > EXACT_SK_CAP {
        return (heuristic, false);
    }
    let full = k * g.n() / 2;
    let exact = match exact_s_k(g, k) {
        Ok(s) if s >= full => Verdict::In,
        Ok(_) => Verdict::Not,
        Err(_) => return (heuristic, false),
    };
    (exact, heuristic != Verdict::Inconclusive && heuristic != exact)
}

fn rates_for(cfg: &ExperimentConfig, n: usize, k: usize) -> Result<RateMatrix> {
    cfg.scaling.apply(&cfg.host.weights(n)?, k)
}

/// `P = min(R, 1)` entrywise.
pub fn static_probabilities(r: &RateMatrix) -> Result<ProbabilityMatrix> {
    ProbabilityMatrix::from_fn(r.n(), |u, v| r.get(u, v).min(1.0))
}

fn pack_params(cfg: &ExperimentConfig) -> PackParams {
    PackParams { search: cfg.search, attempts: cfg.attempts }
}

fn warn_edge(table: &mut Table, what: &str, n: usize, k: usize, target: f64) {
    if target < EDGE_BAND.0 || target > EDGE_BAND.1 {
        table.warn(format!("n={n} k={k}: {what} target {target:.4} is near 0 or 1; estimates need enlarged trial counts"));
    }
}

fn cases(cfg: &ExperimentConfig) -> Vec<(usize, usize)> {
    cfg.sizes.iter().flat_map(|&n| cfg.ks.iter().map(move |&k| (n, k))).collect()
}

/// Empirical `P(δ(G_{n,P}) ≥ k)` against `exp(-gamma_k(P))`.
pub fn cmd_threshold(cfg: &ExperimentConfig) -> Result<Table> {
    let mut table = Table::new(
        "threshold",
        cfg.header(),
        &["n", "k", "trials", "successes", "estimate", "stderr", "gamma_k", "target"],
    );
    for (row, (n, k)) in cases(cfg).into_iter().enumerate() {
        let p = static_probabilities(&rates_for(cfg, n, k)?)?;
        let gamma = gamma_k_of_rows(&p.row_sums(), k as u32);
        let target = (-gamma).exp();
        warn_edge(&mut table, "threshold", n, k, target);
        let master = trial_seed(cfg.seed, row as u64);
        let successes = (0..cfg.trials)
            .into_par_iter()
            .filter(|&t| sample_static_with(&p, &mut trial_rng(master, t)).min_degree() >= k)
            .count() as u64;
        table.push(vec![
            n.into(),
            k.into(),
            cfg.trials.into(),
            successes.into(),
            (successes as f64 / cfg.trials as f64).into(),
            binomial_stderr(successes, cfg.trials).into(),
            gamma.into(),
            target.into(),
        ]);
    }
    Ok(table)
}

#[derive(Debug, Clone, Copy, Default)]
struct Tally {
    yes: u64,
    no: u64,
    inconclusive: u64,
    mismatches: u64,
}

impl Tally {
    fn add(mut self, (v, mismatch): (Verdict, bool)) -> Self {
        match v {
            Verdict::In => self.yes += 1,
            Verdict::Not => self.no += 1,
            Verdict::Inconclusive => self.inconclusive += 1,
        }
        self.mismatches += mismatch as u64;
        self
    }

    fn conclusive(&self) -> u64 {
        self.yes + self.no
    }

    fn fraction(&self) -> f64 {
        match self.conclusive() {
            0 => f64::NAN,
            c => self.yes as f64 / c as f64,
        }
    }
}

/// Empirical `P(G_{n,P} ∈ A_k)` against `exp(-gamma_k(P))`.
pub fn cmd_akprob(cfg: &ExperimentConfig) -> Result<Table> {
    let mut table = Table::new(
        "akprob",
        cfg.header(),
        &[
            "n", "k", "trials", "in_ak", "not_ak", "inconclusive", "estimate", "stderr", "lower", "inconclusive_rate",
            "exact_mismatches", "gamma_k", "target",
        ],
    );
    let params = pack_params(cfg);
    for (row, (n, k)) in cases(cfg).into_iter().enumerate() {
        let p = static_probabilities(&rates_for(cfg, n, k)?)?;
        let gamma = gamma_k_of_rows(&p.row_sums(), k as u32);
        let target = (-gamma).exp();
        warn_edge(&mut table, "akprob", n, k, target);
        let master = trial_seed(cfg.seed, row as u64);
        let verdicts: Vec<(Verdict, bool)> = (0..cfg.trials)
            .into_par_iter()
            .map(|t| {
                let mut rng = trial_rng(master, t);
                let g = sample_static_with(&p, &mut rng);
                if g.min_degree() < k {
                    return (Verdict::Not, false);
                }
                ak_verdict(&g, k, &params, rng.random())
            })
            .collect();
        let tally = verdicts.into_iter().fold(Tally::default(), Tally::add);
        table.push(vec![
            n.into(),
            k.into(),
            cfg.trials.into(),
            tally.yes.into(),
            tally.no.into(),
            tally.inconclusive.into(),
            tally.fraction().into(),
            binomial_stderr(tally.yes, tally.conclusive().max(1)).into(),
            (tally.yes as f64 / cfg.trials as f64).into(),
            (tally.inconclusive as f64 / cfg.trials as f64).into(),
            tally.mismatches.into(),
            gamma.into(),
            target.into(),
        ]);
    }
    Ok(table)
}

/// Runs the process to `τ_k` and tests `A_k` on the graph at that instant.
pub fn cmd_hitting(cfg: &ExperimentConfig) -> Result<Table> {
    let mut table = Table::new(
        "hitting",
        cfg.header(),
        &[
            "n", "k", "trials", "success", "fail", "inconclusive", "unreached", "fraction", "stderr",
            "pre_violations", "exact_mismatches",
        ],
    );
    let params = pack_params(cfg);
    for (row, (n, k)) in cases(cfg).into_iter().enumerate() {
        let r = rates_for(cfg, n, k)?;
        let master = trial_seed(cfg.seed, row as u64);
        // (verdict or None when τ_k is infinite, mismatch, pre-hitting violation)
        let records: Vec<(Option<Verdict>, bool, bool)> = (0..cfg.trials)
            .into_par_iter()
            .map(|t| {
                let mut rng = trial_rng(master, t);
                let clocks = sample_clocks_with(&r, trial_seed(master, t), &mut rng);
                let Some(idx) = hitting_index(&clocks, k) else {
                    return (None, false, false);
                };
                let before = clocks.graph_of_prefix(idx);
                let g = clocks.graph_of_prefix(idx + 1);
                let (v, mismatch) = ak_verdict(&g, k, &params, rng.random());
                (Some(v), mismatch, before.min_degree() >= k || g.min_degree() < k)
            })
            .collect();
        let mut tally = Tally::default();
        let (mut unreached, mut pre) = (0u64, 0u64);
        for (v, mismatch, violation) in records {
            match v {
                Some(v) => tally = tally.add((v, mismatch)),
                None => unreached += 1,
            }
            pre += violation as u64;
        }
        table.push(vec![
            n.into(),
            k.into(),
            cfg.trials.into(),
            tally.yes.into(),
            tally.no.into(),
            tally.inconclusive.into(),
            unreached.into(),
            tally.fraction().into(),
            binomial_stderr(tally.yes, tally.conclusive().max(1)).into(),
            pre.into(),
            tally.mismatches.into(),
        ]);
    }
    Ok(table)
}

fn random_subset(n: usize, rng: &mut crate::rng::Rng) -> Vec<usize> {
    let size = rng.random_range(1..=n);
    let mut all: Vec<usize> = (0..n).collect();
    all.shuffle(rng);
    all.truncate(size);
    all.sort_unstable();
    all
}

/// Half point masses, half flat Dirichlet draws.
fn random_distribution(n: usize, index: u64, rng: &mut crate::rng::Rng) -> Vec<f64> {
    let mut pi = vec![0.0; n];
    if index.is_multiple_of(2) {
        pi[rng.random_range(0..n)] = 1.0;
        return pi;
    }
    for x in pi.iter_mut() {
        *x = Exp1.sample(rng);
    }
    let total: f64 = pi.iter().sum();
    pi.iter_mut().for_each(|x| *x /= total);
    pi
}

/// Spectral, RM, mixing, H-property and coupling checks on one host.
pub fn cmd_diagnostics(cfg: &ExperimentConfig) -> Result<Table> {
    let mut table = Table::new("diagnostics", cfg.header(), &["n", "check", "value", "bound", "pass"]);
    let k = cfg.ks[0];
    for (row, &n) in cfg.sizes.iter().enumerate() {
        let master = trial_seed(cfg.seed, row as u64);
        let r = rates_for(cfg, n, k)?;
        let mut push = |check: &str, value: Cell, bound: Cell, pass: bool| {
            table.push(vec![n.into(), check.into(), value, bound, pass.into()]);
        };
        let s = spectral_gap(&r)?;
        push("lambda", s.lambda.into(), 1.0.into(), s.lambda < 1.0);
        push("lambda_second", s.lambda_second.into(), Cell::Empty, true);
        push("lambda_smallest", s.lambda_smallest.into(), Cell::Empty, true);
        push("mix_length", s.mix_length.into(), Cell::Empty, s.mix_length.is_some());
        if let HostFamily::Paley { q } = cfg.host {
            // Eigenvalues of the Paley graph are (q-1)/2 and (-1 ± sqrt q)/2.
            let d = (q - 1) as f64 / 2.0;
            let mu = (1.0 + (q as f64).sqrt()) / 2.0;
            push("paley_mu", (s.lambda * d).into(), mu.into(), s.lambda * d <= mu + 1e-8);
        }
        if let Some(params) = cfg.rm {
            let rm = check_rm_membership_with(&r, params, &s);
            for (name, c) in [
                ("rm_lambda", rm.lambda_condition),
                ("rm_total_weight", rm.total_weight),
                ("rm_heavy_sets", rm.heavy_sets),
                ("rm_max_entry", rm.max_entry),
            ] {
                push(name, c.lhs.into(), c.rhs.into(), c.pass);
            }
        }

        let m = transition_matrix(&r)?;
        let lambda = s.lambda;
        let worst = (0..cfg.starts as u64)
            .into_par_iter()
            .map(|i| {
                let mut rng = trial_rng(master, i);
                let pi = random_distribution(n, i, &mut rng);
                let before = mu_sigma(&pi, &s.sigma)?;
                let after = mu_sigma(&m.left_apply(&pi), &s.sigma)?;
                Ok(after - lambda * before)
            })
            .collect::<Result<Vec<f64>>>()?;
        let excess = worst.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let violations = worst.iter().filter(|&&e| e > 1e-9).count();
        push("contraction_violations", violations.into(), 0usize.into(), violations == 0);
        push("contraction_max_excess", excess.into(), 1e-9.into(), excess <= 1e-9);

        let offset = cfg.starts as u64;
        let ratios = (0..cfg.pairs as u64)
            .into_par_iter()
            .map(|i| {
                let mut rng = trial_rng(master, offset + i);
                let a = random_subset(n, &mut rng);
                let b = random_subset(n, &mut rng);
                let res = expander_mixing_residual(&r, &m, lambda, &a, &b)?;
                Ok((res.residual, res.bound))
            })
            .collect::<Result<Vec<(f64, f64)>>>()?;
        let eml_violations = ratios.iter().filter(|(res, bound)| *res > bound + 1e-9).count();
        push("eml_violations", eml_violations.into(), 0usize.into(), eml_violations == 0);

        let d = cfg.d_for(k);
        let offset = offset + cfg.pairs as u64;
        let first = sample_directed_clocks(&r, trial_seed(master, offset));
        let clocks = first.undirected();
        match hitting_index(&clocks, k) {
            None => push("tau_k", f64::INFINITY.into(), Cell::Empty, false),
            Some(idx) => {
                let tau = clocks.arrivals()[idx].time;
                push("tau_k", tau.into(), Cell::Empty, true);
                let h = build_h(&clocks, d, tau);
                push("h_min_degree", h.min_degree().into(), k.into(), h.min_degree() >= k);
                let tail = light_tail_check(&h, &r, cfg.theta);
                push(
                    "light_tail",
                    tail.closed_fraction.into(),
                    cfg.max_tail_fraction.into(),
                    tail.closed_fraction <= cfg.max_tail_fraction,
                );
                let exp = expansion_check_sampled(&h, k, cfg.beta, cfg.samples, trial_seed(master, offset + 1));
                push("expansion", exp.sets_checked.into(), Cell::Empty, exp.pass());
            }
        }
        let coupling = (0..cfg.trials)
            .into_par_iter()
            .map(|t| {
                let directed = sample_directed_clocks(&r, trial_seed(master, offset + 2 + t));
                let clocks = directed.undirected();
                match hitting_index(&clocks, k) {
                    Some(idx) => coupling_violations(&directed, d, clocks.arrivals()[idx].time).len() as u64,
                    None => 0,
                }
            })
            .sum::<u64>();
        push("coupling_violations", coupling.into(), 0usize.into(), coupling == 0);
    }
    Ok(table)
}

/// One record per trial: sample `G` from the static law, sprinkle `X_p` with
/// `p = scale R` off `G`, and recompute `s_i`.
pub fn cmd_sprinkle(cfg: &ExperimentConfig) -> Result<Table> {
    let mut table = Table::new(
        "sprinkle",
        cfg.header(),
        &["n", "trial", "seed", "base", "value", "outcome", "added", "p_x", "delta", "p_family"],
    );
    let i = cfg.i;
    let kind = if i == 1 { BoosterKind::Augmenting } else { BoosterKind::Path };
    let cap = if i == 1 { AUGMENTING_CAP } else { PATH_CAP };
    for (row, &n) in cfg.sizes.iter().enumerate() {
        if i == 2 && n > crate::graph::DP_CAP {
            return Err(Error::TooLarge { n, cap: crate::graph::DP_CAP });
        }
        let r = rates_for(cfg, n, i)?;
        let p = static_probabilities(&r)?;
        let sprinkle_rates = if cfg.scale > 0.0 { Some(r.scaled(cfg.scale)?) } else { None };
        let master = trial_seed(cfg.seed, row as u64);
        let records = (0..cfg.trials)
            .into_par_iter()
            .map(|t| {
                let seed = trial_seed(master, t);
                let mut rng = crate::rng::seeded(seed);
                let g = sample_static_with(&p, &mut rng);
                let base = s_i(&g, i)?;
                let inst = SprinkleInstance::non_edges(&g, |u, v| cfg.scale * r.get(u, v))?;
                let mask = sample_xp_mask(&inst, &mut rng);
                let added: Vec<_> = (0..inst.len()).filter(|&x| mask[x]).filter_map(|x| inst.pair(x)).collect();
                let value = s_i(&g.with_edges(&added), i)?;
                let outcome = if base >= i * n / 2 {
                    "vacuous"
                } else if value > base {
                    "improved"
                } else {
                    "unchanged"
                };
                let family = match &sprinkle_rates {
                    Some(pr) if n <= cap => Some(enumerate_boosters(&g, pr, kind, 1, cfg.theta)?.weight),
                    None => Some(0.0),
                    _ => None,
                };
                Ok(vec![
                    n.into(),
                    t.into(),
                    seed.into(),
                    base.into(),
                    value.into(),
                    outcome.into(),
                    added.len().into(),
                    inst.p_total().into(),
                    inst.delta().into(),
                    family.into(),
                ])
            })
            .collect::<Result<Vec<Vec<Cell>>>>()?;
        for rec in records {
            table.push(rec);
        }
    }
    Ok(table)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Threshold,
    Akprob,
    Hitting,
    Diagnostics,
    Sprinkle,
}

impl Command {
    pub fn run(self, cfg: &ExperimentConfig) -> Result<Table> {
        match self {
            Command::Threshold => cmd_threshold(cfg),
            Command::Akprob => cmd_akprob(cfg),
            Command::Hitting => cmd_hitting(cfg),
            Command::Diagnostics => cmd_diagnostics(cfg),
            Command::Sprinkle => cmd_sprinkle(cfg),
        }
    }
}
