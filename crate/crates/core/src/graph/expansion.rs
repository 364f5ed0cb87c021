use rand::Rng as _;

use super::Graph;
use crate::spectral::RateMatrix;

/// Largest `n` for which every small set is enumerated.
pub const EXHAUSTIVE_CAP: usize = 22;
pub const DEFAULT_SAMPLES: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum ExpansionMethod {
    Exhaustive,
    Sampled,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ExpansionReport {
    pub beta: f64,
    pub k: usize,
    /// A set with `|A| < beta n` and `|N(A)| < k |A|`, if one was found.
    pub witness: Option<Vec<usize>>,
    pub method: ExpansionMethod,
    pub sets_checked: u64,
}

impl ExpansionReport {
    pub fn pass(&self) -> bool {
        self.witness.is_none()
    }
}

/// Largest admissible `|A|`, i.e. the largest integer strictly below `beta n`.
fn max_size(n: usize, beta: f64) -> usize {
    let x = beta * n as f64;
    let below = if x.fract() == 0.0 { x - 1.0 } else { x.floor() };
    (below.max(0.0) as usize).min(n)
}

/// Exhaustive for `n <= 22`, sampled otherwise with a fixed seed.
pub fn expansion_check(g: &Graph, k: usize, beta: f64) -> ExpansionReport {
    if g.n() <= EXHAUSTIVE_CAP {
        expansion_check_exhaustive(g, k, beta)
    } else {
        expansion_check_sampled(g, k, beta, DEFAULT_SAMPLES, 0)
    }
}

/// Every set with `|A| < beta n`, smallest sizes first.
pub fn expansion_check_exhaustive(g: &Graph, k: usize, beta: f64) -> ExpansionReport {
    let n = g.n();
    assert!(n <= EXHAUSTIVE_CAP, "exhaustive expansion needs n <= {EXHAUSTIVE_CAP}");
    let adj: Vec<u32> = g.adjacency_masks().iter().map(|&m| m as u32).collect();
    let top = max_size(n, beta);
    let mut checked = 0u64;
    for size in 1..=top {
        // Gosper's hack over subsets of the given size.
        let mut a: u32 = (1u32 << size) - 1;
        let limit: u64 = 1u64 << n;
        while (a as u64) < limit {
            checked += 1;
            let mut nb = 0u32;
            let mut rest = a;
            while rest != 0 {
                let v = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                nb |= adj[v];
            }
            nb &= !a;
            if (nb.count_ones() as usize) < k * size {
                return ExpansionReport {
                    beta,
                    k,
                    witness: Some(bits(a)),
                    method: ExpansionMethod::Exhaustive,
                    sets_checked: checked,
                };
            }
            let c = a & a.wrapping_neg();
            let r = a.wrapping_add(c);
            if r == 0 {
                break;
            }
            a = (((r ^ a) >> 2) / c) | r;
        }
    }
    ExpansionReport {
        beta,
        k,
        witness: None,
        method: ExpansionMethod::Exhaustive,
        sets_checked: checked,
    }
}

fn bits(mut m: u32) -> Vec<usize> {
    let mut out = Vec::new();
    while m != 0 {
        out.push(m.trailing_zeros() as usize);
        m &= m - 1;
    }
    out
}

/// All singletons and pairs, then `samples` connected-biased random sets
/// grown from a random vertex by repeatedly absorbing a boundary vertex.
pub fn expansion_check_sampled(g: &Graph, k: usize, beta: f64, samples: usize, seed: u64) -> ExpansionReport {
    let n = g.n();
    let top = max_size(n, beta);
    let mut probe = Probe::new(n);
    let mut checked = 0u64;
    let report = |witness: Option<Vec<usize>>, checked| ExpansionReport {
        beta,
        k,
        witness,
        method: ExpansionMethod::Sampled,
        sets_checked: checked,
    };
    if top >= 1 {
        for u in 0..n {
            checked += 1;
            if g.degree(u) < k {
                return report(Some(vec![u]), checked);
            }
        }
    }
    if top >= 2 {
        for u in 0..n {
            for v in u + 1..n {
                checked += 1;
                if probe.neighborhood_size(g, &[u, v]) < 2 * k {
                    return report(Some(vec![u, v]), checked);
                }
            }
        }
    }
    if top >= 3 && n > 0 {
        let mut rng = crate::rng::seeded(seed);
        let mut set = Vec::new();
        let mut in_set = vec![false; n];
        let mut boundary = Vec::new();
        for _ in 0..samples {
            // Log-uniform target size favours small sets.
            let target = ((top as f64).powf(rng.random::<f64>()).round() as usize).clamp(1, top);
            set.clear();
            boundary.clear();
            let s = rng.random_range(0..n);
            set.push(s);
            in_set[s] = true;
            boundary.extend_from_slice(g.neighbors(s));
            while set.len() < target {
                let pick = if boundary.is_empty() || rng.random::<f64>() < 0.05 {
                    rng.random_range(0..n)
                } else {
                    let i = rng.random_range(0..boundary.len());
                    boundary.swap_remove(i)
                };
                if in_set[pick] {
                    continue;
                }
                in_set[pick] = true;
                set.push(pick);
                boundary.extend(g.neighbors(pick).iter().filter(|&&w| !in_set[w]));
            }
            checked += 1;
            let bad = probe.neighborhood_size(g, &set) < k * set.len();
            for &v in &set {
                in_set[v] = false;
            }
            if bad {
                let mut w = set.clone();
                w.sort_unstable();
                return report(Some(w), checked);
            }
        }
    }
    report(None, checked)
}

struct Probe {
    mark: Vec<u32>,
    stamp: u32,
}

impl Probe {
    fn new(n: usize) -> Self {
        Self { mark: vec![0; n], stamp: 0 }
    }

    fn neighborhood_size(&mut self, g: &Graph, a: &[usize]) -> usize {
        self.stamp += 2;
        let (inside, seen) = (self.stamp, self.stamp + 1);
        for &x in a {
            self.mark[x] = inside;
        }
        let mut count = 0;
        for &x in a {
            for &y in g.neighbors(x) {
                if self.mark[y] != inside && self.mark[y] != seen {
                    self.mark[y] = seen;
                    count += 1;
                }
            }
        }
        count
    }
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct LightTail {
    /// `S_theta = {u : d_G(u) >= theta or d_R(u) >= theta d_min}`.
    pub s_theta: Vec<usize>,
    /// `|N̂(S_theta)| / n`.
    pub closed_fraction: f64,
}

pub fn heavy_vertices(g: &Graph, r: &RateMatrix, theta: f64) -> Vec<usize> {
    let d = r.min_row_sum();
    (0..g.n())
        .filter(|&u| g.degree(u) as f64 >= theta || r.row_sum(u) >= theta * d)
        .collect()
}

pub fn light_tail_check(g: &Graph, r: &RateMatrix, theta: f64) -> LightTail {
    let s_theta = heavy_vertices(g, r, theta);
    let closed = g.closed_neighborhood(&s_theta).len();
    LightTail {
        s_theta,
        closed_fraction: if g.n() == 0 { 0.0 } else { closed as f64 / g.n() as f64 },
    }
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct SeReport {
    pub expansion: ExpansionReport,
    pub tail: LightTail,
    /// Finite-n stand-in for `|N̂(S_theta)| = o(n)`.
    pub max_tail_fraction: f64,
    pub pass: bool,
}

/// Sparse-expander verdict: expansion by `k` below `beta n` and a light tail.
pub fn se_class_check(g: &Graph, r: &RateMatrix, k: usize, beta: f64, theta: f64, max_tail_fraction: f64) -> SeReport {
    let expansion = expansion_check(g, k, beta);
    let tail = light_tail_check(g, r, theta);
    let pass = expansion.pass() && tail.closed_fraction <= max_tail_fraction;
    SeReport {
        expansion,
        tail,
        max_tail_fraction,
        pass,
    }
}
