use std::sync::Arc;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng as _;

use crate::error::{Error, Result};
use crate::graph::{heavy_vertices, Graph};
use crate::rng::Rng;
use crate::spectral::{stationary, transition_matrix, RateMatrix, TransitionMatrix};

/// Dense propagation is limited to this many vertices.
pub const PROPAGATION_CAP: usize = 2000;

/// Even-step kernel: for each vertex `v`, the law of `w_{2i+2}` given `w_{2i+1} = v`.
pub type Kernel = Vec<Vec<(usize, f64)>>;

/// Law of an `(R, G)`-alternating walk: `M` on odd steps, `kernel` on even ones.
#[derive(Debug, Clone)]
pub struct AlternatingWalkSpec {
    m: Arc<TransitionMatrix>,
    row_sums: Arc<Vec<f64>>,
    graph: Graph,
    kernel: Kernel,
    start: Vec<f64>,
    /// Vertices whose even step falls back to staying put.
    fallback: Vec<usize>,
}

fn check_distribution(pi: &[f64], n: usize) -> Result<()> {
    if pi.len() != n {
        return Err(Error::InvalidProbabilities(format!("length {} for {n} vertices", pi.len())));
    }
    if pi.iter().any(|&p| !(p.is_finite() && p >= 0.0)) {
        return Err(Error::InvalidProbabilities("entries must be finite and nonnegative".into()));
    }
    let s: f64 = pi.iter().sum();
    if (s - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidProbabilities(format!("total mass {s}")));
    }
    Ok(())
}

impl AlternatingWalkSpec {
    /// The simple, lazy walk: uniform on `N̂_G(v)` at even steps.
    pub fn lazy(r: &RateMatrix, g: &Graph, start: Vec<f64>) -> Result<Self> {
        let kernel = (0..g.n())
            .map(|v| {
                let w = 1.0 / (g.degree(v) + 1) as f64;
                std::iter::once((v, w)).chain(g.neighbors(v).iter().map(|&u| (u, w))).collect()
            })
            .collect();
        Self::build(r, g, kernel, start, Vec::new())
    }

    /// Uniform on `N_G(v)`; a `G`-isolated vertex stays put and is flagged.
    pub fn non_lazy(r: &RateMatrix, g: &Graph, start: Vec<f64>) -> Result<Self> {
        let mut fallback = Vec::new();
        let kernel = (0..g.n())
            .map(|v| {
                if g.degree(v) == 0 {
                    fallback.push(v);
                    return vec![(v, 1.0)];
                }
                let w = 1.0 / g.degree(v) as f64;
                g.neighbors(v).iter().map(|&u| (u, w)).collect()
            })
            .collect();
        Self::build(r, g, kernel, start, fallback)
    }

    /// An arbitrary even-step kernel, which must be supported on `N̂_G(v)`.
    pub fn with_kernel(r: &RateMatrix, g: &Graph, kernel: Kernel, start: Vec<f64>) -> Result<Self> {
        for (v, row) in kernel.iter().enumerate() {
            if let Some(&(u, _)) = row.iter().find(|&&(u, _)| u != v && (u >= g.n() || !g.has_edge(u, v))) {
                return Err(Error::InvalidProbabilities(format!("kernel moves {v} to non-neighbour {u}")));
            }
        }
        Self::build(r, g, kernel, start, Vec::new())
    }

    fn build(r: &RateMatrix, g: &Graph, kernel: Kernel, start: Vec<f64>, fallback: Vec<usize>) -> Result<Self> {
        let n = r.n();
        if g.n() != n {
            return Err(Error::InvalidArgument(format!("graph has {} vertices, rates {n}", g.n())));
        }
        check_distribution(&start, n)?;
        if kernel.len() != n {
            return Err(Error::InvalidArgument("kernel has the wrong number of rows".into()));
        }
        for (v, row) in kernel.iter().enumerate() {
            let s: f64 = row.iter().map(|&(_, p)| p).sum();
            if row.iter().any(|&(_, p)| !(p.is_finite() && p >= 0.0)) || (s - 1.0).abs() > 1e-10 {
                return Err(Error::InvalidProbabilities(format!("kernel row {v} has mass {s}")));
            }
        }
        Ok(Self {
            m: Arc::new(transition_matrix(r)?),
            row_sums: Arc::new(r.row_sums().to_vec()),
            graph: g.clone(),
            kernel,
            start,
            fallback,
        })
    }

    /// `pi^theta`: at a vertex of `S_theta` the walk stays; elsewhere any mass
    /// sent into `S_theta` is moved onto staying put.
    pub fn theta_truncate(&self, r: &RateMatrix, theta: f64) -> Result<Self> {
        if !(theta > 0.0) {
            return Err(Error::InvalidArgument(format!("theta must be positive, got {theta}")));
        }
        let heavy = self.s_theta(r, theta);
        let mut in_s = vec![false; self.n()];
        for &v in &heavy {
            in_s[v] = true;
        }
        let kernel = self
            .kernel
            .iter()
            .enumerate()
            .map(|(v, row)| {
                if in_s[v] {
                    return vec![(v, 1.0)];
                }
                let moved: f64 = row.iter().filter(|&&(u, _)| in_s[u]).map(|&(_, p)| p).sum();
                let mut out: Vec<(usize, f64)> = row.iter().copied().filter(|&(u, _)| !in_s[u]).collect();
                if moved > 0.0 {
                    match out.iter_mut().find(|(u, _)| *u == v) {
                        Some(e) => e.1 += moved,
                        None => out.push((v, moved)),
                    }
                }
                out
            })
            .collect();
        Ok(Self {
            kernel,
            ..self.clone()
        })
    }

    /// `S_theta(R, G)`: `d_G(u) >= theta` or `d_R(u) >= theta d`.
    pub fn s_theta(&self, r: &RateMatrix, theta: f64) -> Vec<usize> {
        heavy_vertices(&self.graph, r, theta)
    }

    pub fn n(&self) -> usize {
        self.m.n()
    }

    pub fn transition(&self) -> &TransitionMatrix {
        &self.m
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn kernel(&self) -> &Kernel {
        &self.kernel
    }

    pub fn start(&self) -> &[f64] {
        &self.start
    }

    pub fn fallback_vertices(&self) -> &[usize] {
        &self.fallback
    }

    pub fn row_sums(&self) -> &[f64] {
        &self.row_sums
    }

    pub fn with_start(&self, start: Vec<f64>) -> Result<Self> {
        check_distribution(&start, self.n())?;
        Ok(Self { start, ..self.clone() })
    }

    /// Probability of moving `u -> v` at step `i` (1-based).
    pub fn step_probability(&self, i: usize, u: usize, v: usize) -> f64 {
        if i % 2 == 1 {
            self.m.get(u, v)
        } else {
            self.kernel[u].iter().filter(|&&(w, _)| w == v).map(|&(_, p)| p).sum()
        }
    }

    /// `pi(W)` under the product law, including the start probability.
    pub fn walk_probability(&self, walk: &[usize]) -> f64 {
        let Some(&w0) = walk.first() else { return 1.0 };
        let mut p = self.start[w0];
        for (i, w) in walk.windows(2).enumerate() {
            if p == 0.0 {
                break;
            }
            p *= self.step_probability(i + 1, w[0], w[1]);
        }
        p
    }

    pub fn even_step(&self, pi: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; pi.len()];
        for (v, &p) in pi.iter().enumerate() {
            if p != 0.0 {
                for &(u, q) in &self.kernel[v] {
                    out[u] += p * q;
                }
            }
        }
        out
    }

    pub fn odd_step(&self, pi: &[f64]) -> Vec<f64> {
        self.m.left_apply(pi)
    }

    pub fn sampler(&self) -> WalkSampler {
        WalkSampler::new(self)
    }
}

/// Starting laws.
pub fn uniform_start(n: usize) -> Vec<f64> {
    vec![1.0 / n as f64; n]
}

pub fn stationary_start(r: &RateMatrix) -> Vec<f64> {
    stationary(r)
}

pub fn point_start(n: usize, v: usize) -> Vec<f64> {
    let mut pi = vec![0.0; n];
    pi[v] = 1.0;
    pi
}

/// `pi_0 .. pi_steps` by exact propagation.
pub fn propagate_exact(spec: &AlternatingWalkSpec, steps: usize) -> Result<Vec<Vec<f64>>> {
    let n = spec.n();
    if n > PROPAGATION_CAP {
        return Err(Error::TooLarge { n, cap: PROPAGATION_CAP });
    }
    let mut out = Vec::with_capacity(steps + 1);
    out.push(spec.start.clone());
    for i in 1..=steps {
        let prev = out.last().expect("nonempty");
        let next = if i % 2 == 1 { spec.odd_step(prev) } else { spec.even_step(prev) };
        out.push(next);
    }
    Ok(out)
}

/// Precomputed samplers for the odd-step rows and the start law.
#[derive(Debug, Clone)]
pub struct WalkSampler {
    spec: AlternatingWalkSpec,
    rows: Arc<Vec<(Vec<usize>, WeightedIndex<f64>)>>,
    start: Arc<WeightedIndex<f64>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimulatedWalk {
    pub vertices: Vec<usize>,
    /// Some even step left a `G`-isolated vertex in non-lazy mode.
    pub fallback_used: bool,
}

impl WalkSampler {
    fn new(spec: &AlternatingWalkSpec) -> Self {
        let n = spec.n();
        let rows = (0..n)
            .map(|u| {
                let (idx, w): (Vec<usize>, Vec<f64>) = spec
                    .m
                    .row(u)
                    .iter()
                    .enumerate()
                    .filter(|&(_, &p)| p > 0.0)
                    .map(|(v, &p)| (v, p))
                    .unzip();
                (idx, WeightedIndex::new(w).expect("rows of M are positive"))
            })
            .collect();
        Self {
            spec: spec.clone(),
            rows: Arc::new(rows),
            start: Arc::new(WeightedIndex::new(&spec.start).expect("start law has positive mass")),
        }
    }

    pub fn spec(&self) -> &AlternatingWalkSpec {
        &self.spec
    }

    pub fn sample_start(&self, rng: &mut Rng) -> usize {
        self.start.sample(rng)
    }

    /// One step from `u`, where `i` is the index of the new vertex.
    pub fn step(&self, i: usize, u: usize, rng: &mut Rng) -> usize {
        if i % 2 == 1 {
            let (idx, dist) = &self.rows[u];
            idx[dist.sample(rng)]
        } else {
            let row = &self.spec.kernel[u];
            let mut x = rng.random::<f64>();
            for &(v, p) in row {
                if x < p {
                    return v;
                }
                x -= p;
            }
            row.last().map_or(u, |&(v, _)| v)
        }
    }

    pub fn simulate(&self, length: usize, rng: &mut Rng) -> SimulatedWalk {
        let mut w = Vec::with_capacity(length + 1);
        let mut cur = self.sample_start(rng);
        w.push(cur);
        let mut fallback_used = false;
        for i in 1..=length {
            if i % 2 == 0 && self.spec.fallback.binary_search(&cur).is_ok() {
                fallback_used = true;
            }
            cur = self.step(i, cur, rng);
            w.push(cur);
        }
        SimulatedWalk { vertices: w, fallback_used }
    }
}

/// A single walk of `length` steps.
pub fn simulate(spec: &AlternatingWalkSpec, length: usize, rng: &mut Rng) -> SimulatedWalk {
    spec.sampler().simulate(length, rng)
}

pub fn walk_to_string(walk: &[usize]) -> String {
    walk.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}

pub fn distribution_to_string(pi: &[f64]) -> String {
    pi.iter().enumerate().map(|(v, p)| format!("{v} {p:.16e}\n")).collect()
}
