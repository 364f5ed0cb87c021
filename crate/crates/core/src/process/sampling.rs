use rand::Rng as _;

use crate::error::{Error, Result};
use crate::graph::{canon, Graph};
use crate::rng::{seeded, Rng};
use crate::spectral::RateMatrix;

/// Symmetric matrix of edge probabilities in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl ProbabilityMatrix {
    pub fn new(n: usize, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::InvalidProbabilities("expected n x n entries".into()));
        }
        for u in 0..n {
            for v in 0..n {
                let p = entries[u * n + v];
                if !(0.0..=1.0).contains(&p) {
                    return Err(Error::InvalidProbabilities(format!("entry ({u},{v}) = {p}")));
                }
                if p != entries[v * n + u] {
                    return Err(Error::InvalidProbabilities(format!("asymmetric at ({u},{v})")));
                }
            }
        }
        Ok(Self { n, entries })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut entries = vec![0.0; n * n];
        for u in 0..n {
            for v in u + 1..n {
                let p = f(u, v);
                entries[u * n + v] = p;
                entries[v * n + u] = p;
            }
        }
        Self::new(n, entries)
    }

    pub fn constant(n: usize, p: f64) -> Result<Self> {
        Self::from_fn(n, |_, _| p)
    }

    /// `P(u,v) = 1 - e^{-R(u,v) t}`, the law of the process at time `t`.
    pub fn at_time(r: &RateMatrix, t: f64) -> Result<Self> {
        Self::from_fn(r.n(), |u, v| -(-r.get(u, v) * t).exp_m1())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, u: usize, v: usize) -> f64 {
        self.entries[u * self.n + v]
    }

    pub fn row_sum(&self, u: usize) -> f64 {
        (0..self.n).filter(|&v| v != u).map(|v| self.get(u, v)).sum()
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.n).map(|u| self.row_sum(u)).collect()
    }
}

/// Independent edges with probabilities `P(u,v)`.
pub fn sample_static(p: &ProbabilityMatrix, seed: u64) -> Graph {
    sample_static_with(p, &mut seeded(seed))
}

/// Geometric skipping at the row maximum followed by thinning, so each row
/// costs time proportional to its number of successes at that maximum.
pub fn sample_static_with(p: &ProbabilityMatrix, rng: &mut Rng) -> Graph {
    let n = p.n();
    let mut edges = Vec::new();
    for u in 0..n {
        let row = &p.entries[u * n..(u + 1) * n];
        let pmax = row[u + 1..].iter().copied().fold(0.0, f64::max);
        if pmax <= 0.0 {
            continue;
        }
        let log_q = (-pmax).ln_1p();
        let mut v = u + 1;
        loop {
            if pmax < 1.0 {
                let x: f64 = rng.random();
                let skip = ((-x).ln_1p() / log_q).floor();
                if skip >= (n - v) as f64 {
                    break;
                }
                v += skip as usize;
            }
            if v >= n {
                break;
            }
            let q = row[v];
            if q >= pmax || rng.random::<f64>() * pmax < q {
                edges.push(canon(u, v));
            }
            v += 1;
        }
    }
    Graph::from_edges(n, edges).expect("valid")
}

/// A D-out sample: each vertex's chosen partners and their undirected merge.
#[derive(Debug, Clone, PartialEq)]
pub struct DOutGraph {
    pub graph: Graph,
    pub out: Vec<Vec<usize>>,
}

/// `D` distinct partners of `u`, drawn sequentially proportional to `R(u, .)`
/// among those not yet chosen.
pub fn sample_out_neighbors(r: &RateMatrix, u: usize, d: usize, rng: &mut Rng) -> Result<Vec<usize>> {
    let available = r.support_degree(u);
    if available < d {
        return Err(Error::InsufficientSupport { vertex: u, available, needed: d });
    }
    let mut w: Vec<f64> = r.row(u).to_vec();
    let mut chosen = Vec::with_capacity(d);
    for _ in 0..d {
        let total: f64 = w.iter().sum();
        let mut x = rng.random::<f64>() * total;
        let mut pick = None;
        for (v, &wv) in w.iter().enumerate() {
            if wv <= 0.0 {
                continue;
            }
            pick = Some(v);
            if x < wv {
                break;
            }
            x -= wv;
        }
        let v = pick.expect("positive remaining weight");
        w[v] = 0.0;
        chosen.push(v);
    }
    Ok(chosen)
}

pub fn sample_d_out(r: &RateMatrix, d: usize, seed: u64) -> Result<DOutGraph> {
    let mut rng = seeded(seed);
    let n = r.n();
    let mut out = Vec::with_capacity(n);
    for u in 0..n {
        out.push(sample_out_neighbors(r, u, d, &mut rng)?);
    }
    let graph = Graph::from_edges(n, out.iter().enumerate().flat_map(|(u, vs)| vs.iter().map(move |&v| canon(u, v))))?;
    Ok(DOutGraph { graph, out })
}
