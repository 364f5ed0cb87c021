use rand::Rng as _;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{canon, Edge, Graph};
use crate::numeric::{binomial_stderr, CompensatedSum};
use crate::rng::{trial_rng, Rng};

/// Adjacency on the ground set `X`.
#[derive(Debug, Clone)]
pub enum Conflict {
    /// Arbitrary adjacency lists.
    Explicit(Vec<Vec<usize>>),
    /// Elements are vertex pairs; two are adjacent if `g` has an edge
    /// between their endpoint pairs. Neighbourhoods are computed on demand.
    Edges {
        g: Graph,
        pairs: Vec<Edge>,
        /// Elements containing each vertex.
        by_vertex: Vec<Vec<usize>>,
    },
}

/// Ground set `X` with inclusion probabilities and a conflict graph.
#[derive(Debug, Clone)]
pub struct SprinkleInstance {
    p: Vec<f64>,
    conflict: Conflict,
}

impl SprinkleInstance {
    pub fn explicit(p: Vec<f64>, adjacency: Vec<Vec<usize>>) -> Result<Self> {
        check_p(&p)?;
        if adjacency.len() != p.len() {
            return Err(Error::InvalidArgument("adjacency and p differ in length".into()));
        }
        let mut adj = adjacency;
        for (x, nb) in adj.iter_mut().enumerate() {
            if nb.iter().any(|&y| y >= p.len() || y == x) {
                return Err(Error::InvalidArgument(format!("bad neighbour list at {x}")));
            }
            nb.sort_unstable();
            nb.dedup();
        }
        for x in 0..adj.len() {
            for &y in &adj[x] {
                if adj[y].binary_search(&x).is_err() {
                    return Err(Error::InvalidArgument(format!("adjacency not symmetric at ({x},{y})")));
                }
            }
        }
        Ok(Self {
            p,
            conflict: Conflict::Explicit(adj),
        })
    }

    /// `X` = the given vertex pairs of `g`'s vertex set.
    pub fn from_pairs(g: &Graph, pairs: Vec<Edge>, p: Vec<f64>) -> Result<Self> {
        check_p(&p)?;
        if pairs.len() != p.len() {
            return Err(Error::InvalidArgument("pairs and p differ in length".into()));
        }
        let n = g.n();
        let mut by_vertex = vec![Vec::new(); n];
        let mut pairs_c = Vec::with_capacity(pairs.len());
        for (i, &(u, v)) in pairs.iter().enumerate() {
            if u == v || u >= n || v >= n {
                return Err(Error::InvalidArgument(format!("bad pair ({u},{v})")));
            }
            by_vertex[u].push(i);
            by_vertex[v].push(i);
            pairs_c.push(canon(u, v));
        }
        Ok(Self {
            p,
            conflict: Conflict::Edges {
                g: g.clone(),
                pairs: pairs_c,
                by_vertex,
            },
        })
    }

    /// `X` = all pairs outside `g`, with `p(u, v) = min(1, f(u, v))`.
    pub fn non_edges(g: &Graph, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let n = g.n();
        let mut pairs = Vec::new();
        let mut p = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if !g.has_edge(u, v) {
                    pairs.push((u, v));
                    p.push(f(u, v).clamp(0.0, 1.0));
                }
            }
        }
        Self::from_pairs(g, pairs, p)
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    pub fn p(&self) -> &[f64] {
        &self.p
    }

    pub fn conflict(&self) -> &Conflict {
        &self.conflict
    }

    pub fn pair(&self, x: usize) -> Option<Edge> {
        match &self.conflict {
            Conflict::Edges { pairs, .. } => Some(pairs[x]),
            Conflict::Explicit(_) => None,
        }
    }

    /// `N_G(x)` in the conflict graph, sorted.
    pub fn neighbors(&self, x: usize) -> Vec<usize> {
        match &self.conflict {
            Conflict::Explicit(adj) => adj[x].clone(),
            Conflict::Edges { g, pairs, by_vertex } => {
                let (a, b) = pairs[x];
                let mut out: Vec<usize> = [a, b]
                    .iter()
                    .flat_map(|&w| g.neighbors(w).iter())
                    .flat_map(|&z| by_vertex[z].iter().copied())
                    .filter(|&y| y != x)
                    .collect();
                out.sort_unstable();
                out.dedup();
                out
            }
        }
    }

    pub fn adjacent(&self, x: usize, y: usize) -> bool {
        if x == y {
            return false;
        }
        match &self.conflict {
            Conflict::Explicit(adj) => adj[x].binary_search(&y).is_ok(),
            Conflict::Edges { g, pairs, .. } => {
                let (a, b) = pairs[x];
                let (c, d) = pairs[y];
                [(a, c), (a, d), (b, c), (b, d)].iter().any(|&(u, v)| g.has_edge(u, v))
            }
        }
    }

    /// `p(A)`.
    pub fn p_sum(&self, a: &[usize]) -> f64 {
        let mut s = CompensatedSum::new();
        for &x in a {
            s.add(self.p[x]);
        }
        s.value()
    }

    /// `p[A]`.
    pub fn p_prod(&self, a: &[usize]) -> f64 {
        a.iter().map(|&x| self.p[x]).product()
    }

    /// `p[T]` summed over a family.
    pub fn p_family(&self, family: &[Vec<usize>]) -> f64 {
        let mut s = CompensatedSum::new();
        for t in family {
            s.add(self.p_prod(t));
        }
        s.value()
    }

    pub fn p_total(&self) -> f64 {
        let mut s = CompensatedSum::new();
        for &q in &self.p {
            s.add(q);
        }
        s.value()
    }

    /// `Delta = max_x p(N(x))`.
    pub fn delta(&self) -> f64 {
        (0..self.len())
            .into_par_iter()
            .map(|x| self.p_sum(&self.neighbors(x)))
            .reduce(|| 0.0, f64::max)
    }

    /// Checks that every member is a path on `r` vertices in the conflict graph.
    pub fn validate_family(&self, family: &[Vec<usize>]) -> Result<usize> {
        let r = family
            .first()
            .map(Vec::len)
            .ok_or_else(|| Error::InvalidArgument("empty family".into()))?;
        for t in family {
            if t.len() != r {
                return Err(Error::InvalidArgument(format!("mixed path sizes {r} and {}", t.len())));
            }
            if t.iter().any(|&x| x >= self.len()) {
                return Err(Error::InvalidArgument("element out of range".into()));
            }
            let mut s = t.clone();
            s.sort_unstable();
            s.dedup();
            if s.len() != r || t.windows(2).any(|w| !self.adjacent(w[0], w[1])) {
                return Err(Error::InvalidArgument(format!("{t:?} is not a path in the conflict graph")));
            }
        }
        Ok(r)
    }

    /// All paths on `r` vertices, each direction listed, up to `limit` of them.
    pub fn enumerate_paths(&self, r: usize, limit: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(r);
        let nbrs: Vec<Vec<usize>> = (0..self.len()).map(|x| self.neighbors(x)).collect();
        fn go(nbrs: &[Vec<usize>], r: usize, limit: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if out.len() >= limit {
                return;
            }
            if cur.len() == r {
                out.push(cur.clone());
                return;
            }
            let last = *cur.last().expect("nonempty");
            for &y in &nbrs[last] {
                if !cur.contains(&y) {
                    cur.push(y);
                    go(nbrs, r, limit, cur, out);
                    cur.pop();
                }
            }
        }
        if r == 0 {
            return out;
        }
        for x in 0..self.len() {
            cur.push(x);
            go(&nbrs, r, limit, &mut cur, &mut out);
            cur.pop();
        }
        out
    }
}

fn check_p(p: &[f64]) -> Result<()> {
    match p.iter().position(|&q| !(0.0..=1.0).contains(&q)) {
        Some(i) => Err(Error::InvalidProbabilities(format!("p[{i}] = {} outside [0, 1]", p[i]))),
        None => Ok(()),
    }
}

/// Inclusion mask of `X_p`.
pub fn sample_xp_mask(inst: &SprinkleInstance, rng: &mut Rng) -> Vec<bool> {
    inst.p
        .iter()
        .map(|&q| q >= 1.0 || (q > 0.0 && rng.random::<f64>() < q))
        .collect()
}

/// `X_p` as a sorted list of elements.
pub fn sample_xp(inst: &SprinkleInstance, seed: u64) -> Vec<usize> {
    let mask = sample_xp_mask(inst, &mut crate::rng::seeded(seed));
    (0..mask.len()).filter(|&x| mask[x]).collect()
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct MissReport {
    pub r: usize,
    /// Fraction of trials with no `T ⊆ X_p`.
    pub estimate: f64,
    pub stderr: f64,
    pub trials: u64,
    /// `exp(-p[T] / ((3 Delta)^(r-1) r^r))`.
    pub bound: f64,
    /// `prod (1 - p(x))` when `r = 1`.
    pub exact: Option<f64>,
    pub p_family: f64,
    pub delta: f64,
    pub p_x: f64,
    /// `p[T] >= 6 (3 Delta)^(r-2) p(X)`.
    pub hypothesis: bool,
}

impl MissReport {
    /// Empirical miss rate within `z` standard errors of the bound.
    pub fn within_bound(&self, z: f64) -> bool {
        self.estimate <= self.bound + z * self.stderr
    }
}

/// Probability that no member of `family` lies inside `X_p`.
pub fn miss_probability(inst: &SprinkleInstance, family: &[Vec<usize>], trials: u64, seed: u64) -> Result<MissReport> {
    let r = inst.validate_family(family)?;
    let p_family = inst.p_family(family);
    let delta = inst.delta();
    let p_x = inst.p_total();
    let three_delta = 3.0 * delta;
    let denom = three_delta.powi(r as i32 - 1) * (r as f64).powi(r as i32);
    let bound = if p_family == 0.0 { 1.0 } else { (-p_family / denom).exp() };
    let hypothesis = p_family >= 6.0 * three_delta.powi(r as i32 - 2) * p_x;
    let exact = (r == 1).then(|| {
        let mut xs: Vec<usize> = family.iter().map(|t| t[0]).collect();
        xs.sort_unstable();
        xs.dedup();
        xs.iter().map(|&x| 1.0 - inst.p[x]).product()
    });
    let misses: u64 = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mask = sample_xp_mask(inst, &mut trial_rng(seed, t));
            u64::from(!family.iter().any(|f| f.iter().all(|&x| mask[x])))
        })
        .sum();
    Ok(MissReport {
        r,
        estimate: if trials == 0 { f64::NAN } else { misses as f64 / trials as f64 },
        stderr: binomial_stderr(misses, trials),
        trials,
        bound,
        exact,
        p_family,
        delta,
        p_x,
        hypothesis,
    })
}
