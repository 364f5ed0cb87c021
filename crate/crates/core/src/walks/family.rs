use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::graph::{canon, Edge, Graph};
use crate::numeric::CompensatedSum;
use crate::spectral::RateMatrix;
use crate::walks::spec::AlternatingWalkSpec;

/// `R_alt[W] = prod_j R(w_{2j}, w_{2j+1})` over `j < ceil(l/2)`.
pub fn r_alt(walk: &[usize], r: &RateMatrix) -> f64 {
    let l = walk.len().saturating_sub(1);
    (0..l.div_ceil(2)).map(|j| r.get(walk[2 * j], walk[2 * j + 1])).product()
}

/// `odd(W)`: the edges `{w_{2i}, w_{2i+1}}`.
pub fn odd_edges(walk: &[usize]) -> Vec<Edge> {
    let l = walk.len().saturating_sub(1);
    (0..l.div_ceil(2)).map(|j| canon(walk[2 * j], walk[2 * j + 1])).collect()
}

/// Odd-index steps are edges of `f`.
pub fn is_alternating(walk: &[usize], f: &Graph) -> bool {
    walk.windows(2).enumerate().all(|(i, w)| i % 2 == 0 || f.has_edge(w[0], w[1]))
}

/// Also, even-index steps avoid `f`.
pub fn is_strictly_alternating(walk: &[usize], f: &Graph) -> bool {
    walk.windows(2)
        .enumerate()
        .all(|(i, w)| (i % 2 == 1) == f.has_edge(w[0], w[1]))
}

pub fn is_non_repeating(walk: &[usize]) -> bool {
    let mut seen = HashSet::new();
    walk.iter().all(|v| seen.insert(*v))
}

pub fn is_non_lazy(walk: &[usize]) -> bool {
    walk.windows(2).all(|w| w[0] != w[1])
}

/// `W_1 ∘ W_2 = (w_0..w_i, w'_j..w'_0)`.
pub fn concat(w1: &[usize], w2: &[usize]) -> Vec<usize> {
    w1.iter().chain(w2.iter().rev()).copied().collect()
}

/// A family of walks of one fixed length.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WalkFamily {
    pub length: usize,
    pub walks: Vec<Vec<usize>>,
}

impl WalkFamily {
    pub fn new(length: usize, walks: Vec<Vec<usize>>) -> Result<Self> {
        if let Some(w) = walks.iter().find(|w| w.len() != length + 1) {
            return Err(Error::InvalidWalk(format!(
                "walk of length {} in a family of length {length}",
                w.len().saturating_sub(1)
            )));
        }
        Ok(Self { length, walks })
    }

    pub fn len(&self) -> usize {
        self.walks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.walks.is_empty()
    }

    pub fn alt_weight(&self, r: &RateMatrix) -> f64 {
        let mut s = CompensatedSum::new();
        for w in &self.walks {
            s.add(r_alt(w, r));
        }
        s.value()
    }

    pub fn probability(&self, spec: &AlternatingWalkSpec) -> f64 {
        let mut s = CompensatedSum::new();
        for w in &self.walks {
            s.add(spec.walk_probability(w));
        }
        s.value()
    }

    /// `v -> pi(W^{->v})`.
    pub fn endpoint_histogram(&self, spec: &AlternatingWalkSpec) -> Vec<f64> {
        let mut h = vec![0.0; spec.n()];
        for w in &self.walks {
            h[*w.last().expect("nonempty walk")] += spec.walk_probability(w);
        }
        h
    }

    /// Distinct `odd(W)` edge sets.
    pub fn odd_sets(&self) -> Vec<Vec<Edge>> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for w in &self.walks {
            let mut e = odd_edges(w);
            e.sort_unstable();
            if seen.insert(e.clone()) {
                out.push(e);
            }
        }
        out
    }

    pub fn filter(&self, keep: impl Fn(&[usize]) -> bool) -> WalkFamily {
        WalkFamily {
            length: self.length,
            walks: self.walks.iter().filter(|w| keep(w)).cloned().collect(),
        }
    }
}

/// `R_G[E]`: zero if some edge lies in `g`.
pub fn r_g(edges: &[Edge], g: &Graph, r: &RateMatrix) -> f64 {
    if edges.iter().any(|&(u, v)| g.has_edge(u, v)) {
        0.0
    } else {
        edges.iter().map(|&(u, v)| r.get(u, v)).product()
    }
}

/// All `G`-alternating walks of `length` steps through `allowed` vertices,
/// with even-index steps on the support of `R`.
pub fn enumerate_alternating_walks(
    r: &RateMatrix,
    g: &Graph,
    length: usize,
    allowed: impl Fn(usize) -> bool,
) -> WalkFamily {
    let n = r.n();
    let mut walks = Vec::new();
    let mut cur = Vec::with_capacity(length + 1);
    fn go(
        r: &RateMatrix,
        g: &Graph,
        length: usize,
        allowed: &dyn Fn(usize) -> bool,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if cur.len() == length + 1 {
            out.push(cur.clone());
            return;
        }
        let u = *cur.last().expect("nonempty");
        let step = cur.len() - 1;
        if step.is_multiple_of(2) {
            for v in 0..r.n() {
                if r.get(u, v) > 0.0 && allowed(v) {
                    cur.push(v);
                    go(r, g, length, allowed, cur, out);
                    cur.pop();
                }
            }
        } else {
            for &v in g.neighbors(u) {
                if allowed(v) {
                    cur.push(v);
                    go(r, g, length, allowed, cur, out);
                    cur.pop();
                }
            }
        }
    }
    for v in (0..n).filter(|&v| allowed(v)) {
        cur.push(v);
        go(r, g, length, &allowed, &mut cur, &mut walks);
        cur.pop();
    }
    WalkFamily { length, walks }
}
