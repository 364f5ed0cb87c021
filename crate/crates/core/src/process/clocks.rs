use std::fmt::Write as _;

use rand_distr::{Distribution, Exp};

use crate::error::{Error, Result};
use crate::graph::{canon, Edge, Graph};
use crate::rng::{seeded, Rng};
use crate::spectral::RateMatrix;

/// One finite clock `E(u,v)` with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Arrival {
    pub time: f64,
    pub u: usize,
    pub v: usize,
}

/// A full trajectory of the process: the finite clocks in arrival order.
///
/// Arrivals are totally ordered by `(time, u, v)`, which breaks exact ties
/// lexicographically. Every rank-based quantity (`T_D`, `H`) uses this order.
#[derive(Debug, Clone, PartialEq)]
pub struct ClockAssignment {
    n: usize,
    seed: u64,
    arrivals: Vec<Arrival>,
    /// Per vertex, indices into `arrivals` in ascending order.
    incident: Vec<Vec<u32>>,
}

pub(crate) fn exp_sample(rate: f64, rng: &mut Rng) -> f64 {
    let d = Exp::new(rate).expect("positive rate");
    loop {
        let x: f64 = d.sample(rng);
        if x > 0.0 {
            return x;
        }
    }
}

/// Samples every finite clock, pairs in lexicographic order.
pub fn sample_clocks(r: &RateMatrix, seed: u64) -> ClockAssignment {
    let mut rng = seeded(seed);
    sample_clocks_with(r, seed, &mut rng)
}

/// As [`sample_clocks`] with an explicit generator; `seed` is only recorded.
pub fn sample_clocks_with(r: &RateMatrix, seed: u64, rng: &mut Rng) -> ClockAssignment {
    let n = r.n();
    let mut arrivals = Vec::new();
    for u in 0..n {
        let row = r.row(u);
        for (v, &rate) in row.iter().enumerate().skip(u + 1) {
            if rate > 0.0 {
                arrivals.push(Arrival { time: exp_sample(rate, rng), u, v });
            }
        }
    }
    ClockAssignment::build(n, seed, arrivals)
}

impl ClockAssignment {
    /// Clock table from explicit `(u, v, time)` triples; absent pairs are infinite.
    pub fn from_times(n: usize, seed: u64, times: &[(usize, usize, f64)]) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        let mut arrivals = Vec::with_capacity(times.len());
        for &(a, b, t) in times {
            if a == b || a >= n || b >= n {
                return Err(Error::InvalidArgument(format!("bad pair ({a},{b})")));
            }
            if !(t > 0.0) || t.is_nan() {
                return Err(Error::InvalidArgument(format!("clock ({a},{b}) = {t} must be positive")));
            }
            if !seen.insert(canon(a, b)) {
                return Err(Error::InvalidArgument(format!("duplicate pair ({a},{b})")));
            }
            if t.is_finite() {
                let (u, v) = canon(a, b);
                arrivals.push(Arrival { time: t, u, v });
            }
        }
        Ok(Self::build(n, seed, arrivals))
    }

    fn build(n: usize, seed: u64, mut arrivals: Vec<Arrival>) -> Self {
        arrivals.sort_by(|a, b| a.time.total_cmp(&b.time).then(a.u.cmp(&b.u)).then(a.v.cmp(&b.v)));
        let mut incident = vec![Vec::new(); n];
        for (i, a) in arrivals.iter().enumerate() {
            incident[a.u].push(i as u32);
            incident[a.v].push(i as u32);
        }
        Self { n, seed, arrivals, incident }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Finite clocks in arrival order.
    pub fn arrivals(&self) -> &[Arrival] {
        &self.arrivals
    }

    /// Indices of the arrivals at `u`, in arrival order.
    pub fn incident(&self, u: usize) -> &[u32] {
        &self.incident[u]
    }

    /// `E(u,v)`, infinite off the support.
    pub fn arrival(&self, u: usize, v: usize) -> f64 {
        let (a, b) = canon(u, v);
        let list = if self.incident[a].len() <= self.incident[b].len() {
            &self.incident[a]
        } else {
            &self.incident[b]
        };
        list.iter()
            .map(|&i| self.arrivals[i as usize])
            .find(|x| x.u == a && x.v == b)
            .map_or(f64::INFINITY, |x| x.time)
    }

    /// Number of arrivals with `E <= t`.
    pub fn count_until(&self, t: f64) -> usize {
        self.arrivals.partition_point(|a| a.time <= t)
    }

    /// Graph formed by the first `count` arrivals.
    pub fn graph_of_prefix(&self, count: usize) -> Graph {
        Graph::from_edges(self.n, self.arrivals[..count].iter().map(|a| (a.u, a.v))).expect("valid arrivals")
    }

    /// `T_D(u)`: time of the `D`-th arrival at `u`, infinite if there is none.
    pub fn t_d(&self, u: usize, d: usize) -> f64 {
        if d == 0 {
            return 0.0;
        }
        self.incident[u]
            .get(d - 1)
            .map_or(f64::INFINITY, |&i| self.arrivals[i as usize].time)
    }

    /// Degree of `u` in the graph at time `t`.
    pub fn degree_at(&self, u: usize, t: f64) -> usize {
        self.incident[u].partition_point(|&i| self.arrivals[i as usize].time <= t)
    }

    /// Trajectory dump: header `n D seed`, then `u v E` in arrival order.
    pub fn to_trajectory_string(&self, d: usize) -> String {
        let mut s = format!("{} {} {}\n", self.n, d, self.seed);
        for a in &self.arrivals {
            let _ = writeln!(s, "{} {} {:.16e}", a.u, a.v, a.time);
        }
        s
    }

    /// Parses a trajectory dump, returning the clocks and the recorded `D`.
    pub fn parse_trajectory(text: &str) -> Result<(Self, usize)> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "missing header".into() })?;
        let h: Vec<&str> = header.split_whitespace().collect();
        let bad = |line: usize, msg: &str| Error::Parse { line, msg: msg.to_string() };
        if h.len() != 3 {
            return Err(bad(1, "header must be 'n D seed'"));
        }
        let n: usize = h[0].parse().map_err(|_| bad(1, "bad n"))?;
        let d: usize = h[1].parse().map_err(|_| bad(1, "bad D"))?;
        let seed: u64 = h[2].parse().map_err(|_| bad(1, "bad seed"))?;
        let mut times = Vec::new();
        for (i, l) in lines {
            let t: Vec<&str> = l.split_whitespace().collect();
            if t.len() != 3 {
                return Err(bad(i + 1, "expected 'u v E'"));
            }
            let u = t[0].parse().map_err(|_| bad(i + 1, "bad vertex"))?;
            let v = t[1].parse().map_err(|_| bad(i + 1, "bad vertex"))?;
            let e: f64 = t[2].parse().map_err(|_| bad(i + 1, "bad time"))?;
            times.push((u, v, e));
        }
        Ok((Self::from_times(n, seed, &times)?, d))
    }
}

/// Independent clocks `X(u,v) ~ Exp(R(u,v)/2)` on ordered pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectedClockAssignment {
    n: usize,
    seed: u64,
    x: Vec<f64>,
}

pub fn sample_directed_clocks(r: &RateMatrix, seed: u64) -> DirectedClockAssignment {
    let n = r.n();
    let mut rng = seeded(seed);
    let mut x = vec![f64::INFINITY; n * n];
    for u in 0..n {
        for v in 0..n {
            let rate = r.get(u, v);
            if u != v && rate > 0.0 {
                x[u * n + v] = exp_sample(rate / 2.0, &mut rng);
            }
        }
    }
    DirectedClockAssignment { n, seed, x }
}

impl DirectedClockAssignment {
    /// Explicit table, row-major, `INFINITY` for absent ordered pairs.
    pub fn from_table(n: usize, seed: u64, x: Vec<f64>) -> Result<Self> {
        if x.len() != n * n {
            return Err(Error::InvalidArgument("table must be n x n".into()));
        }
        for u in 0..n {
            for v in 0..n {
                let t = x[u * n + v];
                if (u == v && t.is_finite()) || !(t > 0.0) || t.is_finite() != x[v * n + u].is_finite() {
                    return Err(Error::InvalidArgument(format!("bad directed clock ({u},{v}) = {t}")));
                }
            }
        }
        Ok(Self { n, seed, x })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, u: usize, v: usize) -> f64 {
        self.x[u * self.n + v]
    }

    /// `E(u,v) = min(X(u,v), X(v,u))`.
    pub fn undirected(&self) -> ClockAssignment {
        let mut times = Vec::new();
        for u in 0..self.n {
            for v in u + 1..self.n {
                let e = self.get(u, v).min(self.get(v, u));
                if e.is_finite() {
                    times.push((u, v, e));
                }
            }
        }
        ClockAssignment::from_times(self.n, self.seed, &times).expect("valid directed table")
    }

    fn dth_smallest(mut xs: Vec<f64>, d: usize) -> f64 {
        xs.retain(|x| x.is_finite());
        if d == 0 || xs.len() < d {
            return f64::INFINITY;
        }
        xs.sort_by(f64::total_cmp);
        xs[d - 1]
    }

    /// `T^+_D(u)`: the `D`-th smallest of `X(u, .)`.
    pub fn t_plus(&self, u: usize, d: usize) -> f64 {
        Self::dth_smallest((0..self.n).map(|v| self.get(u, v)).collect(), d)
    }

    /// `T^-_D(v)`: the `D`-th smallest of `X(., v)`.
    pub fn t_minus(&self, v: usize, d: usize) -> f64 {
        Self::dth_smallest((0..self.n).map(|u| self.get(u, v)).collect(), d)
    }

    /// `H^+_D ∪ H^-_D` as a set of undirected edges.
    pub fn out_in_union(&self, d: usize) -> Vec<Edge> {
        let tp: Vec<f64> = (0..self.n).map(|u| self.t_plus(u, d)).collect();
        let tm: Vec<f64> = (0..self.n).map(|v| self.t_minus(v, d)).collect();
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in 0..self.n {
                let x = self.get(u, v);
                if u != v && x.is_finite() && (x <= tp[u] || x <= tm[v]) {
                    out.push(canon(u, v));
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }
}
