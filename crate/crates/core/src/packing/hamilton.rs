use rand::Rng as _;

use crate::graph::{hamilton_cycle_dp, Graph};
use crate::rng::{seeded, Rng};

/// Graphs up to this size fall back to the exact subset dynamic program.
pub const EXACT_HAMILTON_CAP: usize = 18;
pub const DEFAULT_RESTARTS: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchParams {
    /// Steps per restart; `None` means `n^2`.
    pub budget: Option<u64>,
    pub restarts: usize,
    pub exact_cap: usize,
}

impl Default for SearchParams {
    fn default() -> Self {
        Self {
            budget: None,
            restarts: DEFAULT_RESTARTS,
            exact_cap: EXACT_HAMILTON_CAP,
        }
    }
}

/// Structural reasons a graph cannot be Hamiltonian.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub enum Obstruction {
    TooFewVertices,
    LowDegree { vertex: usize },
    Disconnected,
    CutVertex { vertex: usize },
    /// A vertex with three or more degree-2 neighbours, all forcing edges at it.
    ForcedDegree { vertex: usize },
    /// Edges forced by degree-2 vertices close a cycle shorter than `n`.
    ForcedCycle { length: usize },
    /// The exact search found no Hamilton cycle.
    Exhaustive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize)]
pub struct SearchStats {
    pub extensions: u64,
    pub rotations: u64,
    pub restarts: usize,
    pub steps: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HamiltonOutcome {
    /// A verified Hamilton cycle.
    Cycle(Vec<usize>),
    /// Certified non-Hamiltonian; `best_path` is the longest path seen.
    NoCycle { reason: Obstruction, best_path: Vec<usize> },
    /// Budget exhausted without a verdict.
    Exhausted { best_path: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HamiltonResult {
    pub outcome: HamiltonOutcome,
    pub stats: SearchStats,
}

impl HamiltonResult {
    pub fn cycle(&self) -> Option<&[usize]> {
        match &self.outcome {
            HamiltonOutcome::Cycle(c) => Some(c),
            _ => None,
        }
    }

    /// `Some(true)` / `Some(false)` for a definite verdict.
    pub fn verdict(&self) -> Option<bool> {
        match self.outcome {
            HamiltonOutcome::Cycle(_) => Some(true),
            HamiltonOutcome::NoCycle { .. } => Some(false),
            HamiltonOutcome::Exhausted { .. } => None,
        }
    }
}

pub fn is_hamilton_cycle(g: &Graph, cycle: &[usize]) -> bool {
    let n = g.n();
    if n < 3 || cycle.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &v in cycle {
        if v >= n || seen[v] {
            return false;
        }
        seen[v] = true;
    }
    (0..n).all(|i| g.has_edge(cycle[i], cycle[(i + 1) % n]))
}

/// Sound certificates of non-Hamiltonicity that are cheap to check.
pub fn hamiltonicity_obstruction(g: &Graph) -> Option<Obstruction> {
    let n = g.n();
    if n < 3 {
        return Some(Obstruction::TooFewVertices);
    }
    if let Some(v) = (0..n).find(|&v| g.degree(v) < 2) {
        return Some(Obstruction::LowDegree { vertex: v });
    }
    if !g.is_connected() {
        return Some(Obstruction::Disconnected);
    }
    if let Some(v) = articulation_point(g) {
        return Some(Obstruction::CutVertex { vertex: v });
    }
    // Both edges at a degree-2 vertex are forced into any Hamilton cycle.
    let mut forced = vec![0usize; n];
    let mut uf = UnionFind::new(n);
    for (u, v) in g.edges() {
        if g.degree(u) == 2 || g.degree(v) == 2 {
            forced[u] += 1;
            forced[v] += 1;
            if let Some(vertex) = [u, v].into_iter().find(|&x| forced[x] > 2) {
                return Some(Obstruction::ForcedDegree { vertex });
            }
            if !uf.union(u, v) {
                let length = uf.size(u);
                if length < n {
                    return Some(Obstruction::ForcedCycle { length });
                }
            }
        }
    }
    None
}

struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn size(&mut self, x: usize) -> usize {
        let r = self.find(x);
        self.size[r]
    }

    /// False if `a` and `b` were already joined.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (big, small) = if self.size[ra] >= self.size[rb] { (ra, rb) } else { (rb, ra) };
        self.parent[small] = big;
        self.size[big] += self.size[small];
        true
    }
}

/// Some cut vertex of a connected graph, by iterative Tarjan low-links.
fn articulation_point(g: &Graph) -> Option<usize> {
    let n = g.n();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut timer = 0;
    let mut stack: Vec<(usize, usize, usize)> = vec![(0, usize::MAX, 0)];
    disc[0] = 0;
    low[0] = 0;
    timer += 1;
    let mut root_children = 0;
    while let Some(&mut (v, parent, ref mut idx)) = stack.last_mut() {
        if *idx < g.degree(v) {
            let w = g.neighbors(v)[*idx];
            *idx += 1;
            if w == parent {
                continue;
            }
            if disc[w] == usize::MAX {
                disc[w] = timer;
                low[w] = timer;
                timer += 1;
                if v == 0 {
                    root_children += 1;
                }
                stack.push((w, v, 0));
            } else {
                low[v] = low[v].min(disc[w]);
            }
        } else {
            stack.pop();
            if let Some(&(p, _, _)) = stack.last() {
                low[p] = low[p].min(low[v]);
                if p != 0 && low[v] >= disc[p] {
                    return Some(p);
                }
            }
        }
    }
    (root_children > 1).then_some(0)
}

/// Rotation-extension search state; `pos[v]` is `usize::MAX` off the path.
struct Walker<'a> {
    g: &'a Graph,
    path: Vec<usize>,
    pos: Vec<usize>,
    /// Number of off-path neighbours of each vertex.
    free: Vec<usize>,
    stats: SearchStats,
}

const OFF: usize = usize::MAX;

impl<'a> Walker<'a> {
    fn new(g: &'a Graph, start: usize) -> Self {
        let n = g.n();
        let mut w = Self {
            g,
            path: Vec::with_capacity(n),
            pos: vec![OFF; n],
            free: g.degrees(),
            stats: SearchStats::default(),
        };
        w.push(start);
        w
    }

    fn push(&mut self, v: usize) {
        self.pos[v] = self.path.len();
        self.path.push(v);
        for &x in self.g.neighbors(v) {
            self.free[x] -= 1;
        }
    }

    fn reverse(&mut self) {
        self.path.reverse();
        for (i, &v) in self.path.iter().enumerate() {
            self.pos[v] = i;
        }
    }

    /// Rotation at the final endpoint with pivot `path[i]`.
    fn rotate(&mut self, i: usize) {
        self.path[i + 1..].reverse();
        for j in i + 1..self.path.len() {
            self.pos[self.path[j]] = j;
        }
        self.stats.rotations += 1;
    }

    /// Off-path neighbour of `v` with the fewest off-path neighbours of its own.
    fn best_extension(&self, v: usize, rng: &mut Rng) -> Option<usize> {
        let mut best = None;
        let mut best_key = (usize::MAX, 0u32);
        for &w in self.g.neighbors(v) {
            if self.pos[w] == OFF {
                let key = (self.free[w], rng.random::<u32>());
                if key < best_key {
                    best_key = key;
                    best = Some(w);
                }
            }
        }
        best
    }

    /// If the path closes into a cycle, reopen it next to an off-path neighbour.
    fn open_cycle(&mut self) -> bool {
        let (first, last) = (self.path[0], *self.path.last().expect("nonempty"));
        if self.path.len() < 3 || !self.g.has_edge(first, last) {
            return false;
        }
        let Some(j) = self.path.iter().position(|&v| self.free[v] > 0) else {
            return false;
        };
        // Cycle read from v_{j+1} round to v_j, so v_j becomes the endpoint.
        let mut next: Vec<usize> = self.path[j + 1..].to_vec();
        next.extend_from_slice(&self.path[..=j]);
        self.path = next;
        for (i, &v) in self.path.iter().enumerate() {
            self.pos[v] = i;
        }
        true
    }

    fn run(&mut self, budget: u64, rng: &mut Rng, best: &mut Vec<usize>) -> Option<Vec<usize>> {
        let n = self.g.n();
        let mut steps = 0u64;
        while steps < budget {
            steps += 1;
            if self.path.len() > best.len() {
                *best = self.path.clone();
            }
            let end = *self.path.last().expect("nonempty");
            if let Some(w) = self.best_extension(end, rng) {
                self.push(w);
                self.stats.extensions += 1;
                continue;
            }
            if self.free[self.path[0]] > 0 {
                self.reverse();
                continue;
            }
            let len = self.path.len();
            if len == n {
                if n >= 3 && self.g.has_edge(end, self.path[0]) {
                    self.stats.steps += steps;
                    return Some(self.path.clone());
                }
            } else if self.open_cycle() {
                continue;
            }
            // Pivots v_i with i <= len - 3; prefer those whose new endpoint
            // can extend (or close, once the path is spanning).
            let first = self.path[0];
            let mut good = Vec::new();
            let mut any = Vec::new();
            for &b in self.g.neighbors(end) {
                let i = self.pos[b];
                if i + 2 < len {
                    any.push(i);
                    let new_end = self.path[i + 1];
                    let ok = if len == n { self.g.has_edge(new_end, first) } else { self.free[new_end] > 0 };
                    if ok {
                        good.push(i);
                    }
                }
            }
            if let Some(&i) = pick(&good, rng) {
                self.rotate(i);
            } else if any.is_empty() || rng.random::<f64>() < 0.5 {
                self.reverse();
                if let Some(&i) = pick(&self.pivots(), rng) {
                    self.rotate(i);
                }
            } else if let Some(&i) = pick(&any, rng) {
                self.rotate(i);
            }
        }
        self.stats.steps += steps;
        None
    }

    fn pivots(&self) -> Vec<usize> {
        let end = *self.path.last().expect("nonempty");
        let len = self.path.len();
        self.g
            .neighbors(end)
            .iter()
            .map(|&b| self.pos[b])
            .filter(|&i| i + 2 < len)
            .collect()
    }
}

fn pick<'v, T>(xs: &'v [T], rng: &mut Rng) -> Option<&'v T> {
    if xs.is_empty() {
        None
    } else {
        Some(&xs[rng.random_range(0..xs.len())])
    }
}

/// Extension-first rotation search with random restarts.
///
/// Cheap structural obstructions are checked first; graphs up to
/// `params.exact_cap` vertices get an exact verdict when the heuristic fails.
/// A returned cycle is always verified against `g`.
pub fn posa_hamilton_search(g: &Graph, params: SearchParams, seed: u64) -> HamiltonResult {
    posa_hamilton_search_with(g, params, &mut seeded(seed))
}

pub fn posa_hamilton_search_with(g: &Graph, params: SearchParams, rng: &mut Rng) -> HamiltonResult {
    let n = g.n();
    let budget = params.budget.unwrap_or((n as u64) * (n as u64)).max(1);
    let mut stats = SearchStats::default();
    let mut best = Vec::new();
    let obstruction = hamiltonicity_obstruction(g);
    let restarts = if obstruction.is_some() { 1 } else { params.restarts.max(1) };
    if n > 0 {
        // The first start is a minimum-degree vertex, whose edges are the most constrained.
        let min_v = (0..n).min_by_key(|&v| g.degree(v)).expect("nonempty");
        for r in 0..restarts {
            let start = if r == 0 { min_v } else { rng.random_range(0..n) };
            let mut w = Walker::new(g, start);
            let found = w.run(budget, rng, &mut best);
            stats.extensions += w.stats.extensions;
            stats.rotations += w.stats.rotations;
            stats.steps += w.stats.steps;
            stats.restarts = r + 1;
            if let Some(c) = found {
                if is_hamilton_cycle(g, &c) {
                    return HamiltonResult { outcome: HamiltonOutcome::Cycle(c), stats };
                }
            }
        }
    }
    if let Some(reason) = obstruction {
        return HamiltonResult {
            outcome: HamiltonOutcome::NoCycle { reason, best_path: best },
            stats,
        };
    }
    if n <= params.exact_cap {
        let exact = hamilton_cycle_dp(g).expect("within dynamic-programming cap");
        let outcome = match exact {
            Some(c) if is_hamilton_cycle(g, &c) => HamiltonOutcome::Cycle(c),
            Some(_) => unreachable!("dynamic program returned an invalid cycle"),
            None => HamiltonOutcome::NoCycle {
                reason: Obstruction::Exhaustive,
                best_path: best,
            },
        };
        return HamiltonResult { outcome, stats };
    }
    HamiltonResult {
        outcome: HamiltonOutcome::Exhausted { best_path: best },
        stats,
    }
}

/// Plain depth-first backtracking from vertex 0; exponential, for small oracles.
pub fn hamilton_cycle_backtrack(g: &Graph) -> Option<Vec<usize>> {
    let n = g.n();
    if n < 3 {
        return None;
    }
    let mut path = vec![0];
    let mut used = vec![false; n];
    used[0] = true;
    fn go(g: &Graph, path: &mut Vec<usize>, used: &mut [bool]) -> bool {
        let n = g.n();
        let last = *path.last().expect("nonempty");
        if path.len() == n {
            return g.has_edge(last, path[0]);
        }
        for &w in g.neighbors(last) {
            if !used[w] {
                used[w] = true;
                path.push(w);
                if go(g, path, used) {
                    return true;
                }
                path.pop();
                used[w] = false;
            }
        }
        false
    }
    go(g, &mut path, &mut used).then_some(path)
}
