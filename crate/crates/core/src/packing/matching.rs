use std::collections::VecDeque;

use crate::graph::{canon, Edge, Graph};

const NONE: usize = usize::MAX;

/// Maximum cardinality matching (Edmonds' blossom algorithm).
pub fn maximum_matching(g: &Graph) -> Vec<Edge> {
    let mut state = MatchingState::new(g.n());
    state.greedy(g);
    state.augment_all(g);
    state.edges()
}

/// A matching that can be grown as edges are added to the graph.
#[derive(Debug, Clone)]
pub struct MatchingState {
    mate: Vec<usize>,
}

impl MatchingState {
    pub fn new(n: usize) -> Self {
        Self { mate: vec![NONE; n] }
    }

    pub fn size(&self) -> usize {
        self.mate.iter().filter(|&&m| m != NONE).count() / 2
    }

    pub fn mate(&self, v: usize) -> Option<usize> {
        (self.mate[v] != NONE).then_some(self.mate[v])
    }

    pub fn edges(&self) -> Vec<Edge> {
        (0..self.mate.len())
            .filter(|&v| self.mate[v] != NONE && v < self.mate[v])
            .map(|v| canon(v, self.mate[v]))
            .collect()
    }

    fn greedy(&mut self, g: &Graph) {
        for v in 0..g.n() {
            if self.mate[v] == NONE {
                if let Some(&u) = g.neighbors(v).iter().find(|&&u| self.mate[u] == NONE) {
                    self.mate[u] = v;
                    self.mate[v] = u;
                }
            }
        }
    }

    /// Augments from every exposed vertex until the matching is maximum in `g`.
    pub fn augment_all(&mut self, g: &Graph) {
        let mut search = Search::new(g.n());
        let mut progress = true;
        while progress {
            progress = false;
            for v in 0..g.n() {
                if self.mate[v] == NONE {
                    if let Some(end) = search.find_path(g, &self.mate, v) {
                        let mut x = end;
                        while x != NONE {
                            let px = search.parent[x];
                            let next = self.mate[px];
                            self.mate[x] = px;
                            self.mate[px] = x;
                            x = next;
                        }
                        progress = true;
                    }
                }
            }
        }
    }

    /// Tries a single augmentation after `u v` was added to `g`.
    pub fn add_edge(&mut self, g: &Graph, u: usize, v: usize) {
        if self.mate[u] == NONE && self.mate[v] == NONE {
            self.mate[u] = v;
            self.mate[v] = u;
        } else {
            self.augment_all(g);
        }
    }
}

struct Search {
    parent: Vec<usize>,
    base: Vec<usize>,
    used: Vec<bool>,
    blossom: Vec<bool>,
    queue: VecDeque<usize>,
}

impl Search {
    fn new(n: usize) -> Self {
        Self {
            parent: vec![NONE; n],
            base: (0..n).collect(),
            used: vec![false; n],
            blossom: vec![false; n],
            queue: VecDeque::new(),
        }
    }

    fn lca(&self, mate: &[usize], mut a: usize, mut b: usize) -> usize {
        let mut seen = vec![false; mate.len()];
        loop {
            a = self.base[a];
            seen[a] = true;
            if mate[a] == NONE {
                break;
            }
            a = self.parent[mate[a]];
        }
        loop {
            b = self.base[b];
            if seen[b] {
                return b;
            }
            b = self.parent[mate[b]];
        }
    }

    fn mark_path(&mut self, mate: &[usize], mut v: usize, b: usize, mut child: usize) {
        while self.base[v] != b {
            self.blossom[self.base[v]] = true;
            self.blossom[self.base[mate[v]]] = true;
            self.parent[v] = child;
            child = mate[v];
            v = self.parent[mate[v]];
        }
    }

    /// Endpoint of an augmenting path from `root`, with `parent` links set.
    fn find_path(&mut self, g: &Graph, mate: &[usize], root: usize) -> Option<usize> {
        let n = g.n();
        self.used.fill(false);
        self.parent.fill(NONE);
        for (i, b) in self.base.iter_mut().enumerate() {
            *b = i;
        }
        self.used[root] = true;
        self.queue.clear();
        self.queue.push_back(root);
        while let Some(v) = self.queue.pop_front() {
            for &to in g.neighbors(v) {
                if self.base[v] == self.base[to] || mate[v] == to {
                    continue;
                }
                if to == root || (mate[to] != NONE && self.parent[mate[to]] != NONE) {
                    let cur = self.lca(mate, v, to);
                    self.blossom.fill(false);
                    self.mark_path(mate, v, cur, to);
                    self.mark_path(mate, to, cur, v);
                    for i in 0..n {
                        if self.blossom[self.base[i]] {
                            self.base[i] = cur;
                            if !self.used[i] {
                                self.used[i] = true;
                                self.queue.push_back(i);
                            }
                        }
                    }
                } else if self.parent[to] == NONE {
                    self.parent[to] = v;
                    if mate[to] == NONE {
                        return Some(to);
                    }
                    let m = mate[to];
                    self.used[m] = true;
                    self.queue.push_back(m);
                }
            }
        }
        None
    }
}

/// `IP_2`: pairs left exposed together by some maximum matching.
pub fn isolatable_pairs(g: &Graph) -> Vec<Edge> {
    let n = g.n();
    let s1 = maximum_matching(g).len();
    let mut out = Vec::new();
    for x in 0..n {
        for y in x + 1..n {
            let h = g.without_edges(
                &g.neighbors(x)
                    .iter()
                    .map(|&w| canon(x, w))
                    .chain(g.neighbors(y).iter().map(|&w| canon(y, w)))
                    .collect::<Vec<_>>(),
            );
            if maximum_matching(&h).len() == s1 {
                out.push((x, y));
            }
        }
    }
    out
}
