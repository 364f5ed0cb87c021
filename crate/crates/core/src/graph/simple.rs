use std::collections::VecDeque;
use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Undirected edge stored as `(min, max)`.
pub type Edge = (usize, usize);

#[inline]
pub fn canon(u: usize, v: usize) -> Edge {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

/// Simple undirected graph with sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    m: usize,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Self {
            adj: vec![Vec::new(); n],
            m: 0,
        }
    }

    /// Builds from an edge list; duplicate edges are merged, loops rejected.
    pub fn from_edges<I: IntoIterator<Item = Edge>>(n: usize, edges: I) -> Result<Self> {
        let mut g = Self::new(n);
        for (u, v) in edges {
            if u == v {
                return Err(Error::InvalidArgument(format!("self-loop at {u}")));
            }
            if u >= n || v >= n {
                return Err(Error::InvalidArgument(format!("edge ({u},{v}) out of range for n = {n}")));
            }
            g.adj[u].push(v);
            g.adj[v].push(u);
        }
        for a in &mut g.adj {
            a.sort_unstable();
            a.dedup();
        }
        g.m = g.adj.iter().map(Vec::len).sum::<usize>() / 2;
        Ok(g)
    }

    pub fn complete(n: usize) -> Self {
        let adj = (0..n).map(|u| (0..n).filter(|&v| v != u).collect()).collect();
        Self {
            adj,
            m: n * n.saturating_sub(1) / 2,
        }
    }

    pub fn cycle(n: usize) -> Self {
        Self::from_edges(n, (0..n).map(|i| canon(i, (i + 1) % n))).expect("valid cycle")
    }

    pub fn path(n: usize) -> Self {
        Self::from_edges(n, (1..n).map(|i| (i - 1, i))).expect("valid path")
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.m
    }

    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.adj[u]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    pub fn min_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Adds `uv`; returns false if it was already present.
    pub fn add_edge(&mut self, u: usize, v: usize) -> bool {
        assert!(u != v, "self-loop");
        match self.adj[u].binary_search(&v) {
            Ok(_) => false,
            Err(i) => {
                self.adj[u].insert(i, v);
                let j = self.adj[v].binary_search(&u).unwrap_err();
                self.adj[v].insert(j, u);
                self.m += 1;
                true
            }
        }
    }

    /// Removes `uv`; returns false if it was absent.
    pub fn remove_edge(&mut self, u: usize, v: usize) -> bool {
        match self.adj[u].binary_search(&v) {
            Err(_) => false,
            Ok(i) => {
                self.adj[u].remove(i);
                let j = self.adj[v].binary_search(&u).expect("symmetric adjacency");
                self.adj[v].remove(j);
                self.m -= 1;
                true
            }
        }
    }

    /// Edges as `(min, max)` pairs in lexicographic order.
    pub fn edges(&self) -> Vec<Edge> {
        let mut out = Vec::with_capacity(self.m);
        for (u, nb) in self.adj.iter().enumerate() {
            out.extend(nb.iter().filter(|&&v| v > u).map(|&v| (u, v)));
        }
        out
    }

    pub fn is_subgraph_of(&self, other: &Graph) -> bool {
        self.n() == other.n() && self.edges().iter().all(|&(u, v)| other.has_edge(u, v))
    }

    pub fn union(&self, other: &Graph) -> Graph {
        let mut g = self.clone();
        for (u, v) in other.edges() {
            g.add_edge(u, v);
        }
        g
    }

    pub fn without_edges<'a, I: IntoIterator<Item = &'a Edge>>(&self, edges: I) -> Graph {
        let mut g = self.clone();
        for &(u, v) in edges {
            g.remove_edge(u, v);
        }
        g
    }

    pub fn with_edges<'a, I: IntoIterator<Item = &'a Edge>>(&self, edges: I) -> Graph {
        let mut g = self.clone();
        for &(u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    /// `N(A)`: vertices outside `A` adjacent to some vertex of `A`.
    pub fn neighborhood(&self, a: &[usize]) -> Vec<usize> {
        let mut in_a = vec![false; self.n()];
        for &x in a {
            in_a[x] = true;
        }
        let mut seen = vec![false; self.n()];
        let mut out = Vec::new();
        for &x in a {
            for &y in &self.adj[x] {
                if !in_a[y] && !seen[y] {
                    seen[y] = true;
                    out.push(y);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// `N̂(A) = A ∪ N(A)`.
    pub fn closed_neighborhood(&self, a: &[usize]) -> Vec<usize> {
        let mut out = self.neighborhood(a);
        out.extend_from_slice(a);
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Component label per vertex and the number of components.
    pub fn components(&self) -> (Vec<usize>, usize) {
        let n = self.n();
        let mut label = vec![usize::MAX; n];
        let mut count = 0;
        let mut queue = VecDeque::new();
        for s in 0..n {
            if label[s] != usize::MAX {
                continue;
            }
            label[s] = count;
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                for &v in &self.adj[u] {
                    if label[v] == usize::MAX {
                        label[v] = count;
                        queue.push_back(v);
                    }
                }
            }
            count += 1;
        }
        (label, count)
    }

    pub fn is_connected(&self) -> bool {
        self.n() <= 1 || self.components().1 == 1
    }

    /// Adjacency bitmasks; requires `n <= 64`.
    pub fn adjacency_masks(&self) -> Vec<u64> {
        assert!(self.n() <= 64, "bitmask adjacency needs n <= 64");
        self.adj
            .iter()
            .map(|nb| nb.iter().fold(0u64, |m, &v| m | (1 << v)))
            .collect()
    }

    /// Edge-list text: header `n m`, then one `u v` line per edge.
    pub fn to_edge_list_string(&self) -> String {
        let mut s = format!("{} {}\n", self.n(), self.m);
        for (u, v) in self.edges() {
            let _ = writeln!(s, "{u} {v}");
        }
        s
    }

    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (line, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing header".into(),
        })?;
        let nums = parse_pair(header, line)?;
        let (n, m) = nums;
        let mut edges = Vec::with_capacity(m);
        for (line, l) in lines {
            let (u, v) = parse_pair(l, line)?;
            if u == v || u >= n || v >= n {
                return Err(Error::Parse {
                    line,
                    msg: format!("invalid edge {u} {v}"),
                });
            }
            edges.push((u, v));
        }
        let g = Self::from_edges(n, edges)?;
        if g.edge_count() != m {
            return Err(Error::Parse {
                line,
                msg: format!("header declares {m} edges, found {} distinct", g.edge_count()),
            });
        }
        Ok(g)
    }
}

fn parse_pair(s: &str, line: usize) -> Result<(usize, usize)> {
    let t: Vec<&str> = s.split_whitespace().collect();
    let bad = || Error::Parse {
        line,
        msg: format!("expected two integers, got '{s}'"),
    };
    if t.len() != 2 {
        return Err(bad());
    }
    Ok((t[0].parse().map_err(|_| bad())?, t[1].parse().map_err(|_| bad())?))
}
