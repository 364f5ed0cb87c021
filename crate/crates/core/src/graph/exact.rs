//! Exhaustive oracles for small graphs.

use super::{canon, Component, Edge, Graph, KGraph};
use crate::error::{Error, Result};

/// Hard cap for [`exact_s_k`].
pub const EXACT_SK_CAP: usize = 12;
/// Cap for the bitmask dynamic programs.
pub const DP_CAP: usize = 22;

fn masks(g: &Graph, cap: usize) -> Result<Vec<u32>> {
    if g.n() > cap {
        return Err(Error::TooLarge { n: g.n(), cap });
    }
    Ok((0..g.n())
        .map(|u| g.neighbors(u).iter().fold(0u32, |m, &v| m | (1 << v)))
        .collect())
}

/// Maximum matching by dynamic programming over vertex subsets.
pub fn max_matching_dp(g: &Graph) -> Result<Vec<Edge>> {
    let adj = masks(g, DP_CAP)?;
    Ok(matching_dp(&adj))
}

pub(crate) fn matching_dp(adj: &[u32]) -> Vec<Edge> {
    let n = adj.len();
    let full = if n == 0 { 0 } else { (1u32 << n) - 1 } as usize;
    let mut f = vec![0u8; full + 1];
    for mask in 1..=full {
        let v = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << v);
        let mut best = f[rest];
        let mut cand = adj[v] as usize & rest;
        while cand != 0 {
            let u = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            best = best.max(1 + f[rest & !(1 << u)]);
        }
        f[mask] = best;
    }
    let mut out = Vec::new();
    let mut mask = full;
    while mask != 0 {
        let v = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << v);
        if f[mask] == f[rest] {
            mask = rest;
            continue;
        }
        let mut cand = adj[v] as usize & rest;
        while cand != 0 {
            let u = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            if f[mask] == 1 + f[rest & !(1 << u)] {
                out.push(canon(u, v));
                mask = rest & !(1 << u);
                break;
            }
        }
    }
    out
}

/// Endpoint tables over vertex subsets.
///
/// `paths[S]` holds the vertices `e` such that some path covering exactly `S`
/// ends at `e`; `rooted[S]` restricts to paths that start at `min(S)`.
struct PathTables {
    paths: Vec<u32>,
    rooted: Vec<u32>,
}

fn path_tables(adj: &[u32]) -> PathTables {
    let n = adj.len();
    let size = 1usize << n;
    let mut paths = vec![0u32; size];
    let mut rooted = vec![0u32; size];
    for v in 0..n {
        paths[1 << v] = 1 << v;
        rooted[1 << v] = 1 << v;
    }
    for mask in 1..size {
        let low = mask.trailing_zeros();
        let mut ends = paths[mask];
        while ends != 0 {
            let e = ends.trailing_zeros() as usize;
            ends &= ends - 1;
            let mut next = adj[e] & !(mask as u32);
            while next != 0 {
                let w = next.trailing_zeros() as usize;
                next &= next - 1;
                paths[mask | (1 << w)] |= 1 << w;
            }
        }
        let mut ends = rooted[mask];
        while ends != 0 {
            let e = ends.trailing_zeros() as usize;
            ends &= ends - 1;
            // Only extend by vertices above the root to keep min(S) fixed.
            let mut next = adj[e] & !(mask as u32) & !((1u32 << (low + 1)) - 1);
            while next != 0 {
                let w = next.trailing_zeros() as usize;
                next &= next - 1;
                rooted[mask | (1 << w)] |= 1 << w;
            }
        }
    }
    PathTables { paths, rooted }
}

fn trace_back(table: &[u32], adj: &[u32], mut mask: usize, mut end: usize) -> Vec<usize> {
    let mut seq = vec![end];
    while mask.count_ones() > 1 {
        let rest = mask & !(1 << end);
        let prev = (table[rest] & adj[end]).trailing_zeros() as usize;
        seq.push(prev);
        mask = rest;
        end = prev;
    }
    seq.reverse();
    seq
}

pub(crate) fn longest_component_masks(adj: &[u32]) -> Component {
    let n = adj.len();
    if n == 0 {
        return Component::Path(Vec::new());
    }
    let t = path_tables(adj);
    let mut best_path: Option<(usize, usize, usize)> = None;
    let mut best_cycle: Option<(usize, usize, usize)> = None;
    for mask in 1..(1usize << n) {
        let size = mask.count_ones() as usize;
        if t.paths[mask] != 0 && best_path.is_none_or(|(s, _, _)| size - 1 > s) {
            best_path = Some((size - 1, mask, t.paths[mask].trailing_zeros() as usize));
        }
        if size >= 3 {
            let low = mask.trailing_zeros() as usize;
            let closing = t.rooted[mask] & adj[low];
            if closing != 0 && best_cycle.is_none_or(|(s, _, _)| size > s) {
                best_cycle = Some((size, mask, closing.trailing_zeros() as usize));
            }
        }
    }
    let (ps, pm, pe) = best_path.expect("single vertices are paths");
    match best_cycle {
        Some((cs, cm, ce)) if cs >= ps => Component::Cycle(trace_back(&t.rooted, adj, cm, ce)),
        _ => Component::Path(trace_back(&t.paths, adj, pm, pe)),
    }
}

/// A path or cycle with the most edges, i.e. a witness for `s_2(G)`.
pub fn longest_path_or_cycle(g: &Graph) -> Result<Component> {
    let adj = masks(g, DP_CAP)?;
    Ok(longest_component_masks(&adj))
}

/// Hamilton cycle by subset dynamic programming, if one exists.
pub fn hamilton_cycle_dp(g: &Graph) -> Result<Option<Vec<usize>>> {
    let adj = masks(g, DP_CAP)?;
    let n = g.n();
    if n < 3 {
        return Ok(None);
    }
    // Paths rooted at vertex 0 only.
    let size = 1usize << n;
    let mut reach = vec![0u32; size];
    reach[1] = 1;
    for mask in (1..size).step_by(2) {
        let mut ends = reach[mask];
        while ends != 0 {
            let e = ends.trailing_zeros() as usize;
            ends &= ends - 1;
            let mut next = adj[e] & !(mask as u32);
            while next != 0 {
                let w = next.trailing_zeros() as usize;
                next &= next - 1;
                reach[mask | (1 << w)] |= 1 << w;
            }
        }
    }
    let full = size - 1;
    let closing = reach[full] & adj[0];
    if closing == 0 {
        return Ok(None);
    }
    Ok(Some(trace_back(&reach, &adj, full, closing.trailing_zeros() as usize)))
}

/// `s_k(G)` by exhaustive search; `n <= 12`.
pub fn exact_s_k(g: &Graph, k: usize) -> Result<usize> {
    Ok(super::s_k_size(&exact_max_k_graph(g, k)?))
}

/// A k-graph inside `G` with `s_k(G)` edges; `n <= 12`.
pub fn exact_max_k_graph(g: &Graph, k: usize) -> Result<KGraph> {
    if g.n() > EXACT_SK_CAP {
        return Err(Error::TooLarge { n: g.n(), cap: EXACT_SK_CAP });
    }
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let edges = g.edges();
    let mut s = Search {
        n: g.n(),
        h: k / 2,
        odd: k % 2 == 1,
        edges: &edges,
        best: None,
        best_size: 0,
        target: (k * g.n() / 2).min(edges.len()),
    };
    let all = if edges.len() == 128 { u128::MAX } else { (1u128 << edges.len()) - 1 };
    let mut chosen = Vec::new();
    s.level(0, all, 0, &mut chosen);
    let (components, matching) = s.best.expect("search records at least one candidate");
    Ok(KGraph::new(k, components, matching))
}

struct Search<'a> {
    n: usize,
    h: usize,
    odd: bool,
    edges: &'a [Edge],
    best: Option<(Vec<Component>, Option<Vec<Edge>>)>,
    best_size: usize,
    target: usize,
}

impl Search<'_> {
    fn adj_of(&self, avail: u128) -> Vec<u32> {
        let mut adj = vec![0u32; self.n];
        let mut rest = avail;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let (u, v) = self.edges[i];
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
        }
        adj
    }

    fn mask_of(&self, c: &Component) -> u128 {
        c.edges().iter().fold(0u128, |m, e| {
            let i = self.edges.binary_search(e).expect("component edge in graph");
            m | (1 << i)
        })
    }

    fn record(&mut self, size: usize, chosen: &[Component], matching: Option<Vec<Edge>>) {
        if self.best.is_none() || size > self.best_size {
            self.best_size = size;
            self.best = Some((chosen.to_vec(), matching));
        }
    }

    fn done(&self) -> bool {
        self.best.is_some() && self.best_size >= self.target
    }

    fn bound(&self, level: usize, avail: u128, acc: usize) -> usize {
        let rest = (self.h - level) * self.n + if self.odd { self.n / 2 } else { 0 };
        acc + rest.min(avail.count_ones() as usize)
    }

    fn level(&mut self, level: usize, avail: u128, acc: usize, chosen: &mut Vec<Component>) {
        if self.done() || (self.best.is_some() && self.bound(level, avail, acc) <= self.best_size) {
            return;
        }
        if level == self.h {
            let matching = self.odd.then(|| matching_dp(&self.adj_of(avail)));
            let size = acc + matching.as_ref().map_or(0, Vec::len);
            self.record(size, chosen, matching);
            return;
        }
        if level + 1 == self.h && !self.odd {
            let c = longest_component_masks(&self.adj_of(avail));
            let size = acc + c.edge_count();
            chosen.push(c);
            self.record(size, chosen, None);
            chosen.pop();
            return;
        }
        // Enumerate every path and cycle once, plus the empty component.
        let mut found: Vec<Component> = vec![Component::Path(Vec::new())];
        let adj = self.adj_of(avail);
        for s in 0..self.n {
            let mut seq = vec![s];
            enumerate_from(&adj, &mut seq, 1 << s, &mut found);
        }
        found.sort_by_key(|c| std::cmp::Reverse(c.edge_count()));
        for c in found {
            if self.done() {
                return;
            }
            let cm = self.mask_of(&c);
            let size = c.edge_count();
            chosen.push(c);
            self.level(level + 1, avail & !cm, acc + size, chosen);
            chosen.pop();
        }
    }
}

fn enumerate_from(adj: &[u32], seq: &mut Vec<usize>, used: u32, out: &mut Vec<Component>) {
    let first = seq[0];
    let last = *seq.last().expect("nonempty");
    if seq.len() >= 2 && first < last {
        out.push(Component::Path(seq.clone()));
    }
    if seq.len() >= 3 && adj[last] & (1 << first) != 0 {
        let min = *seq.iter().min().expect("nonempty");
        if min == first && seq[1] < last {
            out.push(Component::Cycle(seq.clone()));
        }
    }
    let mut next = adj[last] & !used;
    while next != 0 {
        let w = next.trailing_zeros() as usize;
        next &= next - 1;
        seq.push(w);
        enumerate_from(adj, seq, used | (1 << w), out);
        seq.pop();
    }
}
