use std::collections::{HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::graph::{canon, Edge, Graph};

/// A directed simple path `v_0 .. v_l` with the order `<=_P` on all vertices.
///
/// Off-path vertices are ranked after the path, by index ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrientedPath {
    n: usize,
    vertices: Vec<usize>,
    pos: Vec<usize>,
}

const OFF: usize = usize::MAX;

impl OrientedPath {
    /// Path on `n` ambient vertices; checks distinctness only.
    pub fn new(n: usize, vertices: Vec<usize>) -> Result<Self> {
        let mut pos = vec![OFF; n];
        for (i, &v) in vertices.iter().enumerate() {
            if v >= n {
                return Err(Error::InvalidArgument(format!("vertex {v} out of range")));
            }
            if pos[v] != OFF {
                return Err(Error::InvalidArgument(format!("vertex {v} repeated")));
            }
            pos[v] = i;
        }
        Ok(Self { n, vertices, pos })
    }

    /// Path that must also follow edges of `g`.
    pub fn in_graph(g: &Graph, vertices: Vec<usize>) -> Result<Self> {
        let p = Self::new(g.n(), vertices)?;
        if let Some(w) = p.vertices.windows(2).find(|w| !g.has_edge(w[0], w[1])) {
            return Err(Error::InvalidArgument(format!("({},{}) is not an edge", w[0], w[1])));
        }
        Ok(p)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    /// Number of edges `l`.
    pub fn len(&self) -> usize {
        self.vertices.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn first(&self) -> usize {
        self.vertices[0]
    }

    /// `f(P)`, the final vertex.
    pub fn last(&self) -> usize {
        *self.vertices.last().expect("nonempty path")
    }

    pub fn position(&self, v: usize) -> Option<usize> {
        (self.pos[v] != OFF).then_some(self.pos[v])
    }

    pub fn contains(&self, v: usize) -> bool {
        self.pos[v] != OFF
    }

    /// Rank of `v` under `<=_P`.
    pub fn rank(&self, v: usize) -> usize {
        if self.pos[v] != OFF {
            self.pos[v]
        } else {
            self.vertices.len() + (0..v).filter(|&u| self.pos[u] == OFF).count()
        }
    }

    pub fn edges(&self) -> Vec<Edge> {
        self.vertices.windows(2).map(|w| canon(w[0], w[1])).collect()
    }

    pub fn has_path_edge(&self, u: usize, v: usize) -> bool {
        match (self.position(u), self.position(v)) {
            (Some(a), Some(b)) => a.abs_diff(b) == 1,
            _ => false,
        }
    }

    /// `N_P(v)`: path neighbours of `v`.
    pub fn path_neighbors(&self, v: usize) -> Vec<usize> {
        let Some(i) = self.position(v) else {
            return Vec::new();
        };
        let mut out = Vec::with_capacity(2);
        if i > 0 {
            out.push(self.vertices[i - 1]);
        }
        if i + 1 < self.vertices.len() {
            out.push(self.vertices[i + 1]);
        }
        out
    }

    pub fn reversed(&self) -> Self {
        let mut v = self.vertices.clone();
        v.reverse();
        Self::new(self.n, v).expect("same vertices")
    }

    /// `(v_0..v_i, v_l..v_{i+1})` without any precondition on `i`.
    pub(crate) fn rotated_at(&self, i: usize) -> Self {
        let mut v = self.vertices.clone();
        v[i + 1..].reverse();
        Self::new(self.n, v).expect("same vertices")
    }
}

/// Posa rotation with pivot edge `{f(P), v_i}`, `0 < i < l - 1`.
pub fn rotate(g: &Graph, p: &OrientedPath, pivot: Edge) -> Result<OrientedPath> {
    let end = p.last();
    let other = if pivot.0 == end {
        pivot.1
    } else if pivot.1 == end {
        pivot.0
    } else {
        return Err(Error::InvalidRotation("pivot does not contain the endpoint".into()));
    };
    let i = p
        .position(other)
        .ok_or_else(|| Error::InvalidRotation(format!("pivot vertex {other} is off the path")))?;
    let l = p.len();
    if i + 1 >= l {
        return Err(Error::InvalidRotation("pivot adjacent to the endpoint".into()));
    }
    if i == 0 {
        return Err(Error::InvalidRotation("pivot at the start closes a cycle".into()));
    }
    if !g.has_edge(end, other) {
        return Err(Error::InvalidRotation(format!("({end},{other}) is not an edge")));
    }
    Ok(p.rotated_at(i))
}

/// Even-length rotation walk `w_0 = f(P), w_1, .., w_{2i}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RotationWalk {
    pub vertices: Vec<usize>,
}

impl RotationWalk {
    pub fn new(vertices: Vec<usize>) -> Self {
        Self { vertices }
    }

    /// `P △ W`, checking that `W` is a rotation walk for `P`.
    ///
    /// The walk must start at `f(P)`, repeat no vertex, have its odd-position
    /// edges on `P`, and each pair `(w_{2t+1}, w_{2t+2})` must be the edge
    /// removed by the rotation at pivot `w_{2t+1}`. When `g` is given the
    /// even-position edges must belong to it.
    pub fn apply(&self, p: &OrientedPath, g: Option<&Graph>) -> Result<OrientedPath> {
        let w = &self.vertices;
        if w.is_empty() || w[0] != p.last() {
            return Err(Error::InvalidWalk("walk must start at the path endpoint".into()));
        }
        if w.len().is_multiple_of(2) {
            return Err(Error::InvalidWalk("rotation walks have even length".into()));
        }
        let mut seen = HashSet::new();
        if !w.iter().all(|v| seen.insert(*v)) {
            return Err(Error::InvalidWalk("walk repeats a vertex".into()));
        }
        let mut cur = p.clone();
        for t in 0..w.len() / 2 {
            let (a, b, c) = (w[2 * t], w[2 * t + 1], w[2 * t + 2]);
            if !p.has_path_edge(b, c) {
                return Err(Error::InvalidWalk(format!("odd edge ({b},{c}) is not on P")));
            }
            if g.is_some_and(|g| !g.has_edge(a, b)) {
                return Err(Error::InvalidWalk(format!("({a},{b}) is not an edge")));
            }
            let i = cur
                .position(b)
                .ok_or_else(|| Error::InvalidWalk(format!("{b} is off the path")))?;
            if i + 1 >= cur.len() || cur.vertices[i + 1] != c {
                return Err(Error::InvalidWalk(format!("({b},{c}) is not removed by rotating at {b}")));
            }
            cur = cur.rotated_at(i);
        }
        Ok(cur)
    }
}

/// All rotation walks of length `2 * half` for `P` inside `g`.
pub fn enumerate_rotation_walks(g: &Graph, p: &OrientedPath, half: usize) -> Vec<RotationWalk> {
    let mut out = Vec::new();
    let mut walk = vec![p.last()];
    extend_walks(g, p, p, half, &mut walk, &mut out);
    out
}

fn extend_walks(g: &Graph, orig: &OrientedPath, cur: &OrientedPath, half: usize, walk: &mut Vec<usize>, out: &mut Vec<RotationWalk>) {
    if walk.len() == 2 * half + 1 {
        out.push(RotationWalk::new(walk.clone()));
        return;
    }
    let end = cur.last();
    for &b in g.neighbors(end) {
        let Some(i) = cur.position(b) else { continue };
        if i + 1 >= cur.len() {
            continue;
        }
        let c = cur.vertices[i + 1];
        if walk.contains(&b) || walk.contains(&c) || !orig.has_path_edge(b, c) {
            continue;
        }
        let next = cur.rotated_at(i);
        walk.push(b);
        walk.push(c);
        extend_walks(g, orig, &next, half, walk, out);
        walk.truncate(walk.len() - 2);
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RotationClosure {
    /// Endpoints of all paths reachable from `P` by rotations with `v_0` fixed.
    pub endpoints: Vec<usize>,
    /// Whether some reachable path can be extended at its endpoint.
    pub extendable: bool,
    pub paths_visited: usize,
}

/// Breadth-first closure of `P` under rotations at the final endpoint.
pub fn rotation_closure(g: &Graph, p: &OrientedPath, max_paths: usize) -> RotationClosure {
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut ends = HashSet::new();
    let mut queue = VecDeque::new();
    let mut extendable = false;
    seen.insert(p.vertices.clone());
    queue.push_back(p.clone());
    while let Some(cur) = queue.pop_front() {
        let end = cur.last();
        ends.insert(end);
        for &b in g.neighbors(end) {
            match cur.position(b) {
                None => extendable = true,
                Some(i) if i + 1 < cur.len() => {
                    let next = cur.rotated_at(i);
                    if seen.len() < max_paths && seen.insert(next.vertices.clone()) {
                        queue.push_back(next);
                    }
                }
                _ => {}
            }
        }
    }
    let mut endpoints: Vec<usize> = ends.into_iter().collect();
    endpoints.sort_unstable();
    RotationClosure {
        endpoints,
        extendable,
        paths_visited: seen.len(),
    }
}
