use std::collections::HashSet;
use std::fmt;

use super::{canon, Edge, Graph};
use crate::error::{Error, Result};

/// A path or cycle given by its vertex sequence.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub enum Component {
    /// `v_0 .. v_l`, `l` edges; a single vertex is the empty path.
    Path(Vec<usize>),
    /// `v_0 .. v_{m-1}` closed by `v_{m-1} v_0`.
    Cycle(Vec<usize>),
}

impl Component {
    pub fn vertices(&self) -> &[usize] {
        match self {
            Component::Path(v) | Component::Cycle(v) => v,
        }
    }

    pub fn edges(&self) -> Vec<Edge> {
        match self {
            Component::Path(v) => v.windows(2).map(|w| canon(w[0], w[1])).collect(),
            Component::Cycle(v) => {
                let m = v.len();
                (0..m).map(|i| canon(v[i], v[(i + 1) % m])).collect()
            }
        }
    }

    pub fn edge_count(&self) -> usize {
        match self {
            Component::Path(v) => v.len().saturating_sub(1),
            Component::Cycle(v) => v.len(),
        }
    }

    /// Recovers a path or cycle from an unordered edge set.
    pub fn from_edges(edges: &[Edge]) -> Result<Component> {
        if edges.is_empty() {
            return Ok(Component::Path(Vec::new()));
        }
        let mut adj: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        let mut seen = HashSet::new();
        for &(u, v) in edges {
            if u == v || !seen.insert(canon(u, v)) {
                return Err(Error::InvalidArgument(format!("bad or repeated edge ({u},{v})")));
            }
            adj.entry(u).or_default().push(v);
            adj.entry(v).or_default().push(u);
        }
        if let Some((&v, _)) = adj.iter().find(|(_, nb)| nb.len() > 2) {
            return Err(Error::InvalidArgument(format!("vertex {v} has degree > 2")));
        }
        let start = adj
            .iter()
            .find(|(_, nb)| nb.len() == 1)
            .map(|(&v, _)| v)
            .unwrap_or(*adj.keys().next().expect("nonempty"));
        let is_cycle = adj.values().all(|nb| nb.len() == 2);
        let mut seq = vec![start];
        let mut prev: Option<usize> = None;
        let mut cur = start;
        while let Some(w) = adj[&cur].iter().copied().find(|&w| Some(w) != prev) {
            if w == start || seq.len() > edges.len() {
                break;
            }
            seq.push(w);
            prev = Some(cur);
            cur = w;
        }
        let comp = if is_cycle { Component::Cycle(seq) } else { Component::Path(seq) };
        if comp.edge_count() != edges.len() || comp.vertices().len() != adj.len() {
            return Err(Error::InvalidArgument("edge set is not connected".into()));
        }
        Ok(comp)
    }
}

/// Candidate certificate: `⌊k/2⌋` paths or cycles plus a matching when `k` is odd.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct KGraph {
    pub k: usize,
    pub components: Vec<Component>,
    pub matching: Option<Vec<Edge>>,
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub enum Violation {
    ComponentCount { expected: usize, found: usize },
    MatchingPresence { expected: bool },
    VertexOutOfRange { vertex: usize },
    RepeatedVertex { component: usize, vertex: usize },
    ShortCycle { component: usize },
    SharedEdge { edge: Edge },
    MatchingDegree { vertex: usize },
    EdgeNotInGraph { edge: Edge },
    EdgeDeficit { expected: usize, found: usize },
    NotHamiltonian { component: usize, vertices: usize },
    MatchingTooSmall { expected: usize, found: usize },
    WrongK { expected: usize, found: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificateCheck {
    pub accepted: bool,
    pub violations: Vec<Violation>,
}

impl KGraph {
    pub fn new(k: usize, components: Vec<Component>, matching: Option<Vec<Edge>>) -> Self {
        Self { k, components, matching }
    }

    pub fn edges(&self) -> Vec<Edge> {
        let mut out: Vec<Edge> = self.components.iter().flat_map(Component::edges).collect();
        if let Some(m) = &self.matching {
            out.extend(m.iter().map(|&(u, v)| canon(u, v)));
        }
        out
    }

    /// Structural problems that stop this from being a k-graph on `n` vertices.
    pub fn structural_violations(&self, n: usize) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.components.len() != self.k / 2 {
            out.push(Violation::ComponentCount {
                expected: self.k / 2,
                found: self.components.len(),
            });
        }
        if self.matching.is_some() != (self.k % 2 == 1) {
            out.push(Violation::MatchingPresence { expected: self.k % 2 == 1 });
        }
        for (i, c) in self.components.iter().enumerate() {
            let mut seen = HashSet::new();
            for &v in c.vertices() {
                if v >= n {
                    out.push(Violation::VertexOutOfRange { vertex: v });
                } else if !seen.insert(v) {
                    out.push(Violation::RepeatedVertex { component: i, vertex: v });
                }
            }
            if matches!(c, Component::Cycle(v) if v.len() < 3) {
                out.push(Violation::ShortCycle { component: i });
            }
        }
        if let Some(m) = &self.matching {
            let mut deg = HashSet::new();
            for &(u, v) in m {
                for x in [u, v] {
                    if x >= n {
                        out.push(Violation::VertexOutOfRange { vertex: x });
                    } else if !deg.insert(x) {
                        out.push(Violation::MatchingDegree { vertex: x });
                    }
                }
            }
        }
        let mut seen = HashSet::new();
        for e in self.edges() {
            if !seen.insert(e) {
                out.push(Violation::SharedEdge { edge: e });
            }
        }
        out
    }

    /// Labeled block text:
    ///
    /// ```text
    /// kgraph 3
    /// cycle 0 1 2 3
    /// matching 0-2 1-3
    /// end
    /// ```
    pub fn to_text(&self) -> String {
        let mut s = format!("kgraph {}\n", self.k);
        for c in &self.components {
            let (tag, vs) = match c {
                Component::Path(v) => ("path", v),
                Component::Cycle(v) => ("cycle", v),
            };
            let body: Vec<String> = vs.iter().map(usize::to_string).collect();
            s.push_str(tag);
            if !body.is_empty() {
                s.push(' ');
                s.push_str(&body.join(" "));
            }
            s.push('\n');
        }
        if let Some(m) = &self.matching {
            s.push_str("matching");
            for (u, v) in m {
                s.push_str(&format!(" {u}-{v}"));
            }
            s.push('\n');
        }
        s.push_str("end\n");
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut k = None;
        let mut components = Vec::new();
        let mut matching = None;
        let mut ended = false;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let l = raw.trim();
            if l.is_empty() || l.starts_with('#') {
                continue;
            }
            if ended {
                return Err(Error::Parse { line, msg: "content after end".into() });
            }
            let mut toks = l.split_whitespace();
            let tag = toks.next().unwrap_or("");
            let bad = |msg: &str| Error::Parse { line, msg: msg.to_string() };
            match tag {
                "kgraph" => {
                    k = Some(toks.next().and_then(|t| t.parse().ok()).ok_or_else(|| bad("bad k"))?);
                }
                "path" | "cycle" => {
                    let vs: Vec<usize> = toks
                        .map(|t| t.parse().map_err(|_| bad("bad vertex")))
                        .collect::<Result<_>>()?;
                    components.push(if tag == "path" { Component::Path(vs) } else { Component::Cycle(vs) });
                }
                "matching" => {
                    let es: Vec<Edge> = toks
                        .map(|t| {
                            let (a, b) = t.split_once('-').ok_or_else(|| bad("bad matching edge"))?;
                            Ok((a.parse().map_err(|_| bad("bad vertex"))?, b.parse().map_err(|_| bad("bad vertex"))?))
                        })
                        .collect::<Result<_>>()?;
                    matching = Some(es);
                }
                "end" => ended = true,
                _ => return Err(bad("unknown block label")),
            }
        }
        let k = k.ok_or(Error::Parse { line: 1, msg: "missing kgraph header".into() })?;
        Ok(Self { k, components, matching })
    }
}

/// `|F|`, the number of edges of the k-graph.
pub fn s_k_size(f: &KGraph) -> usize {
    f.components.iter().map(Component::edge_count).sum::<usize>() + f.matching.as_ref().map_or(0, Vec::len)
}

/// Accepts iff `F ⊆ G` witnesses property `A_k`.
pub fn is_certificate_for_a_k(g: &Graph, f: &KGraph, k: usize) -> CertificateCheck {
    let n = g.n();
    let mut violations = Vec::new();
    if f.k != k {
        violations.push(Violation::WrongK { expected: k, found: f.k });
    }
    violations.extend(f.structural_violations(n));
    for e in f.edges() {
        if e.1 >= n || !g.has_edge(e.0, e.1) {
            violations.push(Violation::EdgeNotInGraph { edge: e });
        }
    }
    let size = s_k_size(f);
    if size != k * n / 2 {
        violations.push(Violation::EdgeDeficit { expected: k * n / 2, found: size });
    }
    for (i, c) in f.components.iter().enumerate() {
        let ok = matches!(c, Component::Cycle(v) if v.len() == n);
        if !ok {
            violations.push(Violation::NotHamiltonian { component: i, vertices: c.vertices().len() });
        }
    }
    if let Some(m) = &f.matching {
        if m.len() != n / 2 {
            violations.push(Violation::MatchingTooSmall { expected: n / 2, found: m.len() });
        }
    }
    CertificateCheck {
        accepted: violations.is_empty(),
        violations,
    }
}
