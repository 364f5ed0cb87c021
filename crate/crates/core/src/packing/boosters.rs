use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{canon, heavy_vertices, longest_path_or_cycle, Edge, Graph};
use crate::numeric::CompensatedSum;
use crate::packing::matching::maximum_matching;
use crate::spectral::RateMatrix;

pub const AUGMENTING_CAP: usize = 14;
pub const PATH_CAP: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum BoosterKind {
    /// Raises the matching number `s_1`.
    Augmenting,
    /// Raises `s_2`, the longest path or cycle.
    Path,
}

impl BoosterKind {
    fn name(self) -> &'static str {
        match self {
            BoosterKind::Augmenting => "augmenting",
            BoosterKind::Path => "path",
        }
    }

    fn cap(self) -> usize {
        match self {
            BoosterKind::Augmenting => AUGMENTING_CAP,
            BoosterKind::Path => PATH_CAP,
        }
    }

    fn value(self, g: &Graph) -> usize {
        match self {
            BoosterKind::Augmenting => maximum_matching(g).len(),
            BoosterKind::Path => longest_path_or_cycle(g).expect("within cap").edge_count(),
        }
    }

    fn saturated(self, n: usize) -> usize {
        match self {
            BoosterKind::Augmenting => n / 2,
            BoosterKind::Path => n,
        }
    }
}

/// All `r`-edge boosters of one kind, with their total rate weight.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct BoosterFamily {
    pub kind: BoosterKind,
    pub r: usize,
    pub sets: Vec<Vec<Edge>>,
    /// `sum_T prod_{uv in T} R(u, v)`.
    pub weight: f64,
    /// `s_i(G)` before boosting.
    pub base_value: usize,
    /// `G` was already saturated, so no booster can exist.
    pub vacuous: bool,
}

impl BoosterFamily {
    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(
            s,
            "boosters kind={} r={} base={} vacuous={} weight={:.16e}",
            self.kind.name(),
            self.r,
            self.base_value,
            self.vacuous,
            self.weight
        )
        .unwrap();
        for t in &self.sets {
            let parts: Vec<String> = t.iter().map(|(u, v)| format!("{u}-{v}")).collect();
            writeln!(s, "set {}", parts.join(" ")).unwrap();
        }
        s.push_str("end\n");
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let err = |line: usize, msg: &str| Error::Parse { line: line + 1, msg: msg.to_string() };
        let (hl, header) = lines.next().ok_or_else(|| err(0, "empty input"))?;
        let mut fields = header.split_whitespace();
        if fields.next() != Some("boosters") {
            return Err(err(hl, "expected 'boosters' header"));
        }
        let (mut kind, mut r, mut base, mut vacuous, mut weight) = (None, None, None, None, None);
        for f in fields {
            let (k, v) = f.split_once('=').ok_or_else(|| err(hl, "expected key=value"))?;
            let bad = || err(hl, &format!("bad value for {k}"));
            match k {
                "kind" => {
                    kind = Some(match v {
                        "augmenting" => BoosterKind::Augmenting,
                        "path" => BoosterKind::Path,
                        _ => return Err(bad()),
                    })
                }
                "r" => r = Some(v.parse().map_err(|_| bad())?),
                "base" => base = Some(v.parse().map_err(|_| bad())?),
                "vacuous" => vacuous = Some(v.parse().map_err(|_| bad())?),
                "weight" => weight = Some(v.parse().map_err(|_| bad())?),
                _ => return Err(err(hl, &format!("unknown key {k}"))),
            }
        }
        let missing = |name: &str| err(hl, &format!("missing {name}"));
        let mut family = BoosterFamily {
            kind: kind.ok_or_else(|| missing("kind"))?,
            r: r.ok_or_else(|| missing("r"))?,
            sets: Vec::new(),
            weight: weight.ok_or_else(|| missing("weight"))?,
            base_value: base.ok_or_else(|| missing("base"))?,
            vacuous: vacuous.ok_or_else(|| missing("vacuous"))?,
        };
        for (i, line) in lines {
            let mut tok = line.split_whitespace();
            match tok.next() {
                Some("end") => return Ok(family),
                Some("set") => {
                    let set = tok
                        .map(|e| {
                            let (u, v) = e.split_once('-').ok_or_else(|| err(i, "expected u-v"))?;
                            let u = u.parse().map_err(|_| err(i, "bad vertex"))?;
                            let v = v.parse().map_err(|_| err(i, "bad vertex"))?;
                            Ok((u, v))
                        })
                        .collect::<Result<Vec<Edge>>>()?;
                    if set.len() != family.r {
                        return Err(err(i, "set size differs from r"));
                    }
                    family.sets.push(set);
                }
                _ => return Err(err(i, "expected 'set' or 'end'")),
            }
        }
        Err(err(text.lines().count(), "missing 'end'"))
    }
}

/// Pairs outside `G` with positive rate and both ends outside `S_theta`.
pub fn booster_candidates(g: &Graph, r: &RateMatrix, theta: f64) -> Vec<Edge> {
    let n = g.n();
    let mut heavy = vec![false; n];
    for v in heavy_vertices(g, r, theta) {
        heavy[v] = true;
    }
    let mut out = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if !heavy[u] && !heavy[v] && !g.has_edge(u, v) && r.get(u, v) > 0.0 {
                out.push(canon(u, v));
            }
        }
    }
    out
}

/// Exhaustive booster enumeration for small `n`.
pub fn enumerate_boosters(g: &Graph, rates: &RateMatrix, kind: BoosterKind, r: usize, theta: f64) -> Result<BoosterFamily> {
    let n = g.n();
    if n > kind.cap() {
        return Err(Error::TooLarge { n, cap: kind.cap() });
    }
    if rates.n() != n {
        return Err(Error::InvalidArgument(format!("rate matrix has {} vertices, graph {n}", rates.n())));
    }
    if r == 0 {
        return Err(Error::InvalidArgument("r must be positive".into()));
    }
    let base = kind.value(g);
    let mut family = BoosterFamily {
        kind,
        r,
        sets: Vec::new(),
        weight: 0.0,
        base_value: base,
        vacuous: base >= kind.saturated(n),
    };
    if family.vacuous {
        return Ok(family);
    }
    let cand = booster_candidates(g, rates, theta);
    let mut weight = CompensatedSum::new();
    let mut h = g.clone();
    let mut idx = Vec::with_capacity(r);
    combinations(cand.len(), r, &mut idx, 0, &mut |idx| {
        for &i in idx {
            h.add_edge(cand[i].0, cand[i].1);
        }
        if kind.value(&h) > base {
            let set: Vec<Edge> = idx.iter().map(|&i| cand[i]).collect();
            weight.add(set.iter().map(|&(u, v)| rates.get(u, v)).product());
            family.sets.push(set);
        }
        for &i in idx {
            h.remove_edge(cand[i].0, cand[i].1);
        }
    });
    family.weight = weight.value();
    Ok(family)
}

pub fn enumerate_augmenting_boosters(g: &Graph, rates: &RateMatrix, r: usize, theta: f64) -> Result<BoosterFamily> {
    enumerate_boosters(g, rates, BoosterKind::Augmenting, r, theta)
}

pub fn enumerate_path_boosters(g: &Graph, rates: &RateMatrix, r: usize, theta: f64) -> Result<BoosterFamily> {
    enumerate_boosters(g, rates, BoosterKind::Path, r, theta)
}

/// The first `r` in `1..=r_max` with a nonempty family; `None` if vacuous or none found.
pub fn smallest_booster_family(
    g: &Graph,
    rates: &RateMatrix,
    kind: BoosterKind,
    r_max: usize,
    theta: f64,
) -> Result<Option<BoosterFamily>> {
    for r in 1..=r_max {
        let fam = enumerate_boosters(g, rates, kind, r, theta)?;
        if fam.vacuous {
            return Ok(None);
        }
        if !fam.is_empty() {
            return Ok(Some(fam));
        }
    }
    Ok(None)
}

/// Calls `f` on each increasing `r`-subset of `0..m`.
fn combinations(m: usize, r: usize, idx: &mut Vec<usize>, from: usize, f: &mut impl FnMut(&[usize])) {
    if idx.len() == r {
        f(idx);
        return;
    }
    let need = r - idx.len();
    for i in from..=m.saturating_sub(need) {
        if i >= m {
            break;
        }
        idx.push(i);
        combinations(m, r, idx, i + 1, f);
        idx.pop();
    }
}
