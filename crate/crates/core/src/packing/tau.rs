use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::packing::path::{OrientedPath, RotationWalk};

/// The relative `<=_P` order of a vertex sequence, or `⊥`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, serde::Serialize)]
pub enum TauPermutation {
    /// `perm[k]` is the 1-based index of the `k`-th smallest entry.
    Perm(Vec<usize>),
    Bottom,
}

impl TauPermutation {
    pub fn is_bottom(&self) -> bool {
        matches!(self, TauPermutation::Bottom)
    }
}

impl fmt::Display for TauPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TauPermutation::Bottom => write!(f, "⊥"),
            TauPermutation::Perm(p) => {
                let sep = if p.len() > 9 { " " } else { "" };
                let parts: Vec<String> = p.iter().map(usize::to_string).collect();
                write!(f, "({})", parts.join(sep))
            }
        }
    }
}

/// `tau(z)`: `⊥` if `z` repeats a vertex or leaves `P`.
pub fn tau_of_sequence(z: &[usize], p: &OrientedPath) -> TauPermutation {
    let mut seen = HashSet::new();
    let mut keyed = Vec::with_capacity(z.len());
    for (k, &v) in z.iter().enumerate() {
        if v >= p.n() || !seen.insert(v) {
            return TauPermutation::Bottom;
        }
        match p.position(v) {
            Some(i) => keyed.push((i, k + 1)),
            None => return TauPermutation::Bottom,
        }
    }
    keyed.sort_unstable();
    TauPermutation::Perm(keyed.into_iter().map(|(_, k)| k).collect())
}

fn check_alternating(w: &[usize], p: &OrientedPath, name: &str) -> Result<()> {
    if let Some(&v) = w.iter().find(|&&v| v >= p.n()) {
        return Err(Error::InvalidWalk(format!("{name}: vertex {v} out of range")));
    }
    for t in (1..w.len().saturating_sub(1)).step_by(2) {
        if !p.has_path_edge(w[t], w[t + 1]) {
            return Err(Error::InvalidWalk(format!(
                "{name} is not P-alternating at ({},{})",
                w[t],
                w[t + 1]
            )));
        }
    }
    Ok(())
}

/// `tau(X, Y)` for `X = (x, x_1..x_i)` from the first vertex of `P` and
/// `Y = (y, y_1..y_2j)` from its last.
///
/// Besides the two rules on `z`, any vertex repeated across `X ∪ Y`,
/// anchors included, gives `⊥`.
pub fn tau_of(x_walk: &[usize], y_walk: &[usize], p: &OrientedPath) -> Result<TauPermutation> {
    if p.is_empty() {
        return Err(Error::InvalidArgument("empty path".into()));
    }
    if x_walk.first() != Some(&p.first()) {
        return Err(Error::InvalidWalk("X must start at the first vertex of P".into()));
    }
    if y_walk.first() != Some(&p.last()) {
        return Err(Error::InvalidWalk("Y must start at the last vertex of P".into()));
    }
    if y_walk.len().is_multiple_of(2) {
        return Err(Error::InvalidWalk("Y must have even length".into()));
    }
    check_alternating(x_walk, p, "X")?;
    check_alternating(y_walk, p, "Y")?;
    let mut seen = HashSet::new();
    if !x_walk.iter().chain(y_walk).all(|v| seen.insert(*v)) {
        return Ok(TauPermutation::Bottom);
    }
    let x_len = x_walk.len() - 1;
    if x_len % 2 == 1 {
        let fx = *x_walk.last().expect("nonempty");
        if y_walk.iter().any(|&y| p.path_neighbors(y).contains(&fx)) {
            return Ok(TauPermutation::Bottom);
        }
    }
    let z: Vec<usize> = y_walk[1..].iter().chain(&x_walk[1..]).copied().collect();
    Ok(tau_of_sequence(&z, p))
}

/// `r_{P,Y}(X) = (X, v)`: for odd-length `X`, the vertex `v` that becomes the
/// endpoint when `P △ Y`, oriented to end at `x`, is rotated along `X`.
pub fn rotation_successor(x_walk: &[usize], y_walk: &[usize], p: &OrientedPath) -> Result<Vec<usize>> {
    if !x_walk.len().is_multiple_of(2) {
        return Err(Error::InvalidWalk("X must have odd length".into()));
    }
    let q = RotationWalk::new(y_walk.to_vec()).apply(p, None)?.reversed();
    let prefix = &x_walk[..x_walk.len() - 1];
    let cur = RotationWalk::new(prefix.to_vec()).apply(&q, None)?;
    let pivot = *x_walk.last().expect("nonempty");
    let i = cur
        .position(pivot)
        .ok_or_else(|| Error::InvalidWalk(format!("{pivot} is off the path")))?;
    if i + 1 >= cur.len() {
        return Err(Error::InvalidRotation("pivot adjacent to the endpoint".into()));
    }
    let mut out = x_walk.to_vec();
    out.push(cur.vertices()[i + 1]);
    Ok(out)
}
