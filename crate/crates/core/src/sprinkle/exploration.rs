use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::numeric::CompensatedSum;
use crate::sprinkle::instance::SprinkleInstance;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum ExplorationOutcome {
    Success,
    Failure,
    /// No useful element was left although neither stopping rule fired.
    Contradiction,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ExplorationStep {
    pub x: usize,
    pub included: bool,
    /// `p[Q(x) \ Q(S_{i-1})]` at selection time.
    pub gain: f64,
    /// `p[Q(S_i)]`.
    pub q_mass: f64,
    /// `p(Z_i)`.
    pub z_mass: f64,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ExplorationTrace {
    pub outcome: ExplorationOutcome,
    pub steps: Vec<ExplorationStep>,
    pub p_family: f64,
    pub delta: f64,
    pub p_x: f64,
    /// `p[T] / (3 Delta)`.
    pub success_threshold: f64,
    /// `p[T] / (3 Delta^(r-1))`.
    pub failure_threshold: f64,
    /// `p[T] / (3 p(X))`.
    pub useful_threshold: f64,
    /// `p[T] >= 6 Delta^(r-2) p(X)`.
    pub hypothesis: bool,
}

/// The exploration that reveals `S ⊆ X_p` one useful element at a time.
///
/// At each step the lowest-indexed `S`-useful element with positive
/// probability outside `Z` is queried; its coin is read from `xp`.
pub fn useful_exploration(inst: &SprinkleInstance, family: &[Vec<usize>], xp: &[bool]) -> Result<ExplorationTrace> {
    let r = inst.validate_family(family)?;
    if r < 2 {
        return Err(Error::Precondition("exploration needs paths on r > 1 vertices".into()));
    }
    if xp.len() != inst.len() {
        return Err(Error::InvalidArgument("sample mask has the wrong length".into()));
    }
    let p = inst.p();
    // Suffixes (x_2..x_r) get ids; q[x] lists the suffix ids of Q(x).
    let mut ids: HashMap<&[usize], usize> = HashMap::new();
    let mut suffix_mass = Vec::new();
    let mut q: Vec<Vec<usize>> = vec![Vec::new(); inst.len()];
    for t in family {
        let suffix = &t[1..];
        let id = *ids.entry(suffix).or_insert_with(|| {
            suffix_mass.push(inst.p_prod(suffix));
            suffix_mass.len() - 1
        });
        q[t[0]].push(id);
    }
    for list in &mut q {
        list.sort_unstable();
        list.dedup();
    }

    let p_family = inst.p_family(family);
    let delta = inst.delta();
    let p_x = inst.p_total();
    let success_threshold = p_family / (3.0 * delta);
    let failure_threshold = p_family / (3.0 * delta.powi(r as i32 - 1));
    let useful_threshold = p_family / (3.0 * p_x);
    let hypothesis = p_family >= 6.0 * delta.powi(r as i32 - 2) * p_x;

    let mut covered = vec![false; suffix_mass.len()];
    let mut in_z = vec![false; inst.len()];
    let mut q_mass = CompensatedSum::new();
    let mut z_mass = CompensatedSum::new();
    let mut steps = Vec::new();
    let gain = |x: usize, covered: &[bool]| -> f64 {
        q[x].iter().filter(|&&id| !covered[id]).map(|&id| suffix_mass[id]).sum()
    };
    let outcome = loop {
        // No member of the family can ever be present.
        if p_family == 0.0 {
            break ExplorationOutcome::Failure;
        }
        if q_mass.value() >= success_threshold {
            break ExplorationOutcome::Success;
        }
        if z_mass.value() >= failure_threshold {
            break ExplorationOutcome::Failure;
        }
        let pick = (0..inst.len()).find(|&x| !in_z[x] && p[x] > 0.0 && gain(x, &covered) >= useful_threshold);
        let Some(x) = pick else {
            break ExplorationOutcome::Contradiction;
        };
        let g = gain(x, &covered);
        in_z[x] = true;
        z_mass.add(p[x]);
        if xp[x] {
            for &id in &q[x] {
                if !covered[id] {
                    covered[id] = true;
                    q_mass.add(suffix_mass[id]);
                }
            }
        }
        steps.push(ExplorationStep {
            x,
            included: xp[x],
            gain: g,
            q_mass: q_mass.value(),
            z_mass: z_mass.value(),
        });
    };
    Ok(ExplorationTrace {
        outcome,
        steps,
        p_family,
        delta,
        p_x,
        success_threshold,
        failure_threshold,
        useful_threshold,
        hypothesis,
    })
}
