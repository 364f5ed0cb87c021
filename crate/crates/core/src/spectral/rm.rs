use super::{spectral_gap, RateMatrix, SpectralSummary};
use crate::error::{Error, Result};

/// The constants `alpha`, `gamma`, `b` of the RM class.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct RmParams {
    pub alpha: f64,
    pub gamma: f64,
    pub b: f64,
}

impl RmParams {
    pub fn new(alpha: f64, gamma: f64, b: f64) -> Result<Self> {
        if !(0.0..0.5).contains(&alpha) {
            return Err(Error::InvalidArgument(format!("alpha = {alpha} not in [0, 1/2)")));
        }
        if !(gamma > 0.0) || !(b > 0.0) {
            return Err(Error::InvalidArgument("gamma and b must be positive".into()));
        }
        Ok(Self { alpha, gamma, b })
    }
}

/// One inequality `lhs <= rhs`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct ConditionCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
    /// `rhs - lhs`; negative when the condition fails.
    pub margin: f64,
}

impl ConditionCheck {
    fn new(lhs: f64, rhs: f64) -> Self {
        // Relative slack for equality cases such as uniform hosts.
        let pass = lhs <= rhs * (1.0 + 1e-12) + 1e-300;
        Self { lhs, rhs, pass, margin: rhs - lhs }
    }
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct RmReport {
    pub params: RmParams,
    pub lambda: f64,
    pub d_min: f64,
    /// `λ(R) <= (n‖M‖)^{-alpha-gamma}`.
    pub lambda_condition: ConditionCheck,
    /// `d_R(V) <= b d n`.
    pub total_weight: ConditionCheck,
    /// Worst prefix for `sigma(A) <= b (|A|/n)^{1-2 alpha}`.
    pub heavy_sets: ConditionCheck,
    pub heavy_sets_worst_size: usize,
    /// `‖R‖ <= d n^{-gamma}`.
    pub max_entry: ConditionCheck,
    pub degenerate: bool,
}

impl RmReport {
    pub fn all_pass(&self) -> bool {
        self.lambda_condition.pass && self.total_weight.pass && self.heavy_sets.pass && self.max_entry.pass
    }
}

pub fn check_rm_membership(r: &RateMatrix, params: RmParams) -> Result<RmReport> {
    let summary = spectral_gap(r)?;
    Ok(check_rm_membership_with(r, params, &summary))
}

pub fn check_rm_membership_with(r: &RateMatrix, params: RmParams, summary: &SpectralSummary) -> RmReport {
    let n = r.n();
    let nf = n as f64;
    let d = r.min_row_sum();
    let lambda_condition = ConditionCheck::new(summary.lambda, summary.n_max_m.powf(-params.alpha - params.gamma));
    let total_weight = ConditionCheck::new(r.total(), params.b * d * nf);

    // Prefixes by descending d_R maximize sigma(A) at each cardinality.
    let mut sigma = summary.sigma.clone();
    sigma.sort_by(|a, b| b.total_cmp(a));
    let mut acc = 0.0;
    let mut worst = ConditionCheck::new(0.0, f64::INFINITY);
    let mut worst_size = 0;
    for (i, s) in sigma.iter().enumerate() {
        acc += s;
        let size = i + 1;
        let c = ConditionCheck::new(acc, params.b * (size as f64 / nf).powf(1.0 - 2.0 * params.alpha));
        if c.margin < worst.margin {
            worst = c;
            worst_size = size;
        }
    }
    let max_entry = ConditionCheck::new(r.max_entry(), d * nf.powf(-params.gamma));
    RmReport {
        params,
        lambda: summary.lambda,
        d_min: d,
        lambda_condition,
        total_weight,
        heavy_sets: worst,
        heavy_sets_worst_size: worst_size,
        max_entry,
        degenerate: summary.degenerate,
    }
}
