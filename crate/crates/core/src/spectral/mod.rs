//! Rate matrices, transition matrices, stationary distributions, eigenvalues,
//! `gamma_k`, and the finite-n checks behind the RM class.

mod eigen;
mod rates;
mod rm;

pub use eigen::{extreme_eigenvalues, symmetrized, EigenMethod, ExtremeEigenvalues, DENSE_LIMIT};
pub use rates::RateMatrix;
pub use rm::{check_rm_membership, check_rm_membership_with, ConditionCheck, RmParams, RmReport};

use crate::error::{Error, Result};
use crate::numeric::{compensated_sum, CompensatedSum};

/// Eigenvalue convergence tolerance for the iterative solver.
pub const EIGEN_TOL: f64 = 1e-8;

/// Row-stochastic matrix `M(u,v) = R(u,v) / d_R(u)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionMatrix {
    n: usize,
    entries: Vec<f64>,
    max_entry: f64,
}

impl TransitionMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, u: usize, v: usize) -> f64 {
        self.entries[u * self.n + v]
    }

    pub fn row(&self, u: usize) -> &[f64] {
        &self.entries[u * self.n..(u + 1) * self.n]
    }

    /// `‖M‖`.
    pub fn max_entry(&self) -> f64 {
        self.max_entry
    }

    /// `pi M` for a row vector `pi`.
    pub fn left_apply(&self, pi: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut out = vec![0.0; n];
        for (u, &p) in pi.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            for (o, m) in out.iter_mut().zip(self.row(u)) {
                *o += p * m;
            }
        }
        out
    }
}

pub fn transition_matrix(r: &RateMatrix) -> Result<TransitionMatrix> {
    let n = r.n();
    let mut entries = Vec::with_capacity(n * n);
    for u in 0..n {
        let d = r.row_sum(u);
        if d <= 0.0 {
            return Err(Error::ZeroRowSum { vertex: u });
        }
        entries.extend(r.row(u).iter().map(|x| x / d));
    }
    let max_entry = entries.iter().copied().fold(0.0, f64::max);
    Ok(TransitionMatrix { n, entries, max_entry })
}

/// `sigma(u) = d_R(u) / d_R(V)`.
pub fn stationary(r: &RateMatrix) -> Vec<f64> {
    let total = r.total();
    r.row_sums().iter().map(|d| d / total).collect()
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct SpectralSummary {
    /// `λ(R) = max(|λ_2|, |λ_n|)`, clamped to `[0, 1]`.
    pub lambda: f64,
    pub lambda_second: f64,
    pub lambda_smallest: f64,
    pub sigma: Vec<f64>,
    pub d_min: f64,
    /// `n ‖M‖`.
    pub n_max_m: f64,
    /// `mix(R)`, absent when `λ ≥ 1`.
    pub mix_length: Option<u64>,
    /// Set when `λ_2 = 1`, i.e. the support of `R` is disconnected.
    pub degenerate: bool,
    pub method: EigenMethod,
    pub iterations: usize,
}

pub fn spectral_gap(r: &RateMatrix) -> Result<SpectralSummary> {
    spectral_gap_with(r, None)
}

pub fn spectral_gap_with(r: &RateMatrix, method: Option<EigenMethod>) -> Result<SpectralSummary> {
    let ext = extreme_eigenvalues(r, method, EIGEN_TOL)?;
    let lambda = ext.second.abs().max(ext.smallest.abs()).min(1.0);
    let m = transition_matrix(r)?;
    let n_max_m = r.n() as f64 * m.max_entry();
    let lambda = if lambda > 1.0 - 1e-12 { 1.0 } else { lambda };
    Ok(SpectralSummary {
        lambda,
        lambda_second: ext.second,
        lambda_smallest: ext.smallest,
        sigma: stationary(r),
        d_min: r.min_row_sum(),
        n_max_m,
        mix_length: mix_length_from(lambda, n_max_m).ok(),
        degenerate: ext.second >= 1.0 - 1e-9,
        method: ext.method,
        iterations: ext.iterations,
    })
}

/// `ceil(2 - 2 ln(n‖M‖) / ln λ)`.
///
/// Values within `1e-9` of an integer are snapped before rounding up, so
/// exact substitutions such as `λ = (n‖M‖)^{-1/2}` give the exact integer.
pub fn mix_length_from(lambda: f64, n_max_m: f64) -> Result<u64> {
    if !(lambda < 1.0) {
        return Err(Error::MixUndefined { lambda });
    }
    if lambda <= 0.0 {
        return Ok(2);
    }
    let x = 2.0 - 2.0 * n_max_m.ln() / lambda.ln();
    let snapped = if (x - x.round()).abs() < 1e-9 { x.round() } else { x.ceil() };
    Ok(snapped.max(2.0) as u64)
}

pub fn mix_length(r: &RateMatrix) -> Result<u64> {
    let s = spectral_gap(r)?;
    mix_length_from(s.lambda, s.n_max_m)
}

/// `sum_u d^{k-1} e^{-d}` over the given row sums.
pub fn gamma_k_of_rows(rows: &[f64], k: u32) -> f64 {
    let mut s = CompensatedSum::new();
    for &d in rows {
        let term = if k == 1 {
            (-d).exp()
        } else {
            ((k - 1) as f64 * d.ln() - d).exp()
        };
        s.add(term);
    }
    s.value()
}

pub fn gamma_k(r: &RateMatrix, k: u32) -> f64 {
    gamma_k_of_rows(r.row_sums(), k)
}

/// Finds `x` with `gamma_1(xR) = 1` by bisection.
///
/// Every term `e^{-x d_u}` lies in `[1/n, 1]` at `x = ln n / d_max` and in
/// `[0, 1/n]` at `x = ln n / d_min`, so that interval always brackets the root.
pub fn normalize_to_rm1(r: &RateMatrix) -> Result<(f64, RateMatrix)> {
    let x = rm1_scale(r.row_sums())?;
    Ok((x, r.scaled(x)?))
}

pub fn rm1_scale(rows: &[f64]) -> Result<f64> {
    let n = rows.len() as f64;
    let dmin = rows.iter().copied().fold(f64::INFINITY, f64::min);
    let dmax = rows.iter().copied().fold(0.0, f64::max);
    if rows.is_empty() || dmin <= 0.0 {
        return Err(Error::InvalidRates("row sums must be positive".into()));
    }
    let g = |x: f64| {
        let scaled: Vec<f64> = rows.iter().map(|d| d * x).collect();
        gamma_k_of_rows(&scaled, 1)
    };
    let mut lo = n.ln() / dmax;
    let mut hi = n.ln() / dmin;
    if lo == hi {
        return Ok(lo);
    }
    let (glo, ghi) = (g(lo), g(hi));
    if glo < 1.0 - 1e-12 || ghi > 1.0 + 1e-12 {
        return Err(Error::BracketFailure { lo: ghi, hi: glo });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let gm = g(mid);
        if gm == 1.0 {
            return Ok(mid);
        }
        if gm > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `sqrt(sum pi^2 / sigma - 1)`.
pub fn mu_sigma(pi: &[f64], sigma: &[f64]) -> Result<f64> {
    if pi.len() != sigma.len() {
        return Err(Error::InvalidArgument("length mismatch".into()));
    }
    if let Some(v) = sigma.iter().position(|&s| s <= 0.0) {
        return Err(Error::ZeroStationaryMass { vertex: v });
    }
    for (name, d) in [("pi", pi), ("sigma", sigma)] {
        let total = compensated_sum(d.iter().copied());
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidArgument(format!("{name} sums to {total}")));
        }
    }
    Ok(mu_sigma_unchecked(pi, sigma))
}

pub(crate) fn mu_sigma_unchecked(pi: &[f64], sigma: &[f64]) -> f64 {
    let chi = compensated_sum(pi.iter().zip(sigma).map(|(p, s)| p * p / s));
    (chi - 1.0).max(0.0).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixingResidual {
    /// `M(A, B)`, ordered pairs, so pairs inside `A ∩ B` count twice.
    pub m_ab: f64,
    /// `|A| sigma(B)`.
    pub expected: f64,
    pub residual: f64,
    /// `λ sqrt(b n |A| sigma(B))` with `b = d_R(V) / (n d_min)`.
    pub bound: f64,
}

/// Expander mixing comparison for vertex sets `a` and `b`.
///
/// The bound holds for every reversible chain: writing `M - 1 sigma^T` in the
/// symmetrized basis and applying Cauchy-Schwarz gives
/// `|M(A,B) - |A| sigma(B)| <= λ sqrt(sum_A 1/d_u * sum_B d_u)`.
pub fn expander_mixing_residual(r: &RateMatrix, m: &TransitionMatrix, lambda: f64, a: &[usize], b: &[usize]) -> Result<MixingResidual> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::InvalidArgument("vertex sets must be nonempty".into()));
    }
    let n = r.n() as f64;
    let total = r.total();
    let sigma_b = compensated_sum(b.iter().map(|&v| r.row_sum(v))) / total;
    let mut s = CompensatedSum::new();
    for &u in a {
        for &v in b {
            s.add(m.get(u, v));
        }
    }
    let m_ab = s.value();
    let expected = a.len() as f64 * sigma_b;
    let bconst = total / (n * r.min_row_sum());
    Ok(MixingResidual {
        m_ab,
        expected,
        residual: (m_ab - expected).abs(),
        bound: lambda * (bconst * n * a.len() as f64 * sigma_b).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transition_rows_follow_direct_formula() {
        let r = RateMatrix::new(3, vec![0., 1., 2., 1., 0., 0., 2., 0., 0.]).unwrap();
        let m = transition_matrix(&r).unwrap();
        assert_eq!(r.row_sums(), &[3.0, 1.0, 2.0]);
        assert!((m.get(0, 1) - 1.0 / 3.0).abs() < 1e-15);
        assert!((m.get(0, 2) - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(m.get(0, 0), 0.0);
    }

    #[test]
    fn complete_graph_spectrum() {
        for n in [3usize, 7, 20] {
            let r = RateMatrix::complete(n, 1.0).unwrap();
            let s = spectral_gap(&r).unwrap();
            assert!((s.lambda - 1.0 / (n as f64 - 1.0)).abs() < 1e-12, "n={n}");
            assert!(!s.degenerate);
        }
    }

    #[test]
    fn mix_length_substitutions() {
        assert_eq!(mix_length_from(0.3, 1.0).unwrap(), 2);
        for nm in [2.0f64, 10.0, 123.4] {
            assert_eq!(mix_length_from(nm.powf(-0.5), nm).unwrap(), 6);
        }
        assert_eq!(mix_length_from(0.0, 5.0).unwrap(), 2);
        assert!(mix_length_from(1.0, 5.0).is_err());
    }

    #[test]
    fn mix_length_of_k20_matches_hand_evaluation() {
        let r = RateMatrix::complete(20, 1.0).unwrap();
        let lambda: f64 = 1.0 / 19.0;
        let nm: f64 = 20.0 / 19.0;
        let expected = (2.0 - 2.0 * nm.ln() / lambda.ln()).ceil() as u64;
        assert_eq!(mix_length(&r).unwrap(), expected);
        assert_eq!(expected, 3);
    }

    #[test]
    fn gamma_heterogeneous_rows() {
        let g = gamma_k_of_rows(&[2.0, 3.0, 5.0], 2);
        let e = 2.0 * (-2.0f64).exp() + 3.0 * (-3.0f64).exp() + 5.0 * (-5.0f64).exp();
        assert!((g - e).abs() < 1e-15);
        let n = 1000usize;
        let d = (n as f64).ln();
        assert!((gamma_k_of_rows(&vec![d; n], 1) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rm1_closed_form_for_constant_rows() {
        let r = RateMatrix::complete(50, 0.7).unwrap();
        let (x, scaled) = normalize_to_rm1(&r).unwrap();
        let d = 49.0 * 0.7;
        assert!((x - (50f64).ln() / d).abs() < 1e-12);
        assert!((gamma_k(&scaled, 1) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn mu_sigma_examples() {
        let sigma = [0.75, 0.25];
        assert_eq!(mu_sigma(&sigma, &sigma).unwrap(), 0.0);
        let u = mu_sigma(&[0.5, 0.5], &sigma).unwrap();
        assert!((u - (1.0f64 / 3.0).sqrt()).abs() < 1e-15);
        let point = mu_sigma(&[0.0, 1.0], &sigma).unwrap();
        assert!((point - (1.0f64 / 0.25 - 1.0).sqrt()).abs() < 1e-15);
        assert!(mu_sigma(&[0.5, 0.5], &[1.0, 0.0]).is_err());
    }

    #[test]
    fn mixing_residual_closed_forms() {
        let n = 12;
        let r = RateMatrix::complete(n, 1.0).unwrap();
        let m = transition_matrix(&r).unwrap();
        let all: Vec<usize> = (0..n).collect();
        let full = expander_mixing_residual(&r, &m, 1.0 / 11.0, &all, &all).unwrap();
        assert!(full.residual < 1e-12);
        assert!((full.m_ab - n as f64).abs() < 1e-12);
        let (a, b) = (vec![0, 1, 2], vec![5, 6, 7, 8]);
        let res = expander_mixing_residual(&r, &m, 1.0 / 11.0, &a, &b).unwrap();
        assert!((res.m_ab - 12.0 / 11.0).abs() < 1e-12);
        assert!((res.residual - 12.0 / (12.0 * 11.0)).abs() < 1e-12);
    }
}
