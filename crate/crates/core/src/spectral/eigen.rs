use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::Rng as _;

use super::RateMatrix;
use crate::error::{Error, Result};

/// Above this size the dense solver is replaced by Lanczos iteration.
pub const DENSE_LIMIT: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum EigenMethod {
    Dense,
    Lanczos,
}

/// Extreme nontrivial eigenvalues of the symmetrized walk matrix.
#[derive(Debug, Clone, Copy)]
pub struct ExtremeEigenvalues {
    /// `λ_2`, the second largest eigenvalue.
    pub second: f64,
    /// `λ_n`, the smallest eigenvalue.
    pub smallest: f64,
    pub method: EigenMethod,
    pub iterations: usize,
}

/// Entries `R(u,v) / sqrt(d_u d_v)`, i.e. `D^{1/2} M D^{-1/2}`.
pub fn symmetrized(r: &RateMatrix) -> DMatrix<f64> {
    let n = r.n();
    let inv: Vec<f64> = r.row_sums().iter().map(|d| 1.0 / d.sqrt()).collect();
    DMatrix::from_fn(n, n, |u, v| r.get(u, v) * inv[u] * inv[v])
}

pub fn extreme_eigenvalues(r: &RateMatrix, method: Option<EigenMethod>, tol: f64) -> Result<ExtremeEigenvalues> {
    let method = method.unwrap_or(if r.n() <= DENSE_LIMIT {
        EigenMethod::Dense
    } else {
        EigenMethod::Lanczos
    });
    match method {
        EigenMethod::Dense => Ok(dense(r)),
        EigenMethod::Lanczos => lanczos(r, tol, 600),
    }
}

fn dense(r: &RateMatrix) -> ExtremeEigenvalues {
    let n = r.n();
    let mut ev: Vec<f64> = symmetrized(r).symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    ExtremeEigenvalues {
        second: if n > 1 { ev[1] } else { 0.0 },
        smallest: if n > 1 { ev[n - 1] } else { 0.0 },
        method: EigenMethod::Dense,
        iterations: 0,
    }
}

/// Lanczos with full reorthogonalization on the matrix with the top
/// eigenvector `sqrt(sigma)` deflated.
fn lanczos(r: &RateMatrix, tol: f64, max_iter: usize) -> Result<ExtremeEigenvalues> {
    let n = r.n();
    let total = r.total();
    let top = DVector::from_iterator(n, r.row_sums().iter().map(|d| (d / total).sqrt()));
    let inv: Vec<f64> = r.row_sums().iter().map(|d| 1.0 / d.sqrt()).collect();
    let apply = |x: &DVector<f64>| -> DVector<f64> {
        let y: Vec<f64> = (0..n)
            .map(|u| {
                let row = r.row(u);
                let mut acc = 0.0;
                for v in 0..n {
                    acc += row[v] * inv[v] * x[v];
                }
                acc * inv[u]
            })
            .collect();
        let mut y = DVector::from_vec(y);
        let c = top.dot(x);
        y.axpy(-c, &top, 1.0);
        y
    };

    let mut rng = crate::rng::seeded(0x5eed_1a2c);
    let mut q = DVector::from_fn(n, |_, _| rng.random::<f64>() - 0.5);
    q.axpy(-top.dot(&q), &top, 1.0);
    q /= q.norm();

    let limit = max_iter.min(n.saturating_sub(1)).max(1);
    let mut basis: Vec<DVector<f64>> = vec![q];
    let mut alphas = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut residual = f64::INFINITY;
    for m in 1..=limit {
        let mut w = apply(&basis[m - 1]);
        let a = basis[m - 1].dot(&w);
        alphas.push(a);
        for _ in 0..2 {
            for b in &basis {
                let c = b.dot(&w);
                w.axpy(-c, b, 1.0);
            }
            let c = top.dot(&w);
            w.axpy(-c, &top, 1.0);
        }
        let beta = w.norm();
        let check = m % 10 == 0 || m == limit || beta < 1e-12;
        if check {
            let t = tridiagonal(&alphas, &betas);
            let eig = SymmetricEigen::new(t);
            let (imax, imin) = extreme_indices(eig.eigenvalues.as_slice());
            let rmax = (beta * eig.eigenvectors[(m - 1, imax)]).abs();
            let rmin = (beta * eig.eigenvectors[(m - 1, imin)]).abs();
            residual = rmax.max(rmin);
            if residual <= tol || beta < 1e-12 || m == n.saturating_sub(1) {
                return Ok(ExtremeEigenvalues {
                    second: eig.eigenvalues[imax],
                    smallest: eig.eigenvalues[imin],
                    method: EigenMethod::Lanczos,
                    iterations: m,
                });
            }
        }
        betas.push(beta);
        basis.push(w / beta);
    }
    Err(Error::EigenNonConvergence {
        iterations: limit,
        residual,
    })
}

fn tridiagonal(alphas: &[f64], betas: &[f64]) -> DMatrix<f64> {
    let m = alphas.len();
    DMatrix::from_fn(m, m, |i, j| {
        if i == j {
            alphas[i]
        } else if i + 1 == j {
            betas[i]
        } else if j + 1 == i {
            betas[j]
        } else {
            0.0
        }
    })
}

fn extreme_indices(ev: &[f64]) -> (usize, usize) {
    let mut imax = 0;
    let mut imin = 0;
    for (i, &x) in ev.iter().enumerate() {
        if x > ev[imax] {
            imax = i;
        }
        if x < ev[imin] {
            imin = i;
        }
    }
    (imax, imin)
}
