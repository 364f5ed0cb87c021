use crate::error::{Error, Result};
use crate::spectral::{normalize_to_rm1, RateMatrix};

/// Families of base weight matrices `W` before scaling.
#[derive(Debug, Clone, PartialEq)]
pub enum HostFamily {
    Complete,
    /// Paley graph on `Z_q`, `q` prime and `1 mod 4`.
    Paley { q: usize },
    /// Stochastic block model: `W(u,v) = B[b(u)][b(v)]`.
    Block { sizes: Vec<usize>, matrix: Vec<Vec<f64>> },
    /// Chung-Lu weights `w_i = (i + 1)^{-1/(exponent - 1)}`, `W(u,v) = w_u w_v`.
    PowerLaw { exponent: f64 },
}

impl HostFamily {
    pub fn name(&self) -> &'static str {
        match self {
            HostFamily::Complete => "complete",
            HostFamily::Paley { .. } => "paley",
            HostFamily::Block { .. } => "block",
            HostFamily::PowerLaw { .. } => "power-law",
        }
    }

    /// The vertex count, when fixed by the family itself.
    pub fn fixed_n(&self) -> Option<usize> {
        match self {
            HostFamily::Paley { q } => Some(*q),
            HostFamily::Block { sizes, .. } => Some(sizes.iter().sum()),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            HostFamily::Complete => Ok(()),
            HostFamily::Paley { q } => {
                if *q < 5 || q % 4 != 1 || !is_prime(*q) {
                    return Err(Error::Config(format!("paley host needs a prime q = 1 mod 4, got {q}")));
                }
                Ok(())
            }
            HostFamily::Block { sizes, matrix } => {
                let b = sizes.len();
                if b == 0 || sizes.contains(&0) {
                    return Err(Error::Config("block sizes must be positive".into()));
                }
                if matrix.len() != b || matrix.iter().any(|row| row.len() != b) {
                    return Err(Error::Config(format!("block matrix must be {b} x {b}")));
                }
                for i in 0..b {
                    for j in 0..b {
                        let x = matrix[i][j];
                        if !(x >= 0.0 && x.is_finite()) || x != matrix[j][i] {
                            return Err(Error::Config(format!("block matrix entry ({i},{j}) invalid or asymmetric")));
                        }
                    }
                }
                Ok(())
            }
            HostFamily::PowerLaw { exponent } => {
                if !(*exponent > 2.0 && exponent.is_finite()) {
                    return Err(Error::Config(format!("power-law exponent must exceed 2, got {exponent}")));
                }
                Ok(())
            }
        }
    }

    /// Unscaled weights on `n` vertices.
    pub fn weights(&self, n: usize) -> Result<RateMatrix> {
        self.validate()?;
        if let Some(m) = self.fixed_n() {
            if m != n {
                return Err(Error::Config(format!("{} host has n = {m}, asked for {n}", self.name())));
            }
        }
        if n < 2 {
            return Err(Error::Config(format!("n = {n} is too small")));
        }
        match self {
            HostFamily::Complete => RateMatrix::complete(n, 1.0),
            HostFamily::Paley { q } => {
                let residues = quadratic_residues(*q);
                RateMatrix::from_fn(n, |u, v| if residues[(v + q - u) % q] { 1.0 } else { 0.0 })
            }
            HostFamily::Block { sizes, matrix } => {
                let block: Vec<usize> = sizes.iter().enumerate().flat_map(|(b, &s)| std::iter::repeat_n(b, s)).collect();
                RateMatrix::from_fn(n, |u, v| matrix[block[u]][block[v]])
            }
            HostFamily::PowerLaw { exponent } => {
                let a = 1.0 / (exponent - 1.0);
                let w: Vec<f64> = (0..n).map(|i| ((i + 1) as f64).powf(-a)).collect();
                RateMatrix::from_fn(n, |u, v| w[u] * w[v])
            }
        }
    }
}

/// How `W` is turned into the rate matrix of an experiment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scaling {
    None,
    /// Scale so that `gamma_1(R) = 1`.
    Rm1,
    /// Scale so the mean row sum is `ln n + (k - 1) ln ln n + c`.
    Rows { c: f64 },
}

impl Scaling {
    pub fn name(&self) -> &'static str {
        match self {
            Scaling::None => "none",
            Scaling::Rm1 => "rm1",
            Scaling::Rows { .. } => "rows",
        }
    }

    pub fn apply(&self, w: &RateMatrix, k: usize) -> Result<RateMatrix> {
        match *self {
            Scaling::None => Ok(w.clone()),
            Scaling::Rm1 => Ok(normalize_to_rm1(w)?.1),
            Scaling::Rows { c } => {
                let n = w.n() as f64;
                let d = target_degree(w.n(), k, c);
                if d <= 0.0 {
                    return Err(Error::Config(format!("target degree {d} is not positive")));
                }
                let mean = w.total() / n;
                if mean <= 0.0 {
                    return Err(Error::InvalidRates("host has no positive weights".into()));
                }
                w.scaled(d / mean)
            }
        }
    }
}

/// `ln n + (k - 1) ln ln n + c`.
pub fn target_degree(n: usize, k: usize, c: f64) -> f64 {
    let ln = (n as f64).ln();
    ln + (k as f64 - 1.0) * ln.ln() + c
}

pub fn is_prime(q: usize) -> bool {
    if q < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= q {
        if q.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// `residues[x]` is true iff `x` is a nonzero square mod `q`.
pub fn quadratic_residues(q: usize) -> Vec<bool> {
    let mut residues = vec![false; q];
    for x in 1..q {
        residues[x * x % q] = true;
    }
    residues
}
