use std::fmt::Write as _;

use crate::error::{Error, Result};

const SYMMETRY_TOL: f64 = 1e-9;

/// Symmetric nonnegative pair weights with zero diagonal and positive row sums.
#[derive(Debug, Clone, PartialEq)]
pub struct RateMatrix {
    n: usize,
    entries: Vec<f64>,
    row_sums: Vec<f64>,
}

impl RateMatrix {
    /// Builds a rate matrix from row-major entries, validating every invariant.
    pub fn new(n: usize, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::InvalidRates(format!(
                "expected {} entries, got {}",
                n * n,
                entries.len()
            )));
        }
        for u in 0..n {
            if entries[u * n + u] != 0.0 {
                return Err(Error::InvalidRates(format!("nonzero diagonal at {u}")));
            }
            for v in 0..n {
                let x = entries[u * n + v];
                if !x.is_finite() || x < 0.0 {
                    return Err(Error::InvalidRates(format!("entry ({u},{v}) = {x}")));
                }
                if x != entries[v * n + u] {
                    return Err(Error::InvalidRates(format!("asymmetric at ({u},{v})")));
                }
            }
        }
        let row_sums: Vec<f64> = (0..n)
            .map(|u| crate::numeric::compensated_sum(entries[u * n..(u + 1) * n].iter().copied()))
            .collect();
        if let Some(u) = row_sums.iter().position(|&d| d <= 0.0) {
            return Err(Error::ZeroRowSum { vertex: u });
        }
        Ok(Self { n, entries, row_sums })
    }

    /// Builds from a pair function evaluated on `u < v` and mirrored.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut entries = vec![0.0; n * n];
        for u in 0..n {
            for v in u + 1..n {
                let x = f(u, v);
                entries[u * n + v] = x;
                entries[v * n + u] = x;
            }
        }
        Self::new(n, entries)
    }

    /// Uniform rate `rate` on every pair of `K_n`.
    pub fn complete(n: usize, rate: f64) -> Result<Self> {
        Self::from_fn(n, |_, _| rate)
    }

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

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// `d_R(u)`.
    pub fn row_sum(&self, u: usize) -> f64 {
        self.row_sums[u]
    }

    pub fn row_sums(&self) -> &[f64] {
        &self.row_sums
    }

    /// `d_R(V)`.
    pub fn total(&self) -> f64 {
        crate::numeric::compensated_sum(self.row_sums.iter().copied())
    }

    /// `d = min_u d_R(u)`.
    pub fn min_row_sum(&self) -> f64 {
        self.row_sums.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_row_sum(&self) -> f64 {
        self.row_sums.iter().copied().fold(0.0, f64::max)
    }

    /// `‖R‖`, the largest entry.
    pub fn max_entry(&self) -> f64 {
        self.entries.iter().copied().fold(0.0, f64::max)
    }

    /// Number of positive-rate partners of `u`.
    pub fn support_degree(&self, u: usize) -> usize {
        self.row(u).iter().filter(|&&x| x > 0.0).count()
    }

    pub fn scaled(&self, x: f64) -> Result<Self> {
        if !(x > 0.0 && x.is_finite()) {
            return Err(Error::InvalidArgument(format!("scale {x} must be positive")));
        }
        Self::new(self.n, self.entries.iter().map(|e| e * x).collect())
    }

    /// Dense format: a line holding `n`, then `n` rows of `n` values.
    pub fn parse_dense(text: &str) -> Result<Self> {
        let mut lines = content_lines(text);
        let (line, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing header".into(),
        })?;
        let n: usize = header.trim().parse().map_err(|_| Error::Parse {
            line,
            msg: format!("bad vertex count '{}'", header.trim()),
        })?;
        let mut raw = vec![0.0; n * n];
        for u in 0..n {
            let (line, row) = lines.next().ok_or(Error::Parse {
                line: line + u + 1,
                msg: format!("missing row {u}"),
            })?;
            let vals: Vec<&str> = row.split_whitespace().collect();
            if vals.len() != n {
                return Err(Error::Parse {
                    line,
                    msg: format!("row {u} has {} values, expected {n}", vals.len()),
                });
            }
            for (v, s) in vals.iter().enumerate() {
                raw[u * n + v] = parse_f64(s, line)?;
            }
        }
        if let Some((line, _)) = lines.next() {
            return Err(Error::Parse {
                line,
                msg: "trailing content".into(),
            });
        }
        symmetrize(n, raw)
    }

    /// Sparse format: `u v weight` triples, 0-indexed, with an optional
    /// leading line holding `n`. Missing pairs are zero.
    pub fn parse_sparse(text: &str) -> Result<Self> {
        let mut declared_n = None;
        let mut triples = Vec::new();
        for (idx, (line, content)) in content_lines(text).enumerate() {
            let toks: Vec<&str> = content.split_whitespace().collect();
            if idx == 0 && toks.len() == 1 {
                declared_n = Some(toks[0].parse::<usize>().map_err(|_| Error::Parse {
                    line,
                    msg: format!("bad vertex count '{}'", toks[0]),
                })?);
                continue;
            }
            if toks.len() != 3 {
                return Err(Error::Parse {
                    line,
                    msg: "expected 'u v weight'".into(),
                });
            }
            let u = parse_usize(toks[0], line)?;
            let v = parse_usize(toks[1], line)?;
            let w = parse_f64(toks[2], line)?;
            triples.push((line, u, v, w));
        }
        let n = declared_n.unwrap_or_else(|| {
            triples
                .iter()
                .map(|&(_, u, v, _)| u.max(v) + 1)
                .max()
                .unwrap_or(0)
        });
        let mut raw = vec![f64::NAN; n * n];
        for &(line, u, v, w) in &triples {
            if u >= n || v >= n {
                return Err(Error::Parse {
                    line,
                    msg: format!("vertex out of range for n = {n}"),
                });
            }
            if !raw[u * n + v].is_nan() {
                return Err(Error::Parse {
                    line,
                    msg: format!("duplicate pair ({u},{v})"),
                });
            }
            raw[u * n + v] = w;
        }
        for u in 0..n {
            for v in 0..n {
                let (a, b) = (raw[u * n + v], raw[v * n + u]);
                if a.is_nan() {
                    raw[u * n + v] = if b.is_nan() { 0.0 } else { b };
                }
            }
        }
        symmetrize(n, raw)
    }

    pub fn to_dense_string(&self) -> String {
        let mut s = format!("{}\n", self.n);
        for u in 0..self.n {
            let row: Vec<String> = self.row(u).iter().map(|x| format!("{x:e}")).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }

    /// Upper-triangle triples of the positive entries, with an `n` header line.
    pub fn to_sparse_string(&self) -> String {
        let mut s = format!("{}\n", self.n);
        for u in 0..self.n {
            for v in u + 1..self.n {
                let x = self.get(u, v);
                if x > 0.0 {
                    let _ = writeln!(s, "{u} {v} {x:e}");
                }
            }
        }
        s
    }
}

/// Upper triangle is authoritative; the lower one must agree within tolerance.
fn symmetrize(n: usize, mut raw: Vec<f64>) -> Result<RateMatrix> {
    for u in 0..n {
        if raw[u * n + u] != 0.0 {
            return Err(Error::InvalidRates(format!("nonzero diagonal at {u}")));
        }
        for v in u + 1..n {
            let upper = raw[u * n + v];
            let lower = raw[v * n + u];
            if (upper - lower).abs() > SYMMETRY_TOL {
                return Err(Error::InvalidRates(format!(
                    "asymmetric pair ({u},{v}): {upper} vs {lower}"
                )));
            }
            raw[v * n + u] = upper;
        }
    }
    RateMatrix::new(n, raw)
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("")))
        .filter(|(_, l)| !l.trim().is_empty())
}

fn parse_f64(s: &str, line: usize) -> Result<f64> {
    s.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("bad number '{s}'"),
    })
}

fn parse_usize(s: &str, line: usize) -> Result<usize> {
    s.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("bad vertex '{s}'"),
    })
}
