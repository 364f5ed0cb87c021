use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ConstantBlock<T> {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub value: T,
}

/// Greedy earliest embedding of column `j` (read top to bottom) into `a`,
/// allowing equal consecutive entries to share a position.
fn embed<T: PartialEq>(table: &[Vec<T>], j: usize, a: &[T]) -> Option<Vec<usize>> {
    let mut out = Vec::with_capacity(table.len());
    let mut at = 0;
    for row in table {
        let v = &row[j];
        at = (at..a.len()).find(|&p| &a[p] == v)?;
        out.push(at);
    }
    Some(out)
}

/// A block `S x T` on which `table` is constant, with `pi_i(S) >= pi_i(I)/l`
/// and `pi_j(T) >= pi_j(J)/l`, where `l = a.len()`.
///
/// Rows are taken in the given order; every column must read as a
/// subsequence of `a` once repeated entries are merged.
pub fn constant_submatrix<T: PartialEq + Clone>(
    table: &[Vec<T>],
    pi_i: &[f64],
    pi_j: &[f64],
    a: &[T],
) -> Result<ConstantBlock<T>> {
    let (ni, nj) = (table.len(), pi_j.len());
    if a.is_empty() {
        return Err(Error::InvalidArgument("sequence a must be nonempty".into()));
    }
    if pi_i.len() != ni || table.iter().any(|r| r.len() != nj) {
        return Err(Error::InvalidArgument("table shape does not match the measures".into()));
    }
    if pi_i.iter().chain(pi_j).any(|&w| !(w.is_finite() && w >= 0.0)) {
        return Err(Error::InvalidArgument("measures must be finite and nonnegative".into()));
    }
    // pos[j][i]: position of table[i][j] in a.
    let pos = (0..nj)
        .map(|j| embed(table, j, a).ok_or(Error::NotRespecting { column: j }))
        .collect::<Result<Vec<_>>>()?;
    let mass = |xs: &[usize], w: &[f64]| xs.iter().map(|&x| w[x]).sum::<f64>();

    let mut rows: Vec<usize> = (0..ni).collect();
    let mut cols: Vec<usize> = (0..nj).collect();
    let mut l = a.len();
    while l > 1 {
        let top = l - 1;
        let row_mass = mass(&rows, pi_i);
        let col_mass = mass(&cols, pi_j);
        let in_top = |j: usize| -> Vec<usize> { rows.iter().copied().filter(|&i| pos[j][i] == top).collect() };
        let (light, heavy): (Vec<usize>, Vec<usize>) =
            cols.iter().partition(|&&j| mass(&in_top(j), pi_i) < row_mass / l as f64);
        if mass(&light, pi_j) < col_mass * (1.0 - 1.0 / l as f64) {
            let s = rows
                .iter()
                .copied()
                .filter(|&i| heavy.iter().all(|&j| pos[j][i] == top))
                .collect();
            return Ok(ConstantBlock {
                rows: s,
                cols: heavy,
                value: a[top].clone(),
            });
        }
        rows.retain(|&i| light.iter().all(|&j| pos[j][i] != top));
        cols = light;
        l -= 1;
    }
    Ok(ConstantBlock {
        rows,
        cols,
        value: a[0].clone(),
    })
}
