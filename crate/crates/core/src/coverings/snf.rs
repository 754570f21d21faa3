//! Smith normal form of small integer matrices.

use crate::error::{Error, Result};

/// `p * a * q = diag(d)` with `p`, `q` unimodular and `d_i > 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub p: Vec<Vec<i64>>,
    pub d: Vec<i64>,
    pub q: Vec<Vec<i64>>,
}

fn identity(n: usize) -> Vec<Vec<i64>> {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

fn overflow() -> Error {
    Error::Degenerate("integer overflow in Smith normal form".into())
}

/// Row operation `row_i -= k * row_t`.
fn row_sub(m: &mut [Vec<i64>], i: usize, t: usize, k: i64) -> Result<()> {
    for j in 0..m[i].len() {
        let v = k.checked_mul(m[t][j]).and_then(|x| m[i][j].checked_sub(x)).ok_or_else(overflow)?;
        m[i][j] = v;
    }
    Ok(())
}

/// Column operation `col_j -= k * col_t`.
fn col_sub(m: &mut [Vec<i64>], j: usize, t: usize, k: i64) -> Result<()> {
    for row in m.iter_mut() {
        let v = k.checked_mul(row[t]).and_then(|x| row[j].checked_sub(x)).ok_or_else(overflow)?;
        row[j] = v;
    }
    Ok(())
}

fn swap_cols(m: &mut [Vec<i64>], a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

pub fn smith_normal_form(a: &[Vec<i64>]) -> Result<SmithForm> {
    let n = a.len();
    let mut m = a.to_vec();
    let mut p = identity(n);
    let mut q = identity(n);
    for t in 0..n {
        loop {
            let pivot = (t..n)
                .flat_map(|i| (t..n).map(move |j| (i, j)))
                .filter(|&(i, j)| m[i][j] != 0)
                .min_by_key(|&(i, j)| m[i][j].unsigned_abs());
            let Some((pi, pj)) = pivot else {
                return Err(Error::SingularMatrix);
            };
            m.swap(t, pi);
            p.swap(t, pi);
            swap_cols(&mut m, t, pj);
            swap_cols(&mut q, t, pj);
            let piv = m[t][t];
            for i in t + 1..n {
                let k = m[i][t].div_euclid(piv);
                row_sub(&mut m, i, t, k)?;
                row_sub(&mut p, i, t, k)?;
            }
            for j in t + 1..n {
                let k = m[t][j].div_euclid(piv);
                col_sub(&mut m, j, t, k)?;
                col_sub(&mut q, j, t, k)?;
            }
            if (t + 1..n).all(|i| m[i][t] == 0) && (t + 1..n).all(|j| m[t][j] == 0) {
                break;
            }
        }
        if m[t][t] < 0 {
            m[t].iter_mut().for_each(|v| *v = -*v);
            p[t].iter_mut().for_each(|v| *v = -*v);
        }
    }
    let d = (0..n).map(|i| m[i][i]).collect();
    Ok(SmithForm { p, d, q })
}
