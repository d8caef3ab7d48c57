use rug::Rational;

use super::poly::Poly;
use crate::error::{Error, Result};

/// Solves `A x = b` over the Laurent polynomial ring by fraction-free
/// Gauss–Jordan elimination, requiring a unique solution whose entries are
/// again Laurent polynomials.
///
/// Extra rows are allowed and must reduce to `0 = 0`.
pub fn solve_unique(a: &[Vec<Poly>], b: &[Poly]) -> Result<Vec<Poly>> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<Poly>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut pivot_rows = Vec::with_capacity(cols);
    let mut used = vec![false; rows];
    for col in 0..cols {
        let piv = (0..rows)
            .filter(|&i| !used[i] && !m[i][col].is_zero())
            .min_by_key(|&i| (m[i][col].len(), m[i][col].leading().map(|(mo, _)| mo.degree()).unwrap_or(0)));
        let Some(p) = piv else {
            return Err(Error::Degenerate(format!("linear system has no pivot in column {col}")));
        };
        used[p] = true;
        pivot_rows.push(p);
        let prow = m[p].clone();
        for i in 0..rows {
            if i == p || m[i][col].is_zero() {
                continue;
            }
            let f = m[i][col].clone();
            let pv = &prow[col];
            let new: Vec<Poly> = m[i].iter().zip(&prow).map(|(x, y)| &(x * pv) - &(y * &f)).collect();
            m[i] = normalize_row(new);
        }
    }
    for i in 0..rows {
        if !used[i] && !m[i][cols].is_zero() {
            return Err(Error::Degenerate("linear system is inconsistent".into()));
        }
    }
    pivot_rows
        .iter()
        .enumerate()
        .map(|(col, &p)| m[p][cols].div_exact(&m[p][col]))
        .collect()
}

/// Removes the common monomial factor in invertible generators and scales the
/// first nonzero entry to a monic leading coefficient.
fn normalize_row(row: Vec<Poly>) -> Vec<Poly> {
    let Some(first) = row.iter().find(|p| !p.is_zero()) else {
        return row;
    };
    let params = first.params().clone();
    let mut shift: Vec<(usize, i32)> = Vec::new();
    for i in 0..params.len() {
        if !params.is_invertible(i) {
            continue;
        }
        let lo = row.iter().filter(|p| !p.is_zero()).map(|p| p.min_degree_in(i)).min().unwrap_or(0);
        if lo != 0 {
            shift.push((i, -lo));
        }
    }
    let lc = first.leading().map(|(_, c)| c.clone()).unwrap_or_else(|| Rational::from(1));
    let k = Poly::monomial(&params, Rational::from(lc.recip_ref()), &shift);
    row.iter().map(|p| p * &k).collect()
}
