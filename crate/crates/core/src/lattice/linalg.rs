//! Gaussian elimination over `Q`.

use num_traits::{One, Zero};

use super::{Rational, RationalVector};

/// Reduced row echelon form; returns the pivot column of each nonzero row.
fn rref(rows: &mut Vec<Vec<Rational>>, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for e in rows[r].iter_mut() {
            *e *= &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                let pivot = rows[r].clone();
                for (dst, src) in rows[i].iter_mut().zip(&pivot) {
                    *dst -= &f * src;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

pub fn rank(vectors: &[RationalVector]) -> usize {
    let Some(first) = vectors.first() else {
        return 0;
    };
    let mut rows: Vec<Vec<Rational>> = vectors.iter().map(|v| v.to_vec()).collect();
    rref(&mut rows, first.dim()).len()
}

/// Indices of a maximal linearly independent subset, chosen greedily in order.
pub fn independent_subset(vectors: &[RationalVector]) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    let mut basis: Vec<RationalVector> = Vec::new();
    for (i, v) in vectors.iter().enumerate() {
        basis.push(v.clone());
        if rank(&basis) == basis.len() {
            chosen.push(i);
        } else {
            basis.pop();
        }
    }
    chosen
}

/// Coefficients `c` with `sum_j c_j * columns[j] = target`, free variables
/// set to zero; `None` when the system is inconsistent.
pub fn solve(columns: &[RationalVector], target: &RationalVector) -> Option<Vec<Rational>> {
    let n = columns.len();
    let dim = target.dim();
    let mut rows: Vec<Vec<Rational>> = (0..dim)
        .map(|i| {
            let mut row: Vec<Rational> = columns.iter().map(|c| c[i].clone()).collect();
            row.push(target[i].clone());
            row
        })
        .collect();
    let pivots = rref(&mut rows, n + 1);
    if pivots.last() == Some(&n) {
        return None;
    }
    let mut x = vec![Rational::zero(); n];
    for (row, &p) in rows.iter().zip(&pivots) {
        x[p] = row[n].clone();
    }
    Some(x)
}

/// Basis of `{u : <row, u> = 0 for every row}` in `Q^dim`.
pub fn nullspace(rows: &[RationalVector], dim: usize) -> Vec<RationalVector> {
    let mut m: Vec<Vec<Rational>> = rows.iter().map(|r| r.to_vec()).collect();
    let pivots = rref(&mut m, dim);
    let free = (0..dim).filter(|c| !pivots.contains(c));
    free.map(|f| {
        let mut u = vec![Rational::zero(); dim];
        u[f] = Rational::one();
        for (row, &p) in m.iter().zip(&pivots) {
            u[p] = -row[f].clone();
        }
        RationalVector::new(u)
    })
    .collect()
}
