//! Dense integer matrices with Hermite and Smith normal forms.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Row-major matrix of arbitrary precision integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

/// `left * m * right == diag(diagonal)` with `left`, `right` unimodular and
/// each nonzero diagonal entry dividing the next.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub diagonal: Vec<BigInt>,
    pub left: IntegerMatrix,
    pub right: IntegerMatrix,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.diagonal.iter().filter(|d| !d.is_zero()).count()
    }
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntegerMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Panics if the rows have different lengths.
    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        IntegerMatrix {
            rows: rows.len(),
            cols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&e| BigInt::from(e)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, rhs: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.cols, rhs.rows, "incompatible shapes");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * &rhs[(k, j)];
                }
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// `row[target] += k * row[src]`
    fn add_row_multiple(&mut self, target: usize, src: usize, k: &BigInt) {
        for j in 0..self.cols {
            let delta = k * &self[(src, j)];
            self[(target, j)] += delta;
        }
    }

    /// `col[target] += k * col[src]`
    fn add_col_multiple(&mut self, target: usize, src: usize, k: &BigInt) {
        for i in 0..self.rows {
            let delta = k * &self[(i, src)];
            self[(i, target)] += delta;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -&self[(i, j)];
            self[(i, j)] = v;
        }
    }

    /// Fraction-free (Bareiss) determinant. Panics on non-square input.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !m[(i, k)].is_zero()) {
                    Some(i) => {
                        m.swap_rows(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)]) / &prev;
                    m[(i, j)] = v;
                }
            }
            prev = m[(k, k)].clone();
        }
        sign * &m[(n - 1, n - 1)]
    }

    /// Row-style Hermite normal form of the row lattice.
    ///
    /// The result has one row per unit of rank, is in echelon form with
    /// positive pivots, and every entry above a pivot lies in `[0, pivot)`.
    /// Two matrices with the same row lattice give the same result.
    pub fn hermite_normal_form(&self) -> IntegerMatrix {
        let mut m = self.clone();
        let mut pivot_row = 0;
        for col in 0..m.cols {
            if pivot_row == m.rows {
                break;
            }
            loop {
                let best = (pivot_row..m.rows)
                    .filter(|&i| !m[(i, col)].is_zero())
                    .min_by(|&a, &b| m[(a, col)].abs().cmp(&m[(b, col)].abs()));
                let Some(best) = best else { break };
                m.swap_rows(pivot_row, best);
                let mut clean = true;
                for i in pivot_row + 1..m.rows {
                    if m[(i, col)].is_zero() {
                        continue;
                    }
                    let q = m[(i, col)].div_floor(&m[(pivot_row, col)]);
                    m.add_row_multiple(i, pivot_row, &-q);
                    clean &= m[(i, col)].is_zero();
                }
                if clean {
                    break;
                }
            }
            if m[(pivot_row, col)].is_zero() {
                continue;
            }
            if m[(pivot_row, col)].is_negative() {
                m.negate_row(pivot_row);
            }
            for i in 0..pivot_row {
                let q = m[(i, col)].div_floor(&m[(pivot_row, col)]);
                if !q.is_zero() {
                    m.add_row_multiple(i, pivot_row, &-q);
                }
            }
            pivot_row += 1;
        }
        IntegerMatrix::from_rows((0..pivot_row).map(|i| m.row(i).to_vec()).collect())
    }

    /// Smith normal form with both unimodular transforms.
    pub fn smith_normal_form(&self) -> SmithForm {
        let (rows, cols) = (self.rows, self.cols);
        let mut a = self.clone();
        let mut left = IntegerMatrix::identity(rows);
        let mut right = IntegerMatrix::identity(cols);
        let steps = rows.min(cols);
        for t in 0..steps {
            let smallest = (t..rows)
                .flat_map(|i| (t..cols).map(move |j| (i, j)))
                .filter(|&(i, j)| !a[(i, j)].is_zero())
                .min_by(|&p, &q| a[p].abs().cmp(&a[q].abs()));
            let Some((i0, j0)) = smallest else { break };
            a.swap_rows(t, i0);
            left.swap_rows(t, i0);
            a.swap_cols(t, j0);
            right.swap_cols(t, j0);

            loop {
                let mut changed = false;
                // clear column t below the pivot
                for i in t + 1..rows {
                    if a[(i, t)].is_zero() {
                        continue;
                    }
                    let q = a[(i, t)].div_floor(&a[(t, t)]);
                    a.add_row_multiple(i, t, &-&q);
                    left.add_row_multiple(i, t, &-&q);
                    if !a[(i, t)].is_zero() {
                        a.swap_rows(t, i);
                        left.swap_rows(t, i);
                        changed = true;
                    }
                }
                // clear row t right of the pivot
                for j in t + 1..cols {
                    if a[(t, j)].is_zero() {
                        continue;
                    }
                    let q = a[(t, j)].div_floor(&a[(t, t)]);
                    a.add_col_multiple(j, t, &-&q);
                    right.add_col_multiple(j, t, &-&q);
                    if !a[(t, j)].is_zero() {
                        a.swap_cols(t, j);
                        right.swap_cols(t, j);
                        changed = true;
                    }
                }
                if changed {
                    continue;
                }
                // enforce divisibility of the remaining block by the pivot
                let offender = (t + 1..rows)
                    .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                    .find(|&p| !a[p].is_multiple_of(&a[(t, t)]));
                match offender {
                    Some((i, _)) => {
                        a.add_row_multiple(t, i, &BigInt::one());
                        left.add_row_multiple(t, i, &BigInt::one());
                    }
                    None => break,
                }
            }
            if a[(t, t)].is_negative() {
                a.negate_row(t);
                left.negate_row(t);
            }
        }
        SmithForm {
            diagonal: (0..steps).map(|i| a[(i, i)].clone()).collect(),
            left,
            right,
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntegerMatrix {
    type Output = BigInt;

    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntegerMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}
