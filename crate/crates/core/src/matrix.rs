//! Minimal dense row-major matrix used by the fixed-point oracle and the
//! feature-rank check. Systems here are tiny (tens of unknowns), so a
//! partial-pivot elimination is all that is needed.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{CoreError, Result};
use crate::math;

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map(|r| r.len()).unwrap_or(0);
        let mut m = Matrix::zeros(n_rows, n_cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n_cols {
                return Err(CoreError::DimensionMismatch {
                    expected: n_cols,
                    got: row.len(),
                });
            }
            for (j, &v) in row.iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        Ok(m)
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// `self * v` for a column vector `v`.
    pub fn mul_vec(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.cols {
            return Err(CoreError::DimensionMismatch {
                expected: self.cols,
                got: v.len(),
            });
        }
        let mut out = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            out.push(math::dot(self.row(i), v));
        }
        Ok(out)
    }

    /// `self^T * v` for a column vector `v` of length `rows`.
    pub fn transpose_mul_vec(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.rows {
            return Err(CoreError::DimensionMismatch {
                expected: self.rows,
                got: v.len(),
            });
        }
        let mut out = vec![0.0; self.cols];
        for i in 0..self.rows {
            math::axpy(&mut out, v[i], self.row(i));
        }
        Ok(out)
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(CoreError::DimensionMismatch {
                expected: self.cols,
                got: other.rows,
            });
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    /// Column rank via row echelon reduction with partial pivoting. The pivot
    /// tolerance scales with the largest magnitude entry.
    pub fn rank(&self) -> usize {
        let mut work = self.clone();
        let mut max_abs: f64 = 0.0;
        for &v in &work.data {
            max_abs = max_abs.max(math::abs(v));
        }
        if max_abs == 0.0 {
            return 0;
        }
        let tol = max_abs * 1e-11 * (work.rows.max(work.cols) as f64);
        let mut rank = 0;
        let mut pivot_row = 0;
        for col in 0..work.cols {
            // Find the largest magnitude entry at or below pivot_row.
            let mut best = pivot_row;
            let mut best_val = 0.0;
            for r in pivot_row..work.rows {
                let v = math::abs(work[(r, col)]);
                if v > best_val {
                    best_val = v;
                    best = r;
                }
            }
            if best_val <= tol {
                continue;
            }
            work.swap_rows(pivot_row, best);
            let pivot = work[(pivot_row, col)];
            for r in (pivot_row + 1)..work.rows {
                let factor = work[(r, col)] / pivot;
                if factor == 0.0 {
                    continue;
                }
                for c in col..work.cols {
                    let sub = factor * work[(pivot_row, c)];
                    work[(r, c)] -= sub;
                }
            }
            rank += 1;
            pivot_row += 1;
            if pivot_row == work.rows {
                break;
            }
        }
        rank
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

impl core::ops::Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl core::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Solves the square system `a x = b` by LU factorization with partial
/// pivoting. Fails on non-square input or a numerically singular pivot.
pub fn solve(a: &Matrix, b: &[f64]) -> Result<Vec<f64>> {
    if a.rows != a.cols {
        return Err(CoreError::InvalidInput(format!(
            "solve requires a square matrix, got {}x{}",
            a.rows, a.cols
        )));
    }
    if b.len() != a.rows {
        return Err(CoreError::DimensionMismatch {
            expected: a.rows,
            got: b.len(),
        });
    }
    let n = a.rows;
    let mut m = a.clone();
    let mut rhs = b.to_vec();
    let mut max_abs: f64 = 0.0;
    for &v in &m.data {
        max_abs = max_abs.max(math::abs(v));
    }
    let tol = max_abs * 1e-14 * (n as f64).max(1.0);

    for col in 0..n {
        let mut best = col;
        let mut best_val = math::abs(m[(col, col)]);
        for r in (col + 1)..n {
            let v = math::abs(m[(r, col)]);
            if v > best_val {
                best_val = v;
                best = r;
            }
        }
        if best_val <= tol || best_val == 0.0 {
            return Err(CoreError::Numeric(format!(
                "singular system at column {col} (pivot {best_val:e})"
            )));
        }
        m.swap_rows(col, best);
        rhs.swap(col, best);
        let pivot = m[(col, col)];
        for r in (col + 1)..n {
            let factor = m[(r, col)] / pivot;
            if factor == 0.0 {
                continue;
            }
            for c in col..n {
                let sub = factor * m[(col, c)];
                m[(r, c)] -= sub;
            }
            rhs[r] -= factor * rhs[col];
        }
    }
    // Back substitution.
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut acc = rhs[i];
        for j in (i + 1)..n {
            acc -= m[(i, j)] * x[j];
        }
        x[i] = acc / m[(i, i)];
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_recovers_known_solution() {
        let a = Matrix::from_rows(&[
            vec![4.0, 1.0, 0.0],
            vec![1.0, 3.0, -1.0],
            vec![0.0, -1.0, 2.0],
        ])
        .unwrap();
        let x_true = vec![1.0, -2.0, 0.5];
        let b = a.mul_vec(&x_true).unwrap();
        let x = solve(&a, &b).unwrap();
        for (xi, ti) in x.iter().zip(&x_true) {
            assert!((xi - ti).abs() < 1e-12);
        }
    }

    #[test]
    fn solve_rejects_singular() {
        let a = Matrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        assert!(matches!(
            solve(&a, &[1.0, 2.0]),
            Err(CoreError::Numeric(_))
        ));
    }

    #[test]
    fn rank_detects_dependent_columns() {
        let m = Matrix::from_rows(&[
            vec![1.0, 0.0, 1.0],
            vec![0.0, 1.0, 1.0],
            vec![1.0, 1.0, 2.0],
            vec![2.0, 0.0, 2.0],
        ])
        .unwrap();
        assert_eq!(m.rank(), 2);
        let id = Matrix::identity(5);
        assert_eq!(id.rank(), 5);
    }
}
