//! Minimal dense matrix support: row-major storage and an LU solver.
//!
//! The systems solved here are small (at most the embedding dimension,
//! typically 64), so a partial-pivoting LU without blocking is plenty.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Row-major dense matrix of `f64`.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
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

    /// Wraps an existing row-major buffer. `data.len()` must equal
    /// `rows * cols`.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), rows * cols, "buffer length mismatch");
        Matrix { rows, cols, data }
    }

    /// Builds from a slice of rows; fails on ragged input.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(n * cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Invalid(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            data.extend_from_slice(row);
        }
        Ok(Matrix {
            rows: n,
            cols,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [f64] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.cols.max(1))
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// Column means; zero vector for an empty matrix.
    pub fn col_means(&self) -> Vec<f64> {
        let mut means = vec![0.0; self.cols];
        if self.rows == 0 {
            return means;
        }
        for row in self.iter_rows() {
            for (m, v) in means.iter_mut().zip(row) {
                *m += v;
            }
        }
        for m in &mut means {
            *m /= self.rows as f64;
        }
        means
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Solves the square system `a * x = b` by LU decomposition with partial
/// pivoting. Returns `Error::Singular` when a pivot collapses; the `hint`
/// is forwarded into the error message.
pub fn solve(a: &Matrix, b: &[f64], hint: &str) -> Result<Vec<f64>> {
    let n = a.rows();
    assert_eq!(a.cols(), n, "solve requires a square matrix");
    assert_eq!(b.len(), n);

    let mut lu = a.data.clone();
    let mut x: Vec<f64> = b.to_vec();
    let mut perm: Vec<usize> = (0..n).collect();

    // Scale for the singularity threshold.
    let scale = lu.iter().fold(0.0f64, |m, v| m.max(libm::fabs(*v)));
    let tol = f64::EPSILON * (n as f64) * scale.max(1e-300);

    for k in 0..n {
        let mut pivot_row = k;
        let mut pivot_val = libm::fabs(lu[perm[k] * n + k]);
        for (r, &pr) in perm.iter().enumerate().skip(k + 1) {
            let v = libm::fabs(lu[pr * n + k]);
            if v > pivot_val {
                pivot_val = v;
                pivot_row = r;
            }
        }
        if !pivot_val.is_finite() || pivot_val <= tol {
            return Err(Error::Singular(alloc::string::String::from(hint)));
        }
        perm.swap(k, pivot_row);
        let pk = perm[k];
        let diag = lu[pk * n + k];
        for &pr in perm.iter().skip(k + 1) {
            let factor = lu[pr * n + k] / diag;
            lu[pr * n + k] = factor;
            for c in (k + 1)..n {
                lu[pr * n + c] -= factor * lu[pk * n + c];
            }
        }
    }

    // Forward substitution on the permuted right-hand side.
    let mut y = vec![0.0; n];
    for k in 0..n {
        let mut s = x[perm[k]];
        for c in 0..k {
            s -= lu[perm[k] * n + c] * y[c];
        }
        y[k] = s;
    }
    // Back substitution.
    for k in (0..n).rev() {
        let mut s = y[k];
        for c in (k + 1)..n {
            s -= lu[perm[k] * n + c] * x[c];
        }
        x[k] = s / lu[perm[k] * n + k];
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn solve_identity() {
        let mut a = Matrix::zeros(3, 3);
        for i in 0..3 {
            a.set(i, i, 1.0);
        }
        let x = solve(&a, &[1.0, 2.0, 3.0], "test").unwrap();
        assert_eq!(x, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn solve_known_system() {
        // [2 1; 1 3] x = [5; 10] -> x = (1, 3)
        let a = Matrix::from_vec(2, 2, vec![2.0, 1.0, 1.0, 3.0]);
        let x = solve(&a, &[5.0, 10.0], "test").unwrap();
        assert!((x[0] - 1.0).abs() < 1e-12);
        assert!((x[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn solve_random_systems_reproduce_rhs() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [1usize, 2, 5, 16, 64] {
            let mut a = Matrix::zeros(n, n);
            for r in 0..n {
                for c in 0..n {
                    a.set(r, c, rng.gen::<f64>() - 0.5);
                }
                // Diagonal dominance keeps the test system well conditioned.
                a.set(r, r, a.get(r, r) + n as f64);
            }
            let b: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() - 0.5).collect();
            let x = solve(&a, &b, "test").unwrap();
            for r in 0..n {
                let got = dot(a.row(r), &x);
                assert!((got - b[r]).abs() < 1e-9, "n={n} row={r}");
            }
        }
    }

    #[test]
    fn solve_singular_reports_hint() {
        let a = Matrix::from_vec(2, 2, vec![1.0, 2.0, 2.0, 4.0]);
        let err = solve(&a, &[1.0, 2.0], "increase lambda").unwrap_err();
        match err {
            Error::Singular(msg) => assert!(msg.contains("lambda")),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn from_rows_rejects_ragged() {
        let err = Matrix::from_rows(&[vec![1.0, 2.0], vec![3.0]]).unwrap_err();
        assert!(matches!(err, Error::Invalid(_)));
    }

    #[test]
    fn col_means_basic() {
        let m = Matrix::from_vec(2, 2, vec![1.0, 10.0, 3.0, 30.0]);
        assert_eq!(m.col_means(), vec![2.0, 20.0]);
    }
}
