//! Householder QR for tall matrices, enough for least squares and
//! `(XᵀX)⁻¹` without forming the normal equations.

use crate::{Error, Real, Result};

/// Thin QR factorisation of an `m × n` matrix, `m ≥ n`.
#[derive(Debug, Clone)]
pub(crate) struct Qr<T> {
    rows: usize,
    cols: usize,
    /// Householder vectors, column-major, `v_k` stored in rows `k..m` of column `k`.
    house: Vec<T>,
    /// Upper-triangular factor, row-major `n × n`.
    r: Vec<T>,
}

impl<T: Real> Qr<T> {
    /// Factorises a row-major `rows × cols` matrix.
    pub(crate) fn new(rows: usize, cols: usize, data: &[T]) -> Self {
        debug_assert!(rows >= cols && data.len() == rows * cols);
        let mut a = vec![T::zero(); rows * cols];
        for i in 0..rows {
            for j in 0..cols {
                a[j * rows + i] = data[i * cols + j];
            }
        }
        let mut house = vec![T::zero(); rows * cols];
        for k in 0..cols {
            let norm = (k..rows).map(|i| a[k * rows + i].powi(2)).sum::<T>().sqrt();
            let v = &mut house[k * rows..(k + 1) * rows];
            if norm == T::zero() {
                continue;
            }
            let head = a[k * rows + k];
            let alpha = if head > T::zero() { -norm } else { norm };
            for i in k..rows {
                v[i] = a[k * rows + i];
            }
            v[k] = v[k] - alpha;
            let vnorm = (k..rows).map(|i| v[i].powi(2)).sum::<T>().sqrt();
            if vnorm == T::zero() {
                continue;
            }
            for x in &mut v[k..rows] {
                *x = *x / vnorm;
            }
            for j in k..cols {
                let col = &mut a[j * rows..(j + 1) * rows];
                let proj = (k..rows).map(|i| v[i] * col[i]).sum::<T>();
                let two = proj + proj;
                for i in k..rows {
                    col[i] = col[i] - two * v[i];
                }
            }
        }
        let mut r = vec![T::zero(); cols * cols];
        for i in 0..cols {
            for j in i..cols {
                r[i * cols + j] = a[j * rows + i];
            }
        }
        Self { rows, cols, house, r }
    }

    /// Errors on the first column whose diagonal entry of `R` is negligible
    /// relative to the largest one.
    pub(crate) fn check_rank(&self, names: &[String]) -> Result<()> {
        let diag: Vec<T> = (0..self.cols).map(|k| self.r[k * self.cols + k].abs()).collect();
        let largest = diag.iter().copied().fold(T::zero(), T::max);
        let tol = T::of(1e-10).max(T::epsilon() * T::of(10.0)) * largest;
        match diag.iter().position(|&d| d <= tol || !d.is_finite()) {
            Some(column) => Err(Error::SingularDesign {
                column,
                name: names.get(column).cloned().unwrap_or_default(),
            }),
            None => Ok(()),
        }
    }

    /// `Qᵀ y`, full length `m`.
    pub(crate) fn qt_mul(&self, y: &[T]) -> Vec<T> {
        let mut out = y.to_vec();
        for k in 0..self.cols {
            let v = &self.house[k * self.rows..(k + 1) * self.rows];
            let proj = (k..self.rows).map(|i| v[i] * out[i]).sum::<T>();
            let two = proj + proj;
            for i in k..self.rows {
                out[i] = out[i] - two * v[i];
            }
        }
        out
    }

    /// Least-squares solution of `A x ≈ y`.
    pub(crate) fn solve(&self, y: &[T]) -> Vec<T> {
        let qty = self.qt_mul(y);
        self.back_substitute(&qty[..self.cols])
    }

    fn back_substitute(&self, b: &[T]) -> Vec<T> {
        let n = self.cols;
        let mut x = vec![T::zero(); n];
        for i in (0..n).rev() {
            let s = ((i + 1)..n).map(|j| self.r[i * n + j] * x[j]).sum::<T>();
            x[i] = (b[i] - s) / self.r[i * n + i];
        }
        x
    }

    /// `(AᵀA)⁻¹ = R⁻¹ R⁻ᵀ`.
    pub(crate) fn gram_inverse(&self) -> Vec<Vec<T>> {
        let n = self.cols;
        // Columns of R⁻¹ by back substitution on unit vectors.
        let mut rinv = vec![vec![T::zero(); n]; n];
        for j in 0..n {
            let mut e = vec![T::zero(); n];
            e[j] = T::one();
            let col = self.back_substitute(&e);
            for i in 0..n {
                rinv[i][j] = col[i];
            }
        }
        let mut out = vec![vec![T::zero(); n]; n];
        for i in 0..n {
            for j in i..n {
                let s = (j..n).map(|k| rinv[i][k] * rinv[j][k]).sum::<T>();
                out[i][j] = s;
                out[j][i] = s;
            }
        }
        out
    }
}
