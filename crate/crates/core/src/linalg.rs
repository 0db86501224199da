//! Small dense linear algebra: Householder QR least squares, one-sided Jacobi
//! singular values and cyclic Jacobi eigenvalues of symmetric matrices.
//!
//! Sizes here are desk scale (a few thousand rows, a few hundred columns),
//! where these classic algorithms are accurate and fast enough.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
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

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    /// Panics if `data.len() != rows * cols`.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data has the wrong length");
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `Aᵀ x`
    pub fn tr_mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.rows);
        let mut out = vec![0.0; self.cols];
        for (i, &xi) in x.iter().enumerate() {
            for (o, &a) in out.iter_mut().zip(self.row(i)) {
                *o += a * xi;
            }
        }
        out
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Frobenius norm.
    pub fn frobenius(&self) -> f64 {
        libm::sqrt(self.data.iter().map(|v| v * v).sum())
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm2(a: &[f64]) -> f64 {
    // Scaled to avoid overflow/underflow for extreme columns.
    let scale = a.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return 0.0;
    }
    let s: f64 = a.iter().map(|v| (v / scale) * (v / scale)).sum();
    scale * libm::sqrt(s)
}

/// Householder QR of an `m × n` matrix with `m ≥ n`.
///
/// Columns are kept contiguous (column-major) since every reflection walks
/// down a column.
pub struct Qr {
    rows: usize,
    cols: usize,
    /// Column `j` holds the reflector `v_j` below the diagonal and `R` above it.
    packed: Vec<f64>,
    /// Diagonal of `R`.
    r_diag: Vec<f64>,
}

impl Qr {
    /// Panics if the matrix has more columns than rows.
    pub fn new(a: &Matrix) -> Self {
        let (m, n) = (a.rows, a.cols);
        assert!(m >= n, "QR needs at least as many rows as columns");
        let mut packed = vec![0.0; m * n];
        for i in 0..m {
            for j in 0..n {
                packed[j * m + i] = a[(i, j)];
            }
        }
        let mut r_diag = vec![0.0; n];
        for k in 0..n {
            let (done, rest) = packed.split_at_mut((k + 1) * m);
            let col = &mut done[k * m..];
            let alpha = norm2(&col[k..]);
            if alpha == 0.0 {
                r_diag[k] = 0.0;
                continue;
            }
            let alpha = if col[k] > 0.0 { -alpha } else { alpha };
            // Reflector v = x - alpha e_1, stored unnormalised in place.
            col[k] -= alpha;
            let v = &col[k..];
            let vnorm_sq = dot(v, v);
            if vnorm_sq > 0.0 {
                for j in (k + 1)..n {
                    let cj = &mut rest[(j - k - 1) * m..(j - k) * m];
                    let s = 2.0 * dot(v, &cj[k..]) / vnorm_sq;
                    for (c, &vi) in cj[k..].iter_mut().zip(v) {
                        *c -= s * vi;
                    }
                }
            }
            r_diag[k] = alpha;
        }
        Qr {
            rows: m,
            cols: n,
            packed,
            r_diag,
        }
    }

    /// The `n × n` upper-triangular factor.
    pub fn r(&self) -> Matrix {
        let n = self.cols;
        let mut r = Matrix::zeros(n, n);
        for j in 0..n {
            for i in 0..j {
                r[(i, j)] = self.packed[j * self.rows + i];
            }
            r[(j, j)] = self.r_diag[j];
        }
        r
    }

    /// `Qᵀ b`, truncated to the first `n` entries.
    pub fn qt_mul(&self, b: &[f64]) -> Vec<f64> {
        assert_eq!(b.len(), self.rows);
        let m = self.rows;
        let mut y = b.to_vec();
        for k in 0..self.cols {
            let v = &self.packed[k * m + k..(k + 1) * m];
            let vnorm_sq = dot(v, v);
            if self.r_diag[k] == 0.0 || vnorm_sq == 0.0 {
                continue;
            }
            let s = 2.0 * dot(v, &y[k..]) / vnorm_sq;
            for (yi, &vi) in y[k..].iter_mut().zip(v) {
                *yi -= s * vi;
            }
        }
        y.truncate(self.cols);
        y
    }

    /// Least-squares solution of `A x ≈ b` by back substitution on `R`.
    ///
    /// Callers are expected to have ruled out rank deficiency.
    pub fn solve_least_squares(&self, b: &[f64]) -> Vec<f64> {
        let n = self.cols;
        let m = self.rows;
        let mut x = self.qt_mul(b);
        for i in (0..n).rev() {
            let s: f64 = ((i + 1)..n).map(|j| self.packed[j * m + i] * x[j]).sum();
            x[i] = (x[i] - s) / self.r_diag[i];
        }
        x
    }
}

const JACOBI_MAX_SWEEPS: usize = 60;

/// Singular values of `a`, largest first, by one-sided (Hestenes) Jacobi.
///
/// For tall matrices, reduce with [`Qr`] first and pass `R`; the singular
/// values are the same.
pub fn singular_values(a: &Matrix) -> Vec<f64> {
    let (m, n) = (a.rows, a.cols);
    let mut cols: Vec<Vec<f64>> = (0..n)
        .map(|j| (0..m).map(|i| a[(i, j)]).collect())
        .collect();
    let tol = f64::EPSILON * m.max(n) as f64;
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let (alpha, beta, gamma) = {
                    let (cp, cq) = (&cols[p], &cols[q]);
                    (dot(cp, cp), dot(cq, cq), dot(cp, cq))
                };
                if gamma == 0.0 || gamma.abs() <= tol * libm::sqrt(alpha * beta) {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + libm::sqrt(1.0 + zeta * zeta));
                let c = 1.0 / libm::sqrt(1.0 + t * t);
                let s = c * t;
                let (lo, hi) = cols.split_at_mut(q);
                let (cp, cq) = (&mut lo[p], &mut hi[0]);
                for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
                    let (xp, yq) = (*x, *y);
                    *x = c * xp - s * yq;
                    *y = s * xp + c * yq;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv: Vec<f64> = cols.iter().map(|c| norm2(c)).collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Eigenvalues of a symmetric matrix, ascending, by cyclic Jacobi rotations.
///
/// Only the upper triangle is read.
pub fn symmetric_eigenvalues(a: &Matrix) -> Vec<f64> {
    let n = a.rows;
    assert_eq!(n, a.cols, "eigenvalues need a square matrix");
    let mut w = a.clone();
    for i in 0..n {
        for j in 0..i {
            w[(i, j)] = w[(j, i)];
        }
    }
    for _ in 0..JACOBI_MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .map(|(i, j)| w[(i, j)] * w[(i, j)])
            .sum();
        let diag: f64 = (0..n).map(|i| w[(i, i)] * w[(i, i)]).sum();
        if off <= (f64::EPSILON * f64::EPSILON) * diag || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = w[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (w[(q, q)] - w[(p, p)]) / (2.0 * apq);
                let t = if theta >= 0.0 { 1.0 } else { -1.0 }
                    / (theta.abs() + libm::sqrt(1.0 + theta * theta));
                let c = 1.0 / libm::sqrt(1.0 + t * t);
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (w[(k, p)], w[(k, q)]);
                    w[(k, p)] = c * akp - s * akq;
                    w[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (w[(p, k)], w[(q, k)]);
                    w[(p, k)] = c * apk - s * aqk;
                    w[(q, k)] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| w[(i, i)]).collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Spectral norm of a symmetric matrix: the largest absolute eigenvalue.
pub fn symmetric_spectral_norm(a: &Matrix) -> f64 {
    symmetric_eigenvalues(a)
        .into_iter()
        .fold(0.0, |m, v| m.max(v.abs()))
}
