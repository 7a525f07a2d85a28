//! Small dense complex matrices: just enough for log-determinants of
//! Hermitian positive-definite matrices and orthogonal projections.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use num_complex::Complex64;

/// Relative tolerance on Hermitian asymmetry before symmetrization.
pub const HERMITIAN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum LinalgError {
    #[error("matrix is not square ({0}x{1})")]
    NotSquare(usize, usize),
    #[error("matrix is not Hermitian (relative asymmetry {0:e})")]
    NotHermitian(f64),
    #[error("matrix is not positive definite")]
    NotPositiveDefinite,
}

/// Row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Panics if `data.len() != rows * cols`.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<Complex64>) -> Self {
        assert_eq!(data.len(), rows * cols, "data length does not match shape");
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn matmul(&self, rhs: &CMatrix) -> Self {
        assert_eq!(self.cols, rhs.rows, "inner dimensions differ");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }

    /// `A A^H`.
    pub fn gram(&self) -> Self {
        self.matmul(&self.adjoint())
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn add(&self, rhs: &CMatrix) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }

    /// `I + self`; `self` must be square.
    pub fn plus_identity(&self) -> Self {
        assert_eq!(self.rows, self.cols, "plus_identity needs a square matrix");
        let mut out = self.clone();
        for i in 0..self.rows {
            out[(i, i)] += 1.0;
        }
        out
    }

    /// Leading `count` columns.
    pub fn leading_columns(&self, count: usize) -> Self {
        assert!(count <= self.cols, "not enough columns");
        Self::from_fn(self.rows, count, |i, j| self[(i, j)])
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn frobenius_norm_sqr(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `log2 det(self)` for a Hermitian positive-definite matrix, via Cholesky.
    ///
    /// The input is symmetrized as `(A + A^H) / 2` after checking that its
    /// asymmetry is within [`HERMITIAN_TOL`] relative to its largest entry.
    pub fn log2_det_hpd(&self) -> Result<f64, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::NotSquare(self.rows, self.cols));
        }
        let n = self.rows;
        let scale = self.max_abs().max(1.0);
        let mut asym = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                asym = asym.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        if asym > HERMITIAN_TOL * scale {
            return Err(LinalgError::NotHermitian(asym / scale));
        }

        let mut a = Self::from_fn(n, n, |i, j| (self[(i, j)] + self[(j, i)].conj()) * 0.5);
        let mut log2_det = 0.0;
        for j in 0..n {
            let mut diag = a[(j, j)].re;
            for k in 0..j {
                diag -= a[(j, k)].norm_sqr();
            }
            if !(diag.is_finite() && diag > 0.0) {
                return Err(LinalgError::NotPositiveDefinite);
            }
            let l_jj = libm::sqrt(diag);
            a[(j, j)] = Complex64::new(l_jj, 0.0);
            log2_det += 2.0 * libm::log2(l_jj);
            for i in j + 1..n {
                let mut s = a[(i, j)];
                for k in 0..j {
                    s -= a[(i, k)] * a[(j, k)].conj();
                }
                a[(i, j)] = s / l_jj;
            }
        }
        Ok(log2_det)
    }

    /// `log2 det(I + self)` for a Hermitian positive-semidefinite `self`.
    pub fn log2_det_plus_identity(&self) -> Result<f64, LinalgError> {
        self.plus_identity().log2_det_hpd()
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

fn dot(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    // <u, v> = u^H v
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

fn norm(v: &[Complex64]) -> f64 {
    libm::sqrt(v.iter().map(|z| z.norm_sqr()).sum())
}

/// Orthonormal basis of the column space of `a`, by modified Gram-Schmidt
/// with one reorthogonalization pass. Columns whose residual norm falls
/// below `rank_tol` times their original norm are treated as dependent.
pub fn orthonormal_column_basis(a: &CMatrix, rank_tol: f64) -> Vec<Vec<Complex64>> {
    let mut basis: Vec<Vec<Complex64>> = Vec::new();
    for j in 0..a.cols() {
        let mut v = a.column(j);
        let original = norm(&v);
        if original == 0.0 {
            continue;
        }
        for _ in 0..2 {
            for q in &basis {
                let c = dot(q, &v);
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= c * qi;
                }
            }
        }
        let residual = norm(&v);
        if residual > rank_tol * original {
            basis.push(v.into_iter().map(|z| z / residual).collect());
        }
    }
    basis
}

/// Projector onto the orthogonal complement of the column space of `a`:
/// `I - Q Q^H`. Returns the identity (exactly) when `a` has no columns.
pub fn complement_projector(a: &CMatrix) -> CMatrix {
    let n = a.rows();
    let basis = orthonormal_column_basis(a, 1e-10);
    let mut p = CMatrix::identity(n);
    for q in &basis {
        for i in 0..n {
            for j in 0..n {
                p[(i, j)] -= q[i] * q[j].conj();
            }
        }
    }
    p
}

/// True when the rows of `h` are orthonormal to within `tol` (max-entry
/// deviation of `H H^H` from the identity).
pub fn has_orthonormal_rows(h: &CMatrix, tol: f64) -> bool {
    let g = h.gram();
    let eye = CMatrix::identity(h.rows());
    g.as_slice()
        .iter()
        .zip(eye.as_slice())
        .all(|(a, b)| (a - b).norm() <= tol)
}
