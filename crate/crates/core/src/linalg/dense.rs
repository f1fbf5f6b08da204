//! Small dense kernels: Cholesky, cyclic Jacobi eigensolver and symmetric
//! tridiagonal eigenvalues by Sturm bisection.

use crate::error::{Error, Result};
use crate::scalar::Real;
use std::ops::{Index, IndexMut};

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix<T> {
    nrows: usize,
    ncols: usize,
    data: Vec<T>,
}

impl<T: Real> DenseMatrix<T> {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self {
            nrows,
            ncols,
            data: vec![T::zero(); nrows * ncols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(nrows * ncols);
        for r in rows {
            assert_eq!(r.len(), ncols, "ragged rows");
            data.extend_from_slice(r);
        }
        Self { nrows, ncols, data }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        (0..self.nrows)
            .map(|i| (0..self.ncols).map(|j| self[(i, j)] * x[j]).sum())
            .collect()
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.ncols, other.nrows);
        let mut c = Self::zeros(self.nrows, other.ncols);
        for i in 0..self.nrows {
            for k in 0..self.ncols {
                let a = self[(i, k)];
                if a == T::zero() {
                    continue;
                }
                for j in 0..other.ncols {
                    c[(i, j)] += a * other[(k, j)];
                }
            }
        }
        c
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.ncols, self.nrows);
        for i in 0..self.nrows {
            for j in 0..self.ncols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn cholesky(&self) -> Result<DenseCholesky<T>> {
        assert_eq!(self.nrows, self.ncols);
        let n = self.nrows;
        let mut l = Self::zeros(n, n);
        for j in 0..n {
            let mut d = self[(j, j)];
            for k in 0..j {
                d -= l[(j, k)] * l[(j, k)];
            }
            if !(d > T::zero()) {
                return Err(Error::NotPositiveDefinite {
                    row: j,
                    value: d.as_f64(),
                });
            }
            let djj = d.sqrt();
            l[(j, j)] = djj;
            for i in j + 1..n {
                let mut s = self[(i, j)];
                for k in 0..j {
                    s -= l[(i, k)] * l[(j, k)];
                }
                l[(i, j)] = s / djj;
            }
        }
        Ok(DenseCholesky { l })
    }

    /// Eigenvalues (ascending) and column eigenvectors of a symmetric matrix
    /// by the cyclic Jacobi method.
    pub fn symmetric_eigen(&self) -> (Vec<T>, Self) {
        assert_eq!(self.nrows, self.ncols);
        let n = self.nrows;
        let mut a = self.clone();
        let mut v = Self::identity(n);
        let tol = T::epsilon() * T::lit(0.5);
        for _sweep in 0..100 {
            let mut off = T::zero();
            let mut diag = T::zero();
            for i in 0..n {
                diag += a[(i, i)] * a[(i, i)];
                for j in 0..n {
                    if i != j {
                        off += a[(i, j)] * a[(i, j)];
                    }
                }
            }
            if off <= tol * tol * diag || off == T::zero() {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    let apq = a[(p, q)];
                    if apq == T::zero() {
                        continue;
                    }
                    let theta = (a[(q, q)] - a[(p, p)]) / (T::lit(2.0) * apq);
                    let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                    let c = T::one() / (t * t + T::one()).sqrt();
                    let s = t * c;
                    for k in 0..n {
                        let akp = a[(k, p)];
                        let akq = a[(k, q)];
                        a[(k, p)] = c * akp - s * akq;
                        a[(k, q)] = s * akp + c * akq;
                    }
                    for k in 0..n {
                        let apk = a[(p, k)];
                        let aqk = a[(q, k)];
                        a[(p, k)] = c * apk - s * aqk;
                        a[(q, k)] = s * apk + c * aqk;
                    }
                    for k in 0..n {
                        let vkp = v[(k, p)];
                        let vkq = v[(k, q)];
                        v[(k, p)] = c * vkp - s * vkq;
                        v[(k, q)] = s * vkp + c * vkq;
                    }
                }
            }
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| a[(i, i)].partial_cmp(&a[(j, j)]).unwrap());
        let values = order.iter().map(|&i| a[(i, i)]).collect();
        let mut vecs = Self::zeros(n, n);
        for (new, &old) in order.iter().enumerate() {
            for k in 0..n {
                vecs[(k, new)] = v[(k, old)];
            }
        }
        (values, vecs)
    }
}

impl<T> Index<(usize, usize)> for DenseMatrix<T> {
    type Output = T;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.ncols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for DenseMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.ncols + j]
    }
}

#[derive(Clone, Debug)]
pub struct DenseCholesky<T> {
    l: DenseMatrix<T>,
}

impl<T: Real> DenseCholesky<T> {
    pub fn lower(&self) -> &DenseMatrix<T> {
        &self.l
    }

    /// Solves `L y = b`.
    pub fn forward(&self, b: &[T]) -> Vec<T> {
        let n = self.l.nrows;
        let mut y = b.to_vec();
        for i in 0..n {
            for k in 0..i {
                let t = self.l[(i, k)] * y[k];
                y[i] -= t;
            }
            y[i] /= self.l[(i, i)];
        }
        y
    }

    /// Solves `L^T x = y`.
    pub fn backward(&self, y: &[T]) -> Vec<T> {
        let n = self.l.nrows;
        let mut x = y.to_vec();
        for i in (0..n).rev() {
            for k in i + 1..n {
                let t = self.l[(k, i)] * x[k];
                x[i] -= t;
            }
            x[i] /= self.l[(i, i)];
        }
        x
    }

    pub fn solve(&self, b: &[T]) -> Vec<T> {
        self.backward(&self.forward(b))
    }
}

/// Eigenvalues (ascending) of the symmetric-definite pencil `(A, B)`.
pub fn generalized_eigenvalues<T: Real>(a: &DenseMatrix<T>, b: &DenseMatrix<T>) -> Result<Vec<T>> {
    let chol = b.cholesky()?;
    let n = a.nrows();
    // C = L^{-1} A L^{-T}
    let mut w = DenseMatrix::zeros(n, n);
    for j in 0..n {
        let col: Vec<T> = (0..n).map(|i| a[(i, j)]).collect();
        let y = chol.forward(&col);
        for i in 0..n {
            w[(i, j)] = y[i];
        }
    }
    let mut c = DenseMatrix::zeros(n, n);
    for i in 0..n {
        let row: Vec<T> = (0..n).map(|j| w[(i, j)]).collect();
        let y = chol.forward(&row);
        for j in 0..n {
            c[(i, j)] = y[j];
        }
    }
    let sym = {
        let mut s = c.clone();
        for i in 0..n {
            for j in 0..n {
                s[(i, j)] = (c[(i, j)] + c[(j, i)]) * T::lit(0.5);
            }
        }
        s
    };
    Ok(sym.symmetric_eigen().0)
}

/// Symmetric tridiagonal matrix with diagonal `diag` and off-diagonal `off`
/// (`off.len() == diag.len() - 1`).
#[derive(Clone, Debug, Default)]
pub struct SymTridiagonal<T> {
    pub diag: Vec<T>,
    pub off: Vec<T>,
}

impl<T: Real> SymTridiagonal<T> {
    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Number of eigenvalues strictly less than `x` (Sturm count).
    pub fn count_below(&self, x: T) -> usize {
        let tiny = T::min_positive_value().sqrt();
        let mut count = 0;
        let mut q = T::one();
        for i in 0..self.diag.len() {
            let b2 = if i == 0 { T::zero() } else { self.off[i - 1] * self.off[i - 1] };
            q = if i == 0 { self.diag[0] - x } else { self.diag[i] - x - b2 / q };
            if q == T::zero() {
                q = -tiny;
            }
            if q < T::zero() {
                count += 1;
            }
        }
        count
    }

    fn gershgorin(&self) -> (T, T) {
        let n = self.diag.len();
        let mut lo = T::infinity();
        let mut hi = T::neg_infinity();
        for i in 0..n {
            let mut r = T::zero();
            if i > 0 {
                r += self.off[i - 1].abs();
            }
            if i + 1 < n {
                r += self.off[i].abs();
            }
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    /// The `k`-th smallest eigenvalue (0-based) by bisection.
    pub fn eigenvalue(&self, k: usize) -> T {
        assert!(k < self.len());
        let (mut lo, mut hi) = self.gershgorin();
        let scale = lo.abs().max(hi.abs()).max(T::min_positive_value());
        for _ in 0..200 {
            let mid = (lo + hi) * T::lit(0.5);
            if mid <= lo || mid >= hi || hi - lo <= T::epsilon() * scale {
                break;
            }
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        (lo + hi) * T::lit(0.5)
    }

    pub fn extreme_eigenvalues(&self) -> (T, T) {
        (self.eigenvalue(0), self.eigenvalue(self.len() - 1))
    }

    /// Last component of the unit eigenvector for the eigenvalue `theta`
    /// (inverse iteration).
    pub fn eigvec_last_component(&self, theta: T) -> T {
        let n = self.len();
        let (lo, hi) = self.gershgorin();
        let shift = theta + (hi - lo).max(T::one()) * T::lit(1e-10);
        let mut x = vec![T::one(); n];
        for _ in 0..3 {
            x = self.solve_shifted(shift, &x);
            let nrm = x.iter().map(|v| *v * *v).sum::<T>().sqrt();
            if !(nrm > T::zero()) || !nrm.is_finite() {
                return T::zero();
            }
            for v in x.iter_mut() {
                *v /= nrm;
            }
        }
        x[n - 1]
    }

    fn solve_shifted(&self, shift: T, b: &[T]) -> Vec<T> {
        // Gaussian elimination with partial pivoting on (T - shift I).
        let n = self.len();
        let tiny = T::min_positive_value().sqrt();
        // bands: d (diag), u1 (super), u2 (second super after pivoting), l (sub)
        let mut d: Vec<T> = self.diag.iter().map(|&v| v - shift).collect();
        let mut u1: Vec<T> = self.off.clone();
        u1.push(T::zero());
        let mut u2 = vec![T::zero(); n];
        let mut l: Vec<T> = self.off.clone();
        let mut rhs = b.to_vec();
        for i in 0..n.saturating_sub(1) {
            if l[i].abs() > d[i].abs() {
                // swap rows i and i+1
                let (a0, a1, a2) = (d[i], u1[i], u2[i]);
                d[i] = l[i];
                u1[i] = d[i + 1];
                u2[i] = u1[i + 1];
                l[i] = a0;
                d[i + 1] = a1;
                u1[i + 1] = a2;
                rhs.swap(i, i + 1);
            }
            if d[i] == T::zero() {
                d[i] = tiny;
            }
            let m = l[i] / d[i];
            d[i + 1] -= m * u1[i];
            if i + 1 < n {
                u1[i + 1] -= m * u2[i];
            }
            let ri = rhs[i];
            rhs[i + 1] -= m * ri;
        }
        if d[n - 1] == T::zero() {
            d[n - 1] = tiny;
        }
        let mut x = vec![T::zero(); n];
        for i in (0..n).rev() {
            let mut s = rhs[i];
            if i + 1 < n {
                s -= u1[i] * x[i + 1];
            }
            if i + 2 < n {
                s -= u2[i] * x[i + 2];
            }
            x[i] = s / d[i];
        }
        x
    }
}
