//! Point Jacobi and symmetric Gauss-Seidel.

use super::csr::CsrMatrix;
use super::Preconditioner;
use crate::error::{Error, Result};
use crate::scalar::Real;

fn inverse_diagonal<T: Real>(a: &CsrMatrix<T>) -> Result<Vec<T>> {
    a.diagonal()
        .into_iter()
        .enumerate()
        .map(|(i, d)| if d == T::zero() { Err(Error::ZeroDiagonal(i)) } else { Ok(T::one() / d) })
        .collect()
}

/// `P = diag(A)`.
#[derive(Clone, Debug)]
pub struct Jacobi<T> {
    inv_diag: Vec<T>,
}

impl<T: Real> Jacobi<T> {
    pub fn new(a: &CsrMatrix<T>) -> Result<Self> {
        Ok(Self {
            inv_diag: inverse_diagonal(a)?,
        })
    }
}

impl<T: Real> Preconditioner<T> for Jacobi<T> {
    fn dim(&self) -> usize {
        self.inv_diag.len()
    }

    fn apply(&self, r: &[T], z: &mut [T]) {
        for ((zi, ri), di) in z.iter_mut().zip(r).zip(&self.inv_diag) {
            *zi = *ri * *di;
        }
    }
}

/// `P = (D + L) D^{-1} (D + L^T)` in the natural dof order.
#[derive(Clone, Debug)]
pub struct Sgs<T> {
    a: CsrMatrix<T>,
    inv_diag: Vec<T>,
}

impl<T: Real> Sgs<T> {
    pub fn new(a: CsrMatrix<T>) -> Result<Self> {
        let inv_diag = inverse_diagonal(&a)?;
        Ok(Self { a, inv_diag })
    }

    pub fn matrix(&self) -> &CsrMatrix<T> {
        &self.a
    }

    /// One forward Gauss-Seidel sweep for `A x = b`, updating `x` in place.
    pub fn forward_sweep(&self, b: &[T], x: &mut [T]) {
        for i in 0..self.a.nrows() {
            let mut s = b[i];
            for (j, v) in self.a.row(i) {
                if j != i {
                    s -= v * x[j];
                }
            }
            x[i] = s * self.inv_diag[i];
        }
    }

    /// One backward Gauss-Seidel sweep for `A x = b`.
    pub fn backward_sweep(&self, b: &[T], x: &mut [T]) {
        for i in (0..self.a.nrows()).rev() {
            let mut s = b[i];
            for (j, v) in self.a.row(i) {
                if j != i {
                    s -= v * x[j];
                }
            }
            x[i] = s * self.inv_diag[i];
        }
    }
}

impl<T: Real> Preconditioner<T> for Sgs<T> {
    fn dim(&self) -> usize {
        self.inv_diag.len()
    }

    fn apply(&self, r: &[T], z: &mut [T]) {
        let n = self.inv_diag.len();
        let rp = self.a.row_ptr();
        let ci = self.a.col_idx();
        let va = self.a.values();
        // (D + L) y = r
        for i in 0..n {
            let mut s = r[i];
            for p in rp[i]..rp[i + 1] {
                let j = ci[p];
                if j < i {
                    s -= va[p] * z[j];
                }
            }
            z[i] = s * self.inv_diag[i];
        }
        // (D + L^T) z = D y
        for i in (0..n).rev() {
            let mut s = z[i] / self.inv_diag[i];
            for p in rp[i]..rp[i + 1] {
                let j = ci[p];
                if j > i {
                    s -= va[p] * z[j];
                }
            }
            z[i] = s * self.inv_diag[i];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::dense::DenseMatrix;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn tridiag(n: usize) -> CsrMatrix<f64> {
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, 2.0));
            if i + 1 < n {
                t.push((i, i + 1, -1.0));
                t.push((i + 1, i, -1.0));
            }
        }
        CsrMatrix::from_triplets(n, n, t)
    }

    #[test]
    fn diagonal_matrix_gives_diagonal_scaling() {
        let a = CsrMatrix::from_diagonal(&[2.0, 4.0, 8.0]);
        let z = Sgs::new(a).unwrap().apply_vec(&[1.0, 1.0, 1.0]);
        assert_eq!(z, vec![0.5, 0.25, 0.125]);
    }

    #[test]
    fn matches_dense_oracle() {
        let a = tridiag(5);
        let d = a.to_dense();
        let mut dl = DenseMatrix::zeros(5, 5);
        let mut dinv = DenseMatrix::zeros(5, 5);
        for i in 0..5 {
            dinv[(i, i)] = 1.0 / d[i][i];
            for j in 0..=i {
                dl[(i, j)] = d[i][j];
            }
        }
        let p = dl.matmul(&dinv).matmul(&dl.transpose());
        let e1 = [1.0, 0.0, 0.0, 0.0, 0.0];
        let z = Sgs::new(a).unwrap().apply_vec(&e1);
        let pz = p.mul_vec(&z);
        for i in 0..5 {
            assert!((pz[i] - e1[i]).abs() < 1e-14);
        }
    }

    #[test]
    fn sgs_operator_is_symmetric() {
        let a = tridiag(30);
        let s = Sgs::new(a).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let x: Vec<f64> = (0..30).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let y: Vec<f64> = (0..30).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let l = crate::linalg::dot(&s.apply_vec(&x), &y);
            let r = crate::linalg::dot(&x, &s.apply_vec(&y));
            assert!((l - r).abs() < 1e-12);
        }
    }

    #[test]
    fn sgs_beats_jacobi_on_energy_error() {
        let a = tridiag(40);
        let ones = vec![1.0; 40];
        let r = a.mul_vec(&ones);
        let zs = Sgs::new(a.clone()).unwrap().apply_vec(&r);
        let zj = Jacobi::new(&a).unwrap().apply_vec(&r);
        let err = |z: &[f64]| {
            let e: Vec<f64> = z.iter().map(|v| 1.0 - v).collect();
            a.quad_form(&e)
        };
        assert!(err(&zs) < err(&zj));
    }

    #[test]
    fn zero_diagonal_is_reported() {
        let a = CsrMatrix::from_dense(&[vec![1.0, 1.0], vec![1.0, 0.0]]);
        assert!(matches!(Sgs::new(a), Err(Error::ZeroDiagonal(1))));
    }
}
