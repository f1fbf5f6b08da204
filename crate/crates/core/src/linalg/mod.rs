//! Sparse and dense linear algebra: CSR storage, sparse Cholesky, smoothers,
//! preconditioned conjugate gradients and Lanczos condition estimates.

mod cholesky;
mod csr;
pub mod dense;
pub mod mm;
mod lanczos;
mod ordering;
mod pcg;
mod smoothers;

pub use cholesky::SparseCholesky;
pub use csr::{CsrMatrix, SymmetricSparseMatrix};
pub use dense::{generalized_eigenvalues, DenseCholesky, DenseMatrix, SymTridiagonal};
pub use lanczos::{estimate_condition, lanczos_extremes, LanczosEstimate, LanczosOptions};
pub use ordering::nested_dissection;
pub use pcg::{pcg, SolveReport};
pub use smoothers::{Jacobi, Sgs};

use crate::scalar::Real;

/// A fixed linear operator approximating `A^{-1}`.
pub trait Preconditioner<T: Real>: Send + Sync {
    fn dim(&self) -> usize;

    /// Writes `z = P^{-1} r`.
    fn apply(&self, r: &[T], z: &mut [T]);

    fn apply_vec(&self, r: &[T]) -> Vec<T> {
        let mut z = vec![T::zero(); r.len()];
        self.apply(r, &mut z);
        z
    }
}

/// `P = I`.
#[derive(Clone, Copy, Debug)]
pub struct Identity(pub usize);

impl<T: Real> Preconditioner<T> for Identity {
    fn dim(&self) -> usize {
        self.0
    }

    fn apply(&self, r: &[T], z: &mut [T]) {
        z.copy_from_slice(r);
    }
}

impl<T: Real, P: Preconditioner<T> + ?Sized> Preconditioner<T> for &P {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn apply(&self, r: &[T], z: &mut [T]) {
        (**self).apply(r, z)
    }
}

impl<T: Real, P: Preconditioner<T> + ?Sized> Preconditioner<T> for Box<P> {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn apply(&self, r: &[T], z: &mut [T]) {
        (**self).apply(r, z)
    }
}

impl<T: Real, P: Preconditioner<T> + ?Sized> Preconditioner<T> for std::sync::Arc<P> {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn apply(&self, r: &[T], z: &mut [T]) {
        (**self).apply(r, z)
    }
}

pub(crate) fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(x, y)| *x * *y).sum()
}

pub(crate) fn norm2<T: Real>(a: &[T]) -> T {
    dot(a, a).sqrt()
}
