use crate::error::Result;
use crate::linalg::{
    generalized_eigenvalues, lanczos_extremes, pcg, CsrMatrix, DenseMatrix, LanczosOptions, Preconditioner,
    SparseCholesky,
};
use crate::precond::{BlockPartition, BlockPreconditioner};
use crate::scalar::Real;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::sync::Arc;

/// Above this size the pencil is treated with Lanczos instead of a dense
/// generalized eigensolve.
pub const DENSE_LIMIT: usize = 1000;

/// Stable-splitting constant `K_a`: the largest value of
/// `(a(v0,v0) + a(vG,vG)) / a(v,v)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SplittingConstant {
    pub k_a: f64,
    /// Largest sampled quotient; a lower bound for `k_a`.
    pub sampled: f64,
    /// `"dense"` or `"lanczos"`.
    pub method: &'static str,
}

fn block_diagonal<T: Real>(a: &CsrMatrix<T>, n0: usize) -> CsrMatrix<T> {
    let mut trip = Vec::with_capacity(a.nnz());
    for i in 0..a.nrows() {
        for (j, v) in a.row(i) {
            if (i < n0) == (j < n0) {
                trip.push((i, j, v));
            }
        }
    }
    CsrMatrix::from_triplets(a.nrows(), a.ncols(), trip)
}

fn quotient<T: Real>(a: &CsrMatrix<T>, d: &CsrMatrix<T>, x: &[T]) -> f64 {
    (d.quad_form(x) / a.quad_form(x)).as_f64()
}

/// `K_a` with exact block factorizations built internally.
pub fn estimate_splitting_constant<T: Real>(
    a: &CsrMatrix<T>,
    part: &BlockPartition<T>,
    seed: u64,
) -> Result<SplittingConstant> {
    let pa = BlockPreconditioner {
        n0: part.n0,
        b0: Arc::new(SparseCholesky::factor(&part.a0)?),
        b1: Arc::new(SparseCholesky::factor(&part.a1)?),
    };
    estimate_splitting_constant_with(a, part, &pa, seed)
}

/// `K_a = 1 / lambda_min(P_A^{-1} A)` where `pa` applies
/// `diag(A_0, A_1)^{-1}`. Dense generalized eigensolve up to
/// [`DENSE_LIMIT`] unknowns, Lanczos above. The sampled value comes from
/// random vectors and perturbations of an inverse-iteration approximation
/// of the extremal eigenvector.
pub fn estimate_splitting_constant_with<T: Real>(
    a: &CsrMatrix<T>,
    part: &BlockPartition<T>,
    pa: &dyn Preconditioner<T>,
    seed: u64,
) -> Result<SplittingConstant> {
    let n = a.nrows();
    let d = block_diagonal(a, part.n0);
    let (k_a, method) = if n <= DENSE_LIMIT {
        let ev = generalized_eigenvalues(
            &DenseMatrix::from_rows(&d.to_dense()),
            &DenseMatrix::from_rows(&a.to_dense()),
        )?;
        (ev[n - 1].as_f64(), "dense")
    } else {
        let opts = LanczosOptions {
            seed,
            ..Default::default()
        };
        let est = lanczos_extremes(a, Some(pa), &opts)?;
        (1.0 / est.lambda_min, "lanczos")
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sampled = 0.0f64;
    let mut x: Vec<T> = (0..n).map(|_| T::lit(rng.gen_range(-1.0..1.0))).collect();
    for _ in 0..32 {
        sampled = sampled.max(quotient(a, &d, &x));
        let (y, _) = pcg(a, &d.mul_vec(&x), pa, T::lit(1e-10), 10 * n.max(100))?;
        let nrm = y.iter().map(|v| *v * *v).sum::<T>().sqrt();
        x = y.into_iter().map(|v| v / nrm).collect();
    }
    let scale = T::lit(0.01) / T::lit(n as f64).sqrt();
    for _ in 0..64 {
        let z: Vec<T> = x.iter().map(|v| *v + scale * T::lit(rng.gen_range(-1.0..1.0))).collect();
        sampled = sampled.max(quotient(a, &d, &z));
    }
    Ok(SplittingConstant { k_a, sampled, method })
}
