//! Preconditioned conjugate gradients.

use super::csr::CsrMatrix;
use super::dense::SymTridiagonal;
use super::{dot, norm2, Preconditioner};
use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq)]
pub struct SolveReport {
    pub iterations: usize,
    /// `||P^{-1} r_k||_2` for `k = 0..=iterations`.
    pub preconditioned_residual_history: Vec<f64>,
    pub lanczos_lambda_min: f64,
    pub lanczos_lambda_max: f64,
    pub kappa_estimate: f64,
    pub converged: bool,
}

/// Solves `A u = b` from `u = 0`, stopping once
/// `||P^{-1}(b - A u_k)||_2 <= tol * ||P^{-1} b||_2`.
///
/// The report carries extreme eigenvalue estimates of `P^{-1} A` from the
/// Lanczos tridiagonal implied by the CG coefficients.
pub fn pcg<T: Real, P: Preconditioner<T> + ?Sized>(
    a: &CsrMatrix<T>,
    b: &[T],
    precond: &P,
    tol: T,
    maxit: usize,
) -> Result<(Vec<T>, SolveReport)> {
    let n = a.nrows();
    if b.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: b.len(),
        });
    }
    if precond.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: precond.dim(),
        });
    }
    let mut x = vec![T::zero(); n];
    let mut r = b.to_vec();
    let mut z = vec![T::zero(); n];
    precond.apply(&r, &mut z);
    let z0 = norm2(&z);
    let mut history = vec![z0.as_f64()];
    let mut report = SolveReport {
        iterations: 0,
        preconditioned_residual_history: Vec::new(),
        lanczos_lambda_min: f64::NAN,
        lanczos_lambda_max: f64::NAN,
        kappa_estimate: f64::NAN,
        converged: false,
    };
    if z0 == T::zero() {
        report.converged = true;
        report.preconditioned_residual_history = history;
        return Ok((x, report));
    }
    let mut p = z.clone();
    let mut q = vec![T::zero(); n];
    let mut rz = dot(&r, &z);
    let mut alphas: Vec<T> = Vec::new();
    let mut betas: Vec<T> = Vec::new();
    for k in 1..=maxit {
        a.matvec(&p, &mut q);
        let pap = dot(&p, &q);
        if !(pap > T::zero()) {
            return Err(Error::Indefinite {
                iteration: k,
                value: pap.as_f64(),
            });
        }
        let alpha = rz / pap;
        alphas.push(alpha);
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * q[i];
        }
        precond.apply(&r, &mut z);
        let zn = norm2(&z);
        history.push(zn.as_f64());
        report.iterations = k;
        if zn <= tol * z0 {
            report.converged = true;
            break;
        }
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        betas.push(beta);
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    let t = cg_tridiagonal(&alphas, &betas);
    if !t.is_empty() {
        let (lo, hi) = t.extreme_eigenvalues();
        report.lanczos_lambda_min = lo.as_f64();
        report.lanczos_lambda_max = hi.as_f64();
        report.kappa_estimate = (hi / lo).as_f64();
    }
    report.preconditioned_residual_history = history;
    Ok((x, report))
}

/// Lanczos tridiagonal from CG step lengths `alpha_j` and `beta_j`.
pub(crate) fn cg_tridiagonal<T: Real>(alphas: &[T], betas: &[T]) -> SymTridiagonal<T> {
    let k = alphas.len();
    let mut diag = Vec::with_capacity(k);
    let mut off = Vec::with_capacity(k.saturating_sub(1));
    for j in 0..k {
        let mut d = T::one() / alphas[j];
        if j > 0 {
            d += betas[j - 1] / alphas[j - 1];
        }
        diag.push(d);
        if j + 1 < k {
            off.push(betas[j].sqrt() / alphas[j]);
        }
    }
    SymTridiagonal { diag, off }
}
