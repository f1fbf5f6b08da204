//! Extreme eigenvalues of `P^{-1} A` by Lanczos with full
//! reorthogonalization in the `P` inner product.

use super::csr::CsrMatrix;
use super::dense::SymTridiagonal;
use super::{dot, Identity, Preconditioner};
use crate::error::{Error, Result};
use crate::scalar::Real;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Copy, Debug)]
pub struct LanczosOptions {
    pub max_steps: usize,
    /// Stop once both extreme Ritz pairs have relative residual below this.
    pub tol: f64,
    pub seed: u64,
    pub max_restarts: usize,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        Self {
            max_steps: 500,
            tol: 1e-8,
            seed: 0x5eed,
            max_restarts: 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LanczosEstimate {
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub kappa: f64,
    pub steps: usize,
    pub restarts: usize,
    pub converged: bool,
    /// Extreme Ritz values after each step.
    pub ritz_history: Vec<(f64, f64)>,
}

/// `lambda_max / lambda_min` of `P^{-1} A` (of `A` when `precond` is
/// `None`), at most `max_steps` Lanczos steps.
///
/// Ritz values lie inside the spectrum, so the result is an estimate from
/// below of the true condition number.
pub fn estimate_condition<T: Real>(
    a: &CsrMatrix<T>,
    precond: Option<&dyn Preconditioner<T>>,
    max_steps: usize,
) -> Result<f64> {
    let opts = LanczosOptions {
        max_steps,
        ..Default::default()
    };
    Ok(lanczos_extremes(a, precond, &opts)?.kappa)
}

pub fn lanczos_extremes<T: Real>(
    a: &CsrMatrix<T>,
    precond: Option<&dyn Preconditioner<T>>,
    opts: &LanczosOptions,
) -> Result<LanczosEstimate> {
    let n = a.nrows();
    if n == 0 {
        return Err(Error::InvalidInput("empty operator".into()));
    }
    let ident = Identity(n);
    let p: &dyn Preconditioner<T> = precond.unwrap_or(&ident);
    if p.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: p.dim(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let max_steps = opts.max_steps.min(n).max(1);

    // qs: Krylov basis; us = P qs
    let mut qs: Vec<Vec<T>> = Vec::new();
    let mut us: Vec<Vec<T>> = Vec::new();
    let mut t = SymTridiagonal::<T> {
        diag: Vec::new(),
        off: Vec::new(),
    };
    let mut restarts = 0;
    let mut history = Vec::new();
    let mut converged = false;
    let mut w = vec![T::zero(); n];

    let (mut q, mut u) = match start_vector(&mut rng, n, p, &qs, &us) {
        Some(v) => v,
        None => return Err(Error::InvalidInput("could not build a Lanczos start vector".into())),
    };
    loop {
        a.matvec(&q, &mut w);
        let alpha = dot(&q, &w);
        t.diag.push(alpha);
        qs.push(q);
        us.push(u);
        let k = qs.len();

        // next P-space vector, fully reorthogonalized twice
        let mut un = w.clone();
        for _ in 0..2 {
            for (qi, ui) in qs.iter().zip(&us) {
                let c = dot(qi, &un);
                for (x, y) in un.iter_mut().zip(ui) {
                    *x -= c * *y;
                }
            }
        }
        let qn = p.apply_vec(&un);
        let b2 = dot(&qn, &un);
        let beta = if b2 > T::zero() { b2.sqrt() } else { T::zero() };

        let (lo, hi) = t.extreme_eigenvalues();
        history.push((lo.as_f64(), hi.as_f64()));
        let scale = hi.abs().max(lo.abs());
        if k >= max_steps {
            if k == n {
                converged = true;
            }
            break;
        }
        let tol = T::lit(opts.tol);
        let res_lo = beta * t.eigvec_last_component(lo).abs();
        let res_hi = beta * t.eigvec_last_component(hi).abs();
        if k > 1 && res_lo <= tol * lo.abs() && res_hi <= tol * hi.abs() {
            converged = true;
            break;
        }
        let breakdown = beta <= T::epsilon() * T::lit(100.0) * scale;
        if breakdown {
            if restarts >= opts.max_restarts {
                break;
            }
            match start_vector(&mut rng, n, p, &qs, &us) {
                Some((q2, u2)) => {
                    restarts += 1;
                    t.off.push(T::zero());
                    q = q2;
                    u = u2;
                }
                None => {
                    converged = true;
                    break;
                }
            }
        } else {
            t.off.push(beta);
            q = qn.into_iter().map(|v| v / beta).collect();
            u = un.into_iter().map(|v| v / beta).collect();
        }
    }
    let (lo, hi) = *history.last().unwrap();
    Ok(LanczosEstimate {
        lambda_min: lo,
        lambda_max: hi,
        kappa: hi / lo,
        steps: qs.len(),
        restarts,
        converged,
        ritz_history: history,
    })
}

/// Random `P`-normalized vector `P`-orthogonal to the current basis.
fn start_vector<T: Real>(
    rng: &mut ChaCha8Rng,
    n: usize,
    p: &dyn Preconditioner<T>,
    qs: &[Vec<T>],
    us: &[Vec<T>],
) -> Option<(Vec<T>, Vec<T>)> {
    for _ in 0..3 {
        let mut u: Vec<T> = (0..n).map(|_| T::lit(rng.gen_range(-1.0..1.0))).collect();
        for _ in 0..2 {
            for (qi, ui) in qs.iter().zip(us) {
                let c = dot(qi, &u);
                for (x, y) in u.iter_mut().zip(ui) {
                    *x -= c * *y;
                }
            }
        }
        let q = p.apply_vec(&u);
        let nrm2 = dot(&q, &u);
        if nrm2 > T::epsilon() {
            let s = nrm2.sqrt();
            return Some((q.into_iter().map(|v| v / s).collect(), u.into_iter().map(|v| v / s).collect()));
        }
    }
    None
}
