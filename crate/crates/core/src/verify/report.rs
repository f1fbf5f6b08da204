use super::constants::{
    check_estfund, check_strengthened_cs, measure_norm_equivalence_strip, CsReport, RatioInterval, StripRatios,
};
use super::splitting::{estimate_splitting_constant_with, SplittingConstant};
use crate::assembly::AssembledSystem;
use crate::error::Result;
use crate::linalg::{estimate_condition, lanczos_extremes, Jacobi, LanczosOptions, SparseCholesky};
use crate::mesh::ActiveMesh;
use crate::precond::{MGHierarchy, PreconditionerFactory, PreconditionerSpec, VCyclePreconditioner};
use crate::scalar::Real;
use serde::Serialize;
use std::sync::Arc;

/// Measured constants for one `(level, delta, gamma, beta)` configuration.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstantReport {
    pub level: u8,
    pub delta: f64,
    pub gamma: f64,
    pub beta: f64,
    pub seed: u64,
    pub n_interior: usize,
    pub n_boundary: usize,
    /// Spectrum of the pencil `(A, B)`: `v^T A v / v^T B v`.
    pub form_equivalence: Option<RatioInterval>,
    pub strip: StripRatios,
    pub estfund_max: f64,
    pub strengthened_cs: CsReport,
    pub splitting: SplittingConstant,
    pub kappa_a: f64,
    pub kappa_pa: f64,
    pub kappa_a1: f64,
    /// `kappa(diag(A_1)^{-1} A_1)`.
    pub kappa_a1_jacobi: f64,
    /// `kappa(B_0^{-1} A_0)` for one V-cycle.
    pub kappa_mg: Option<f64>,
}

#[derive(Clone, Copy, Debug)]
pub struct ReportOptions {
    pub n_samples: usize,
    pub cs_pairs: usize,
    pub seed: u64,
    /// Also factor `B` to bound the pencil `(A, B)`.
    pub form_equivalence: bool,
    pub lanczos_steps: usize,
}

impl Default for ReportOptions {
    fn default() -> Self {
        Self {
            n_samples: 200,
            cs_pairs: 50,
            seed: 0x5eed,
            form_equivalence: true,
            lanczos_steps: 500,
        }
    }
}

/// Runs every measurement on one assembled system.
pub fn constant_report<T: Real>(
    mesh: &ActiveMesh<T>,
    sys: &AssembledSystem<T>,
    b: Option<&crate::linalg::CsrMatrix<T>>,
    delta: f64,
    hierarchy: Option<Arc<MGHierarchy<T>>>,
    opts: &ReportOptions,
) -> Result<ConstantReport> {
    let split = &sys.split;
    let seed = opts.seed;
    let lopts = LanczosOptions {
        max_steps: opts.lanczos_steps,
        seed,
        ..Default::default()
    };
    let mut factory = PreconditionerFactory::new(&sys.a, split);
    if let Some(h) = hierarchy.clone() {
        factory = factory.with_hierarchy(h);
    }
    let pa = factory.build(PreconditionerSpec::PA)?;
    let part = factory.partition();

    let form_equivalence = match (opts.form_equivalence, b) {
        (true, Some(b)) => {
            let chol = SparseCholesky::factor(b)?;
            let e = lanczos_extremes(&sys.a, Some(&chol), &lopts)?;
            Some(RatioInterval {
                min: e.lambda_min,
                max: e.lambda_max,
            })
        }
        _ => None,
    };
    let kappa_pa = lanczos_extremes(&sys.a, Some(pa.as_ref()), &lopts)?.kappa;
    let kappa_mg = match hierarchy {
        Some(h) if part.n0 > 0 => {
            let v = VCyclePreconditioner { hierarchy: h, cycles: 1 };
            Some(estimate_condition(&part.a0, Some(&v), opts.lanczos_steps)?)
        }
        _ => None,
    };
    Ok(ConstantReport {
        level: mesh.level(),
        delta,
        gamma: sys.params.gamma.as_f64(),
        beta: sys.params.beta.as_f64(),
        seed,
        n_interior: split.n_interior,
        n_boundary: split.n_boundary,
        form_equivalence,
        strip: measure_norm_equivalence_strip(mesh, split, opts.n_samples, seed)?,
        estfund_max: check_estfund(mesh, split, opts.n_samples, seed)?,
        strengthened_cs: check_strengthened_cs(mesh, split, opts.cs_pairs, seed),
        splitting: estimate_splitting_constant_with(&sys.a, part, pa.as_ref(), seed)?,
        kappa_a: estimate_condition(&sys.a, None, opts.lanczos_steps)?,
        kappa_pa,
        kappa_a1: estimate_condition(&part.a1, None, opts.lanczos_steps)?,
        kappa_a1_jacobi: estimate_condition(&part.a1, Some(&Jacobi::new(&part.a1)?), opts.lanczos_steps)?,
        kappa_mg,
    })
}
