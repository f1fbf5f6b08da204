use crate::config::ExperimentConfig;
use crate::error::{CliError, Result};
use cutfem::assembly::{assemble_b_form, assemble_system, AssembledSystem, ManufacturedSolution, NitscheParams};
use cutfem::geometry::Sphere;
use cutfem::linalg::{lanczos_extremes, pcg, Jacobi, LanczosOptions};
use cutfem::mesh::{classify_dofs, ActiveMesh, Lattice, SubspaceSplit};
use cutfem::precond::{build_mg_hierarchy, B0Kind, PreconditionerFactory, PreconditionerSpec};
use cutfem::verify::{check_matrix_lemma, compute_errors, constant_report, ConstantReport, ReportOptions};
use rayon::prelude::*;
use serde::Serialize;
use std::sync::Arc;

/// Relative tolerance of the solves behind the discretization errors.
pub const ERROR_SOLVE_TOL: f64 = 1e-10;

/// Mesh, splitting and assembled system for one configuration.
pub struct Case {
    pub level: u8,
    pub x0: [f64; 3],
    pub mesh: ActiveMesh<f64>,
    pub split: SubspaceSplit,
    pub sys: AssembledSystem<f64>,
}

fn params(cfg: &ExperimentConfig, beta: f64) -> Result<NitscheParams<f64>> {
    Ok(NitscheParams::new(cfg.gamma, beta)?.with_mesh_size(cfg.mesh_size))
}

pub fn build_mesh(cfg: &ExperimentConfig, level: u8, x0: [f64; 3]) -> Result<(ActiveMesh<f64>, SubspaceSplit)> {
    let lattice = Lattice::new(level, cfg.subdivisions, cfg.half_width)?;
    let mesh = ActiveMesh::build(lattice, &Sphere::new(x0, cfg.radius)?)?;
    let split = classify_dofs(&mesh);
    Ok((mesh, split))
}

pub fn build_case(cfg: &ExperimentConfig, level: u8, x0: [f64; 3], beta: f64) -> Result<Case> {
    let (mesh, split) = build_mesh(cfg, level, x0)?;
    let sys = assemble_system(&mesh, &split, &params(cfg, beta)?, &ManufacturedSolution::new(x0))?;
    Ok(Case {
        level,
        x0,
        mesh,
        split,
        sys,
    })
}

/// Maps `f` over `items`, on `jobs` threads when `jobs > 1`; output order
/// follows input order.
fn map_cells<I: Sync, R: Send>(jobs: usize, items: &[I], f: impl Fn(&I) -> R + Sync + Send) -> Result<Vec<R>> {
    if jobs <= 1 {
        return Ok(items.iter().map(f).collect());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    Ok(pool.install(|| items.par_iter().map(&f).collect()))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DimsRow {
    pub level: u8,
    pub n0: usize,
    pub n1: usize,
    pub n: usize,
    pub cells: usize,
    pub cut_cells: usize,
}

pub fn run_dims(cfg: &ExperimentConfig) -> Result<Vec<DimsRow>> {
    cfg.validate()?;
    map_cells(cfg.jobs, &cfg.levels, |&level| {
        let (mesh, split) = build_mesh(cfg, level, cfg.x0)?;
        Ok(DimsRow {
            level,
            n0: split.n_interior,
            n1: split.n_boundary,
            n: split.n(),
            cells: mesh.cells.len(),
            cut_cells: mesh.cut_cells.len(),
        })
    })?
    .into_iter()
    .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub level: u8,
    pub h: f64,
    pub n: usize,
    pub l2: f64,
    pub l2_order: Option<f64>,
    pub h1: f64,
    pub h1_order: Option<f64>,
    pub h1_full: f64,
    pub l2_omega_h: f64,
    pub h1_omega_h: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn convergence_row(cfg: &ExperimentConfig, level: u8) -> Result<ConvergenceRow> {
    let case = build_case(cfg, level, cfg.x0, cfg.beta)?;
    let mut fac = PreconditionerFactory::new(&case.sys.a, &case.split);
    let spec = if fac.partition().n0 > 0 {
        let h = build_mg_hierarchy(&case.mesh, &case.split, &fac.partition().a0, None)?;
        fac = fac.with_hierarchy(Arc::new(h));
        PreconditionerSpec::PB
    } else {
        PreconditionerSpec::PD
    };
    let p = fac.build(spec)?;
    let (u, rep) = pcg(&case.sys.a, &case.sys.b, p.as_ref(), ERROR_SOLVE_TOL, cfg.maxit)?;
    if !rep.converged {
        log::warn!("level {level}: solver stopped after {} iterations without converging", rep.iterations);
    }
    let e = compute_errors(&u, &ManufacturedSolution::new(cfg.x0), &case.mesh, &case.split)?;
    Ok(ConvergenceRow {
        level,
        h: case.mesh.lattice.spacing(),
        n: case.split.n(),
        l2: e.l2,
        l2_order: None,
        h1: e.h1,
        h1_order: None,
        h1_full: e.h1_full,
        l2_omega_h: e.l2_omega_h,
        h1_omega_h: e.h1_omega_h,
        iterations: rep.iterations,
        converged: rep.converged,
    })
}

pub fn run_convergence(cfg: &ExperimentConfig) -> Result<Vec<ConvergenceRow>> {
    cfg.validate()?;
    let mut rows: Vec<ConvergenceRow> = map_cells(cfg.jobs, &cfg.levels, |&l| convergence_row(cfg, l))?
        .into_iter()
        .collect::<Result<_>>()?;
    for i in 1..rows.len() {
        if rows[i].level == rows[i - 1].level + 1 {
            rows[i].l2_order = Some((rows[i - 1].l2 / rows[i].l2).log2());
            rows[i].h1_order = Some((rows[i - 1].h1 / rows[i].h1).log2());
        }
    }
    Ok(rows)
}

/// One row of the preconditioner tables (level sweep, cut sweep, ablation).
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SweepRow {
    pub level: u8,
    pub delta: Option<f64>,
    pub beta: f64,
    pub n0: usize,
    pub n1: usize,
    /// Extreme Lanczos Ritz values of `A`.
    pub lambda_min_a: Option<f64>,
    pub lambda_max_a: Option<f64>,
    /// Lanczos estimate of `kappa_2(A)`; empty when `A` is indefinite.
    pub kappa_a: Option<f64>,
    /// `1 / lambda_min(P_A^{-1} A)`.
    pub k_a: Option<f64>,
    pub kappa_pa: Option<f64>,
    /// `kappa(diag(A_1)^{-1} A_1)`.
    pub kappa_a1_jacobi: Option<f64>,
    pub sgs_iters: Option<usize>,
    pub pa_iters: Option<usize>,
    pub pd_iters: Option<usize>,
    pub pb_iters: Option<usize>,
    /// Condition estimates from the CG coefficients of each run.
    pub sgs_kappa: Option<f64>,
    pub pa_kappa: Option<f64>,
    pub pd_kappa: Option<f64>,
    pub pb_kappa: Option<f64>,
    pub mg_levels: Option<usize>,
    /// `ok`, or the failures of this row separated by `;`.
    pub status: String,
}

impl SweepRow {
    pub fn iterations(&self, spec: PreconditionerSpec) -> Option<usize> {
        match spec {
            PreconditionerSpec::SGS => self.sgs_iters,
            PreconditionerSpec::PA => self.pa_iters,
            PreconditionerSpec::PD => self.pd_iters,
            PreconditionerSpec::PB => self.pb_iters,
            _ => None,
        }
    }

    fn slots(&mut self, spec: PreconditionerSpec) -> Option<(&mut Option<usize>, &mut Option<f64>)> {
        match spec {
            PreconditionerSpec::SGS => Some((&mut self.sgs_iters, &mut self.sgs_kappa)),
            PreconditionerSpec::PA => Some((&mut self.pa_iters, &mut self.pa_kappa)),
            PreconditionerSpec::PD => Some((&mut self.pd_iters, &mut self.pd_kappa)),
            PreconditionerSpec::PB => Some((&mut self.pb_iters, &mut self.pb_kappa)),
            _ => None,
        }
    }
}

fn needs_hierarchy(specs: &[PreconditionerSpec]) -> bool {
    specs
        .iter()
        .any(|s| matches!(s, PreconditionerSpec::Block { b0: B0Kind::VCycle(_), .. }))
}

/// Condition numbers and PCG iteration counts for one configuration.
/// Failures are recorded in `status` instead of aborting the row.
pub fn sweep_row(cfg: &ExperimentConfig, level: u8, x0: [f64; 3], delta: Option<f64>, beta: f64) -> Result<SweepRow> {
    let case = build_case(cfg, level, x0, beta)?;
    let a = &case.sys.a;
    let mut row = SweepRow {
        level,
        delta,
        beta,
        n0: case.split.n_interior,
        n1: case.split.n_boundary,
        ..Default::default()
    };
    let mut fails: Vec<String> = Vec::new();
    let lopts = LanczosOptions {
        max_steps: cfg.lanczos_steps,
        seed: cfg.seed,
        ..Default::default()
    };
    match lanczos_extremes(a, None, &lopts) {
        Ok(e) => {
            row.lambda_min_a = Some(e.lambda_min);
            row.lambda_max_a = Some(e.lambda_max);
            if e.lambda_min > 0.0 {
                row.kappa_a = Some(e.kappa);
            } else {
                fails.push(format!("A is indefinite (lambda_min = {:.3e})", e.lambda_min));
            }
        }
        Err(e) => fails.push(format!("kappa(A): {e}")),
    }
    let mut fac = PreconditionerFactory::new(a, &case.split);
    if needs_hierarchy(&cfg.preconditioners) && fac.partition().n0 > 0 {
        match build_mg_hierarchy(&case.mesh, &case.split, &fac.partition().a0, None) {
            Ok(h) => {
                row.mg_levels = Some(h.num_levels());
                fac = fac.with_hierarchy(Arc::new(h));
            }
            Err(e) => fails.push(format!("hierarchy: {e}")),
        }
    }
    for &spec in &cfg.preconditioners {
        let res = fac
            .build(spec)
            .and_then(|p| pcg(a, &case.sys.b, p.as_ref(), cfg.tol, cfg.maxit));
        let Some((it, kappa)) = row.slots(spec) else { continue };
        match res {
            Ok((_, rep)) if rep.converged => {
                *it = Some(rep.iterations);
                *kappa = Some(rep.kappa_estimate);
            }
            Ok((_, rep)) => fails.push(format!("{spec}: no convergence in {} iterations", rep.iterations)),
            Err(e) => fails.push(format!("{spec}: {e}")),
        }
    }
    match fac
        .build(PreconditionerSpec::PA)
        .and_then(|p| lanczos_extremes(a, Some(p.as_ref()), &lopts))
    {
        Ok(e) => {
            row.kappa_pa = Some(e.kappa);
            row.k_a = Some(1.0 / e.lambda_min);
        }
        Err(e) => fails.push(format!("kappa(P_A^-1 A): {e}")),
    }
    let a1 = &fac.partition().a1;
    match Jacobi::new(a1).and_then(|j| lanczos_extremes(a1, Some(&j), &lopts)) {
        Ok(e) => row.kappa_a1_jacobi = Some(e.kappa),
        Err(e) => fails.push(format!("kappa(diag(A1)^-1 A1): {e}")),
    }
    row.status = if fails.is_empty() { "ok".into() } else { fails.join("; ") };
    Ok(row)
}

pub fn run_precond_sweep(cfg: &ExperimentConfig) -> Result<Vec<SweepRow>> {
    cfg.validate()?;
    map_cells(cfg.jobs, &cfg.levels, |&l| sweep_row(cfg, l, cfg.x0, None, cfg.beta))?
        .into_iter()
        .collect()
}

pub fn run_cut_sweep(cfg: &ExperimentConfig) -> Result<Vec<SweepRow>> {
    cfg.validate()?;
    map_cells(cfg.jobs, &cfg.deltas, |&d| {
        sweep_row(cfg, cfg.cut_level, ExperimentConfig::shifted_center(d), Some(d), cfg.beta)
    })?
    .into_iter()
    .collect()
}

/// The cut sweep with the configured `beta` and with `beta = 0`, side by side.
pub fn run_ablation_beta0(cfg: &ExperimentConfig) -> Result<Vec<SweepRow>> {
    cfg.validate()?;
    let cells: Vec<(f64, f64)> = cfg
        .deltas
        .iter()
        .flat_map(|&d| [(d, cfg.beta), (d, 0.0)])
        .collect();
    map_cells(cfg.jobs, &cells, |&(d, beta)| {
        sweep_row(cfg, cfg.cut_level, ExperimentConfig::shifted_center(d), Some(d), beta)
    })?
    .into_iter()
    .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InvariantCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MatrixLemmaResult {
    pub size: usize,
    pub trials: usize,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub config: ExperimentConfig,
    pub seed: u64,
    pub matrix_lemma: MatrixLemmaResult,
    pub reports: Vec<ConstantReport>,
    pub invariants: Vec<InvariantCheck>,
    pub passed: bool,
}

fn verify_cell(cfg: &ExperimentConfig, level: u8, x0: [f64; 3], delta: f64) -> Result<ConstantReport> {
    let case = build_case(cfg, level, x0, cfg.beta)?;
    let with_b = level <= cfg.form_equivalence_max_level;
    let b = if with_b {
        Some(assemble_b_form(&case.mesh, &case.split, &case.sys.params)?)
    } else {
        None
    };
    let n0 = case.split.n_interior;
    let hierarchy = if n0 > 0 {
        let a0 = case.sys.a.principal_submatrix(0..n0);
        Some(Arc::new(build_mg_hierarchy(&case.mesh, &case.split, &a0, None)?))
    } else {
        None
    };
    let opts = ReportOptions {
        n_samples: cfg.samples,
        cs_pairs: 50,
        seed: cfg.seed,
        form_equivalence: with_b,
        lanczos_steps: cfg.lanczos_steps,
    };
    Ok(constant_report(&case.mesh, &case.sys, b.as_ref(), delta, hierarchy, &opts)?)
}

fn check(name: &str, passed: bool, detail: String) -> InvariantCheck {
    InvariantCheck {
        name: name.into(),
        passed,
        detail,
    }
}

/// Runs the verification measurements at every configured level (center
/// `x0`) and over the cut sweep at `cut_level`. The result's `passed` is
/// false if a hard invariant fails.
pub fn run_verify(cfg: &ExperimentConfig) -> Result<VerifyReport> {
    cfg.validate()?;
    let mut cells: Vec<(u8, [f64; 3], f64)> = cfg.levels.iter().map(|&l| (l, cfg.x0, 0.0)).collect();
    cells.extend(
        cfg.deltas
            .iter()
            .map(|&d| (cfg.cut_level, ExperimentConfig::shifted_center(d), d)),
    );
    let reports: Vec<ConstantReport> = map_cells(cfg.jobs, &cells, |&(l, x0, d)| verify_cell(cfg, l, x0, d))?
        .into_iter()
        .collect::<Result<_>>()?;

    let matrix_lemma = MatrixLemmaResult {
        size: 20,
        trials: 100,
        holds: check_matrix_lemma(20, 100, cfg.seed),
    };
    let mut inv = vec![check(
        "matrix_lemma",
        matrix_lemma.holds,
        "100 random SPD trials of size 20".into(),
    )];
    let worst_cs = reports.iter().map(|r| r.strengthened_cs.max_ratio).fold(0.0, f64::max);
    inv.push(check(
        "strengthened_cs",
        reports.iter().all(|r| r.strengthened_cs.holds()),
        format!("max element ratio {worst_cs:.6} against bound 0.8"),
    ));
    let positive = reports.iter().all(|r| {
        r.strip.interior.is_finite_positive()
            && r.strip.boundary.is_finite_positive()
            && r.estfund_max.is_finite()
            && r.estfund_max > 0.0
            && r.form_equivalence.map_or(true, |f| f.is_finite_positive())
    });
    inv.push(check("ratios_positive", positive, "all sampled ratios finite and positive".into()));
    let ka_ok = reports
        .iter()
        .all(|r| r.splitting.k_a >= 1.0 - 1e-8 && r.splitting.sampled <= r.splitting.k_a * (1.0 + 1e-6));
    inv.push(check(
        "splitting_constant",
        ka_ok,
        "K_a >= 1 and sampled quotient <= K_a".into(),
    ));
    let passed = inv.iter().all(|c| c.passed);
    Ok(VerifyReport {
        config: cfg.clone(),
        seed: cfg.seed,
        matrix_lemma,
        reports,
        invariants: inv,
        passed,
    })
}
