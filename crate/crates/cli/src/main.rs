use clap::{Args, Parser, Subcommand};
use cutfem::linalg::mm;
use cutfem::mesh::write_vtk;
use cutfem_cli::config::{ExperimentConfig, DEEP_MAX_LEVEL};
use cutfem_cli::output::{create, csv_string, write_csv, write_json};
use cutfem_cli::{experiments, CliError, Result};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "cutfem", version, about = "Cut finite element experiments with subspace preconditioners")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Interior and boundary dof counts per level (table1.csv).
    Dims(Flags),
    /// Discretization errors and orders (table2.csv).
    Convergence(Flags),
    /// Condition numbers and PCG iterations per level (table3.csv).
    Precond(Flags),
    /// The same at the cut level for shifted centers (table4.csv).
    Cutsweep(Flags),
    /// Cut sweep with and without ghost penalty (ablation.csv).
    Ablation(Flags),
    /// Measured constants and invariants (verify.json).
    Verify(Flags),
    /// System matrix and right-hand side in Matrix Market format.
    ExportMm(Flags),
    /// Active mesh as legacy ASCII VTK.
    ExportVtk(Flags),
}

#[derive(Args, Default)]
struct Flags {
    /// Flat key = value file; command-line flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    level: Option<u8>,
    /// Range `0..4`, `1-3` or list `0,2,4`.
    #[arg(long)]
    levels: Option<String>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    /// Comma separated center shifts for the cut sweep.
    #[arg(long)]
    delta: Option<String>,
    #[arg(long)]
    tol: Option<f64>,
    /// Comma separated subset of sgs, pa, pd, pb.
    #[arg(long)]
    precond: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Allow levels 5 and 6.
    #[arg(long)]
    deep: bool,
    #[arg(long)]
    jobs: Option<usize>,
    /// `lattice` (default) or `diameter`.
    #[arg(long)]
    mesh_size: Option<String>,
    /// Any other config key, as key=value.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

impl Flags {
    fn config(&self) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(p) => ExperimentConfig::from_file(p)?,
            None => ExperimentConfig::default(),
        };
        let explicit_levels = self.level.is_some() || self.levels.is_some();
        let mut pairs: Vec<(String, String)> = Vec::new();
        let mut push = |k: &str, v: Option<String>| {
            if let Some(v) = v {
                pairs.push((k.to_string(), v));
            }
        };
        push("levels", self.levels.clone());
        push("level", self.level.map(|v| v.to_string()));
        push("gamma", self.gamma.map(|v| v.to_string()));
        push("beta", self.beta.map(|v| v.to_string()));
        push("deltas", self.delta.clone());
        push("tol", self.tol.map(|v| v.to_string()));
        push("precond", self.precond.clone());
        push("seed", self.seed.map(|v| v.to_string()));
        push("out", self.out.as_ref().map(|p| p.display().to_string()));
        push("jobs", self.jobs.map(|v| v.to_string()));
        push("mesh_size", self.mesh_size.clone());
        for kv in &self.set {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("--set expects key=value, got '{kv}'")))?;
            pairs.push((k.to_string(), v.to_string()));
        }
        for (k, v) in pairs {
            cfg.set(&k, &v)?;
        }
        if self.deep {
            cfg.deep = true;
            if !explicit_levels && self.config.is_none() {
                cfg.levels = (0..=DEEP_MAX_LEVEL).collect();
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn emit<R: serde::Serialize>(cfg: &ExperimentConfig, name: &str, rows: &[R], start: Instant) -> Result<()> {
    print!("{}", csv_string(rows)?);
    let path = write_csv(&cfg.out, name, rows)?;
    eprintln!("wrote {} ({:.1} s)", path.display(), start.elapsed().as_secs_f64());
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    let start = Instant::now();
    match cli.command {
        Command::Dims(f) => {
            let cfg = f.config()?;
            emit(&cfg, "table1.csv", &experiments::run_dims(&cfg)?, start)?;
        }
        Command::Convergence(f) => {
            let cfg = f.config()?;
            emit(&cfg, "table2.csv", &experiments::run_convergence(&cfg)?, start)?;
        }
        Command::Precond(f) => {
            let cfg = f.config()?;
            emit(&cfg, "table3.csv", &experiments::run_precond_sweep(&cfg)?, start)?;
        }
        Command::Cutsweep(f) => {
            let cfg = f.config()?;
            emit(&cfg, "table4.csv", &experiments::run_cut_sweep(&cfg)?, start)?;
        }
        Command::Ablation(f) => {
            let cfg = f.config()?;
            emit(&cfg, "ablation.csv", &experiments::run_ablation_beta0(&cfg)?, start)?;
        }
        Command::Verify(f) => {
            let cfg = f.config()?;
            let rep = experiments::run_verify(&cfg)?;
            let path = write_json(&cfg.out, "verify.json", &rep)?;
            for c in &rep.invariants {
                println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
            }
            eprintln!("wrote {} ({:.1} s)", path.display(), start.elapsed().as_secs_f64());
            if !rep.passed {
                return Ok(ExitCode::from(2));
            }
        }
        Command::ExportMm(f) => {
            let cfg = f.config()?;
            for &level in &cfg.levels {
                let case = experiments::build_case(&cfg, level, cfg.x0, cfg.beta)?;
                let (pa, mut wa) = create(&cfg.out, &format!("A_l{level}.mtx"))?;
                mm::write_matrix(&case.sys.a, true, &mut wa)?;
                let (pb, mut wb) = create(&cfg.out, &format!("b_l{level}.mtx"))?;
                mm::write_vector(&case.sys.b, &mut wb)?;
                wa.flush().map_err(|source| CliError::Io { path: pa.clone(), source })?;
                wb.flush().map_err(|source| CliError::Io { path: pb.clone(), source })?;
                println!("{} {} (n = {}, n0 = {})", pa.display(), pb.display(), case.split.n(), case.split.n_interior);
            }
        }
        Command::ExportVtk(f) => {
            let cfg = f.config()?;
            for &level in &cfg.levels {
                let (mesh, split) = experiments::build_mesh(&cfg, level, cfg.x0)?;
                let (path, mut w) = create(&cfg.out, &format!("mesh_l{level}.vtk"))?;
                write_vtk(&mesh, &split, &mut w)
                    .and_then(|_| w.flush())
                    .map_err(|source| CliError::Io { path: path.clone(), source })?;
                println!("{}", path.display());
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
