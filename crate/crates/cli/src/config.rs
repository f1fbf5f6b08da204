use crate::error::{CliError, Result};
use cutfem::assembly::MeshSize;
use cutfem::precond::PreconditionerSpec;
use serde::Serialize;
use std::path::{Path, PathBuf};

/// Deepest level run without `--deep`.
pub const DEFAULT_MAX_LEVEL: u8 = 4;
/// Deepest level accepted at all.
pub const DEEP_MAX_LEVEL: u8 = 6;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub half_width: f64,
    /// Cubes per axis at level 0.
    pub subdivisions: u32,
    pub x0: [f64; 3],
    pub radius: f64,
    pub levels: Vec<u8>,
    pub gamma: f64,
    pub beta: f64,
    /// Midpoint shifts `x0 = (d, 2d, 3d)` for the cut sweep.
    pub deltas: Vec<f64>,
    pub cut_level: u8,
    pub tol: f64,
    pub maxit: usize,
    #[serde(serialize_with = "ser_specs")]
    pub preconditioners: Vec<PreconditionerSpec>,
    pub out: PathBuf,
    pub seed: u64,
    #[serde(serialize_with = "ser_mesh_size")]
    pub mesh_size: MeshSize,
    pub deep: bool,
    pub jobs: usize,
    pub lanczos_steps: usize,
    /// Levels above this skip the `(A, B)` pencil in the verify report.
    pub form_equivalence_max_level: u8,
    pub samples: usize,
}

fn ser_specs<S: serde::Serializer>(v: &[PreconditionerSpec], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|p| p.name()))
}

fn ser_mesh_size<S: serde::Serializer>(m: &MeshSize, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(mesh_size_name(*m))
}

pub fn mesh_size_name(m: MeshSize) -> &'static str {
    match m {
        MeshSize::LatticeSpacing => "lattice",
        MeshSize::Diameter => "diameter",
    }
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            half_width: 1.5,
            subdivisions: 4,
            x0: [0.001, 0.002, 0.003],
            radius: 1.0,
            levels: (0..=DEFAULT_MAX_LEVEL).collect(),
            gamma: 10.0,
            beta: 0.1,
            deltas: vec![0.0, 0.01, 0.02, 0.03, 0.04, 0.05],
            cut_level: 3,
            tol: 1e-6,
            maxit: 2000,
            preconditioners: vec![
                PreconditionerSpec::SGS,
                PreconditionerSpec::PA,
                PreconditionerSpec::PD,
                PreconditionerSpec::PB,
            ],
            out: PathBuf::from("out"),
            seed: 0x5eed,
            mesh_size: MeshSize::LatticeSpacing,
            deep: false,
            jobs: 1,
            lanczos_steps: 500,
            form_equivalence_max_level: 3,
            samples: 200,
        }
    }
}

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| CliError::Config(format!("invalid value '{value}' for '{key}'")))
}

fn parse_list<T: std::str::FromStr>(key: &str, value: &str) -> Result<Vec<T>> {
    value
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| parse(key, s))
        .collect()
}

/// `"2"`, `"0..4"` / `"0-4"` (inclusive) or `"0,2,4"`.
pub fn parse_levels(value: &str) -> Result<Vec<u8>> {
    let v = value.trim();
    for sep in ["..=", "..", "-"] {
        if let Some((a, b)) = v.split_once(sep) {
            let (a, b): (u8, u8) = (parse("levels", a)?, parse("levels", b)?);
            if a > b {
                return Err(CliError::Config(format!("empty level range '{value}'")));
            }
            return Ok((a..=b).collect());
        }
    }
    parse_list("levels", v)
}

impl ExperimentConfig {
    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key.trim() {
            "half_width" => self.half_width = parse(key, value)?,
            "subdivisions" => self.subdivisions = parse(key, value)?,
            "x0" => {
                let v: Vec<f64> = parse_list(key, value)?;
                self.x0 = v
                    .try_into()
                    .map_err(|_| CliError::Config("x0 needs three comma separated values".into()))?;
            }
            "radius" => self.radius = parse(key, value)?,
            "level" => self.levels = vec![parse(key, value)?],
            "levels" => self.levels = parse_levels(value)?,
            "gamma" => self.gamma = parse(key, value)?,
            "beta" => self.beta = parse(key, value)?,
            "delta" | "deltas" => self.deltas = parse_list(key, value)?,
            "cut_level" => self.cut_level = parse(key, value)?,
            "tol" => self.tol = parse(key, value)?,
            "maxit" => self.maxit = parse(key, value)?,
            "precond" | "preconditioners" => {
                self.preconditioners = value
                    .split(',')
                    .filter(|s| !s.trim().is_empty())
                    .map(|s| s.parse::<PreconditionerSpec>())
                    .collect::<cutfem::Result<_>>()?
            }
            "out" => self.out = PathBuf::from(value.trim()),
            "seed" => self.seed = parse(key, value)?,
            "mesh_size" => {
                self.mesh_size = match value.trim() {
                    "lattice" => MeshSize::LatticeSpacing,
                    "diameter" => MeshSize::Diameter,
                    other => return Err(CliError::Config(format!("mesh_size '{other}' (expected lattice or diameter)"))),
                }
            }
            "deep" => self.deep = parse(key, value)?,
            "jobs" => self.jobs = parse(key, value)?,
            "lanczos_steps" => self.lanczos_steps = parse(key, value)?,
            "form_equivalence_max_level" => self.form_equivalence_max_level = parse(key, value)?,
            "samples" => self.samples = parse(key, value)?,
            other => return Err(CliError::Config(format!("unknown key '{other}'"))),
        }
        Ok(())
    }

    /// Parses a flat `key = value` file; `#` starts a comment.
    pub fn apply_text(&mut self, text: &str, path: &Path) -> Result<()> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| CliError::ConfigFile {
                path: path.to_path_buf(),
                line: i + 1,
                msg,
            };
            let (k, v) = line.split_once('=').ok_or_else(|| err("expected key = value".into()))?;
            self.set(k, v).map_err(|e| err(e.to_string()))?;
        }
        Ok(())
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let mut cfg = Self::default();
        cfg.apply_text(&text, path)?;
        Ok(cfg)
    }

    /// Checks ranges and the `--deep` gate.
    pub fn validate(&self) -> Result<()> {
        let max = if self.deep { DEEP_MAX_LEVEL } else { DEFAULT_MAX_LEVEL };
        for &l in self.levels.iter().chain(std::iter::once(&self.cut_level)) {
            if l > max {
                return Err(CliError::Config(if self.deep {
                    format!("level {l} exceeds the maximum {DEEP_MAX_LEVEL}")
                } else {
                    format!("level {l} needs --deep (default maximum is {DEFAULT_MAX_LEVEL})")
                }));
            }
        }
        if self.levels.is_empty() {
            return Err(CliError::Config("no levels selected".into()));
        }
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return Err(CliError::Config(format!("tol {} outside (0, 1)", self.tol)));
        }
        if !(self.gamma > 0.0) || !(self.beta >= 0.0) {
            return Err(CliError::Config("gamma must be positive and beta nonnegative".into()));
        }
        if self.jobs == 0 {
            return Err(CliError::Config("jobs must be at least 1".into()));
        }
        Ok(())
    }

    /// `x0 = (d, 2d, 3d)`.
    pub fn shifted_center(delta: f64) -> [f64; 3] {
        [delta, 2.0 * delta, 3.0 * delta]
    }
}
