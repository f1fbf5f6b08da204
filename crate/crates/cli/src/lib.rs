//! Experiment harness: configuration, table runs, verification report and
//! exports on top of the `cutfem` library.

pub mod config;
pub mod error;
pub mod experiments;
pub mod output;

pub use config::ExperimentConfig;
pub use error::{CliError, Result};
pub use experiments::{
    build_case, run_ablation_beta0, run_convergence, run_cut_sweep, run_dims, run_precond_sweep, run_verify,
    sweep_row, Case, ConvergenceRow, DimsRow, SweepRow, VerifyReport,
};
