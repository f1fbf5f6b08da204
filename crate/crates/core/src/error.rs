use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("unsupported quadrature degree {0} (supported: 1..=4)")]
    UnsupportedDegree(usize),

    #[error("degenerate simplex (signed volume {0:e})")]
    DegenerateSimplex(f64),

    #[error("level set is not strictly contained in the background box: {0}")]
    DomainNotContained(String),

    #[error("matrix is not positive definite: non-positive pivot {value:e} at row {row}")]
    NotPositiveDefinite { row: usize, value: f64 },

    #[error("operator is indefinite: p^T A p = {value:e} at CG iteration {iteration}")]
    Indefinite { iteration: usize, value: f64 },

    #[error("zero diagonal entry at dof {0}")]
    ZeroDiagonal(usize),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("multigrid hierarchy is not nested: {0}")]
    NotNested(String),

    #[error("preconditioner configuration: {0}")]
    Config(String),

    #[error("matrix market: {0}")]
    MatrixMarket(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
