use super::blocks::{extract_blocks, BlockPartition};
use super::multigrid::{MGHierarchy, VCyclePreconditioner};
use crate::error::{Error, Result};
use crate::linalg::{pcg, CsrMatrix, Jacobi, Preconditioner, Sgs, SparseCholesky};
use crate::mesh::SubspaceSplit;
use crate::scalar::Real;
use std::cell::OnceCell;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

/// Above this size "exact" block solves use an inner CG instead of Cholesky.
pub const CHOLESKY_LIMIT: usize = 100_000;
const INNER_TOL: f64 = 1e-10;

/// Interior block solver `B_0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum B0Kind {
    Exact,
    /// The given number of symmetric V-cycles.
    VCycle(usize),
}

/// Boundary block solver `B_1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum B1Kind {
    Exact,
    Sgs,
    Jacobi,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PreconditionerSpec {
    /// Symmetric Gauss-Seidel on the whole matrix.
    SgsFull,
    /// `diag(B_0, B_1)` with respect to the interior/boundary splitting.
    Block { b0: B0Kind, b1: B1Kind },
}

impl PreconditionerSpec {
    pub const SGS: Self = Self::SgsFull;
    /// Exact solves on both blocks.
    pub const PA: Self = Self::Block {
        b0: B0Kind::Exact,
        b1: B1Kind::Exact,
    };
    /// Exact interior solve, Gauss-Seidel on the boundary block.
    pub const PD: Self = Self::Block {
        b0: B0Kind::Exact,
        b1: B1Kind::Sgs,
    };
    /// Multigrid on the interior block, Gauss-Seidel on the boundary block.
    pub const PB: Self = Self::Block {
        b0: B0Kind::VCycle(1),
        b1: B1Kind::Sgs,
    };

    pub fn name(&self) -> String {
        match *self {
            Self::SGS => "sgs".into(),
            Self::PA => "pa".into(),
            Self::PD => "pd".into(),
            Self::PB => "pb".into(),
            Self::Block { b0, b1 } => format!("block({b0:?},{b1:?})").to_lowercase(),
        }
    }
}

impl fmt::Display for PreconditionerSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for PreconditionerSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "sgs" => Ok(Self::SGS),
            "pa" => Ok(Self::PA),
            "pd" => Ok(Self::PD),
            "pb" => Ok(Self::PB),
            other => Err(Error::Config(format!("unknown preconditioner '{other}' (expected sgs, pa, pd or pb)"))),
        }
    }
}

/// `z = diag(B_0^{-1}, B_1^{-1}) r`.
#[derive(Clone)]
pub struct BlockPreconditioner<T> {
    pub n0: usize,
    pub b0: Arc<dyn Preconditioner<T>>,
    pub b1: Arc<dyn Preconditioner<T>>,
}

impl<T: Real> Preconditioner<T> for BlockPreconditioner<T> {
    fn dim(&self) -> usize {
        self.n0 + self.b1.dim()
    }

    fn apply(&self, r: &[T], z: &mut [T]) {
        let n0 = self.n0;
        if n0 > 0 {
            self.b0.apply(&r[..n0], &mut z[..n0]);
        }
        if r.len() > n0 {
            self.b1.apply(&r[n0..], &mut z[n0..]);
        }
    }
}

/// CG to a tight tolerance, standing in for an exact solve on large blocks.
struct InnerCg<T> {
    a: CsrMatrix<T>,
    sgs: Sgs<T>,
}

impl<T: Real> Preconditioner<T> for InnerCg<T> {
    fn dim(&self) -> usize {
        self.a.nrows()
    }

    fn apply(&self, r: &[T], z: &mut [T]) {
        let maxit = 10 * self.a.nrows().max(100);
        match pcg(&self.a, r, &self.sgs, T::lit(INNER_TOL), maxit) {
            Ok((x, _)) => z.copy_from_slice(&x),
            Err(e) => panic!("inner solve failed: {e}"),
        }
    }
}

fn exact_solver<T: Real>(a: &CsrMatrix<T>) -> Result<Arc<dyn Preconditioner<T>>> {
    if a.nrows() < CHOLESKY_LIMIT {
        Ok(Arc::new(SparseCholesky::factor(a)?))
    } else {
        Ok(Arc::new(InnerCg {
            a: a.clone(),
            sgs: Sgs::new(a.clone())?,
        }))
    }
}

/// Builds preconditioners for one matrix, sharing block factorizations
/// between specs.
pub struct PreconditionerFactory<'a, T> {
    a: &'a CsrMatrix<T>,
    partition: BlockPartition<T>,
    hierarchy: Option<Arc<MGHierarchy<T>>>,
    a0_exact: OnceCell<Arc<dyn Preconditioner<T>>>,
    a1_exact: OnceCell<Arc<dyn Preconditioner<T>>>,
    a1_sgs: OnceCell<Arc<dyn Preconditioner<T>>>,
}

impl<'a, T: Real> PreconditionerFactory<'a, T> {
    pub fn new(a: &'a CsrMatrix<T>, split: &SubspaceSplit) -> Self {
        Self {
            a,
            partition: extract_blocks(a, split),
            hierarchy: None,
            a0_exact: OnceCell::new(),
            a1_exact: OnceCell::new(),
            a1_sgs: OnceCell::new(),
        }
    }

    pub fn with_hierarchy(mut self, h: Arc<MGHierarchy<T>>) -> Self {
        self.hierarchy = Some(h);
        self
    }

    pub fn partition(&self) -> &BlockPartition<T> {
        &self.partition
    }

    pub fn hierarchy(&self) -> Option<&Arc<MGHierarchy<T>>> {
        self.hierarchy.as_ref()
    }

    fn cached(
        cell: &OnceCell<Arc<dyn Preconditioner<T>>>,
        make: impl FnOnce() -> Result<Arc<dyn Preconditioner<T>>>,
    ) -> Result<Arc<dyn Preconditioner<T>>> {
        if let Some(p) = cell.get() {
            return Ok(p.clone());
        }
        let p = make()?;
        let _ = cell.set(p.clone());
        Ok(p)
    }

    pub fn build(&self, spec: PreconditionerSpec) -> Result<Arc<dyn Preconditioner<T>>> {
        match spec {
            PreconditionerSpec::SgsFull => Ok(Arc::new(Sgs::new(self.a.clone())?)),
            PreconditionerSpec::Block { b0, b1 } => {
                let part = &self.partition;
                let b0: Arc<dyn Preconditioner<T>> = match b0 {
                    B0Kind::Exact => Self::cached(&self.a0_exact, || exact_solver(&part.a0))?,
                    B0Kind::VCycle(cycles) => {
                        let h = self.hierarchy.clone().ok_or_else(|| {
                            Error::Config("a multigrid interior solver needs a hierarchy".into())
                        })?;
                        if h.finest().dim() != part.n0 {
                            return Err(Error::DimensionMismatch {
                                expected: part.n0,
                                got: h.finest().dim(),
                            });
                        }
                        Arc::new(VCyclePreconditioner {
                            hierarchy: h,
                            cycles: cycles.max(1),
                        })
                    }
                };
                let b1: Arc<dyn Preconditioner<T>> = match b1 {
                    B1Kind::Exact => Self::cached(&self.a1_exact, || exact_solver(&part.a1))?,
                    B1Kind::Sgs => Self::cached(&self.a1_sgs, || Ok(Arc::new(Sgs::new(part.a1.clone())?)))?,
                    B1Kind::Jacobi => Arc::new(Jacobi::new(&part.a1)?),
                };
                Ok(Arc::new(BlockPreconditioner { n0: part.n0, b0, b1 }))
            }
        }
    }
}
