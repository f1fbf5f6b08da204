//! Subspace-splitting preconditioners: symmetric Gauss-Seidel on the whole
//! system and block Jacobi preconditioners acting separately on the
//! interior and boundary dofs, with a geometric multigrid V-cycle for the
//! interior block.

mod blocks;
mod multigrid;
mod spec;

pub use blocks::{extract_blocks, BlockPartition};
pub use multigrid::{build_mg_hierarchy, MGHierarchy, MgLevel, VCyclePreconditioner};
pub use spec::{B0Kind, B1Kind, BlockPreconditioner, PreconditionerFactory, PreconditionerSpec};
