//! Ghost-penalty stabilized Nitsche fictitious domain discretization of the
//! Poisson problem on a structured Kuhn lattice, together with block
//! preconditioners built on the splitting of the finite element space into
//! interior and boundary nodal subspaces.
//!
//! All numerical kernels are generic over [`Real`] (`f32` or `f64`); the
//! aliases at the crate root fix the scalar to `f64`, which is what the
//! experiment harness uses.

pub mod assembly;
pub mod error;
pub mod geometry;
pub mod linalg;
pub mod mesh;
pub mod precond;
pub mod scalar;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Lattice = mesh::Lattice<f64>;
pub type ActiveMesh = mesh::ActiveMesh<f64>;
pub type Sphere = geometry::Sphere<f64>;
pub type CsrMatrix = linalg::CsrMatrix<f64>;
pub type SparseCholesky = linalg::SparseCholesky<f64>;
pub type NitscheParams = assembly::NitscheParams<f64>;
pub type ManufacturedSolution = assembly::ManufacturedSolution<f64>;
pub type AssembledSystem = assembly::AssembledSystem<f64>;
pub type BlockPartition = precond::BlockPartition<f64>;
pub type MGHierarchy = precond::MGHierarchy<f64>;
pub type PreconditionerFactory<'a> = precond::PreconditionerFactory<'a, f64>;
