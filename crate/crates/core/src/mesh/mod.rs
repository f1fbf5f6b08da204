//! Implicit structured Kuhn background mesh, active-cell extraction and the
//! interior/boundary dof splitting.

mod active;
mod lattice;
mod split;
mod vtk;

pub use active::{build_active_mesh, ActiveCell, ActiveMesh, BoundaryFace, GhostFace};
pub use lattice::{CellIndex, Lattice, Vertex, KUHN_PERMUTATIONS};
pub use split::{classify_dofs, validate_assumption, AssumptionCheck, SubspaceSplit};
pub use vtk::write_vtk;
