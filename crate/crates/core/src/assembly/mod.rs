//! Element integrals and global assembly of the stabilized Nitsche system
//! and of the comparison form `b_h`.

mod element;
mod manufactured;
mod system;

pub use element::{
    barycentric_at, element_interface_mass, element_nitsche_terms, element_rhs, element_stiffness, face_normal, ghost_face_penalty,
    ElementMatrix, GhostMatrix,
};
pub use manufactured::ManufacturedSolution;
pub use system::{assemble_b_form, assemble_system, cut_decomposition, AssembledSystem, MeshSize, NitscheParams};
