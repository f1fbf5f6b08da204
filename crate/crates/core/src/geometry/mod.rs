//! Level-set geometry, reference-simplex quadrature and marching-tetrahedra
//! decomposition of cut elements.

mod cut;
mod levelset;
mod quadrature;
mod simplex;

pub use cut::{decompose_cut_tet, CutDecomposition, InterfaceTriangle};
pub use levelset::{LevelSet, Sphere};
pub use quadrature::{simplex_quadrature, triangle_quadrature, QuadratureRule, TetRule, TriangleRule};
pub use simplex::{barycentric_gradients, signed_volume, triangle_area, Tet, Triangle};
