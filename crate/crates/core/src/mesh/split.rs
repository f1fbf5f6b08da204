use super::active::ActiveMesh;
use super::lattice::Vertex;
use crate::scalar::Real;
use std::collections::{BTreeSet, HashMap};

/// Nodal dof numbering realizing `V_h = V_h^0 (+) V_h^G`: dofs
/// `0..n_interior` are the vertices in the interior of the fictitious
/// domain, dofs `n_interior..n()` the vertices on its boundary. Within each
/// class vertices are ordered lexicographically by lattice index.
#[derive(Clone, Debug)]
pub struct SubspaceSplit {
    pub vertex_to_dof: HashMap<Vertex, usize>,
    pub dof_vertex: Vec<Vertex>,
    pub n_interior: usize,
    pub n_boundary: usize,
    /// Global dofs of the vertices of each active cell.
    pub cell_dofs: Vec<[usize; 4]>,
}

impl SubspaceSplit {
    pub fn n(&self) -> usize {
        self.n_interior + self.n_boundary
    }

    pub fn is_interior(&self, dof: usize) -> bool {
        dof < self.n_interior
    }

    pub fn dof(&self, v: &Vertex) -> Option<usize> {
        self.vertex_to_dof.get(v).copied()
    }
}

/// A vertex is a boundary dof iff it belongs to an outer boundary face.
pub fn classify_dofs<T: Real>(mesh: &ActiveMesh<T>) -> SubspaceSplit {
    let boundary: BTreeSet<Vertex> = mesh
        .boundary_faces
        .iter()
        .flat_map(|f| f.vertices)
        .collect();
    let all: BTreeSet<Vertex> = mesh.cells.iter().flat_map(|c| c.vertices).collect();

    let mut dof_vertex: Vec<Vertex> = all.difference(&boundary).copied().collect();
    let n_interior = dof_vertex.len();
    dof_vertex.extend(boundary.iter().copied());
    let n_boundary = dof_vertex.len() - n_interior;

    let vertex_to_dof: HashMap<Vertex, usize> =
        dof_vertex.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let cell_dofs = mesh
        .cells
        .iter()
        .map(|c| c.vertices.map(|v| vertex_to_dof[&v]))
        .collect();
    SubspaceSplit {
        vertex_to_dof,
        dof_vertex,
        n_interior,
        n_boundary,
        cell_dofs,
    }
}

/// Outcome of comparing the cut cells with the cells touching the boundary
/// of the fictitious domain.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AssumptionCheck {
    /// Cut cells without a vertex on the fictitious boundary.
    pub cut_not_touching: usize,
    /// Uncut cells with a vertex on the fictitious boundary.
    pub touching_not_cut: usize,
}

impl AssumptionCheck {
    pub fn holds(&self) -> bool {
        self.cut_not_touching == 0 && self.touching_not_cut == 0
    }
}

/// Checks whether the cut cells are exactly the active cells sharing a
/// vertex with the boundary of the fictitious domain.
pub fn validate_assumption<T: Real>(mesh: &ActiveMesh<T>) -> AssumptionCheck {
    let boundary: BTreeSet<Vertex> = mesh
        .boundary_faces
        .iter()
        .flat_map(|f| f.vertices)
        .collect();
    let mut check = AssumptionCheck::default();
    for cell in &mesh.cells {
        let touches = cell.vertices.iter().any(|v| boundary.contains(v));
        match (cell.is_cut, touches) {
            (true, false) => check.cut_not_touching += 1,
            (false, true) => check.touching_not_cut += 1,
            _ => {}
        }
    }
    if !check.holds() {
        log::warn!(
            "level {}: cut cells differ from cells touching the fictitious boundary ({:?})",
            mesh.level(),
            check
        );
    }
    check
}
