use super::lattice::{CellIndex, Lattice, Vertex, FACES};
use crate::error::{Error, Result};
use crate::geometry::{LevelSet, Tet};
use crate::scalar::{vec3, Real};

#[derive(Clone, Debug)]
pub struct ActiveCell<T> {
    pub index: CellIndex,
    pub vertices: [Vertex; 4],
    /// Level-set values at the vertices.
    pub phi: [T; 4],
    pub is_cut: bool,
}

/// Interior face of the fictitious domain carrying a ghost-penalty term.
#[derive(Clone, Debug)]
pub struct GhostFace<T> {
    pub vertices: [Vertex; 3],
    /// Indices into [`ActiveMesh::cells`]; the first one is a cut cell.
    pub cells: [usize; 2],
    pub diameter: T,
}

/// Face on the boundary of the fictitious domain.
#[derive(Clone, Debug)]
pub struct BoundaryFace<T> {
    pub vertices: [Vertex; 3],
    pub cell: usize,
    pub diameter: T,
}

/// The active triangulation `T_h` at one refinement level: every lattice
/// cell with a vertex at which the level set is non-positive.
#[derive(Clone, Debug)]
pub struct ActiveMesh<T> {
    pub lattice: Lattice<T>,
    /// Sorted by [`CellIndex`].
    pub cells: Vec<ActiveCell<T>>,
    pub cut_cells: Vec<usize>,
    pub interior_cells: Vec<usize>,
    pub ghost_faces: Vec<GhostFace<T>>,
    pub boundary_faces: Vec<BoundaryFace<T>>,
}

/// Active mesh on the standard `[-1.5, 1.5]^3` background box.
pub fn build_active_mesh<T: Real, L: LevelSet<T> + ?Sized>(level: u8, ls: &L) -> Result<ActiveMesh<T>> {
    ActiveMesh::build(Lattice::standard(level), ls)
}

impl<T: Real> ActiveMesh<T> {
    pub fn build<L: LevelSet<T> + ?Sized>(lattice: Lattice<T>, ls: &L) -> Result<Self> {
        check_contained(&lattice, ls)?;
        let n = lattice.cubes_per_axis();
        let mut cells = Vec::new();
        let mut corner_phi = [T::zero(); 8];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for (o, p) in corner_phi.iter_mut().enumerate() {
                        let v = [i + (o as u32 & 1), j + ((o as u32 >> 1) & 1), k + ((o as u32 >> 2) & 1)];
                        *p = ls.eval(&lattice.coords(&v));
                    }
                    for tet in 0..6u8 {
                        let index = CellIndex::new(lattice.level, [i, j, k], tet);
                        let vertices = index.vertices();
                        let phi = vertices.map(|v| {
                            let o = (v[0] - i) + 2 * (v[1] - j) + 4 * (v[2] - k);
                            corner_phi[o as usize]
                        });
                        if phi.iter().any(|&p| p <= T::zero()) {
                            let is_cut = phi.iter().any(|&p| p > T::zero());
                            cells.push(ActiveCell {
                                index,
                                vertices,
                                phi,
                                is_cut,
                            });
                        }
                    }
                }
            }
        }
        Ok(Self::finish(lattice, cells))
    }

    /// Active mesh made of an explicitly given set of cells. Each cell must
    /// have at least one vertex with non-positive level-set value.
    pub fn from_cells<L: LevelSet<T> + ?Sized>(
        lattice: Lattice<T>,
        ls: &L,
        mut indices: Vec<CellIndex>,
    ) -> Result<Self> {
        check_contained(&lattice, ls)?;
        indices.sort_unstable();
        indices.dedup();
        let mut cells = Vec::with_capacity(indices.len());
        for index in indices {
            if index.level != lattice.level || !lattice.contains_cube(&index.cube) || index.tet > 5 {
                return Err(Error::InvalidInput(format!("{index:?} not in lattice")));
            }
            let vertices = index.vertices();
            let phi = vertices.map(|v| ls.eval(&lattice.coords(&v)));
            if phi.iter().all(|&p| p > T::zero()) {
                return Err(Error::InvalidInput(format!(
                    "{index:?} does not intersect the domain"
                )));
            }
            let is_cut = phi.iter().any(|&p| p > T::zero());
            cells.push(ActiveCell {
                index,
                vertices,
                phi,
                is_cut,
            });
        }
        Ok(Self::finish(lattice, cells))
    }

    fn finish(lattice: Lattice<T>, cells: Vec<ActiveCell<T>>) -> Self {
        let mut mesh = Self {
            lattice,
            cut_cells: Vec::new(),
            interior_cells: Vec::new(),
            ghost_faces: Vec::new(),
            boundary_faces: Vec::new(),
            cells,
        };
        for (c, cell) in mesh.cells.iter().enumerate() {
            if cell.is_cut {
                mesh.cut_cells.push(c);
            } else {
                mesh.interior_cells.push(c);
            }
        }
        let mut ghost_faces = Vec::new();
        let mut boundary_faces = Vec::new();
        for &c in &mesh.cut_cells {
            let cell = &mesh.cells[c];
            for (local, _) in FACES {
                let face = local.map(|l| cell.vertices[l]);
                let diameter = mesh.face_diameter(&face);
                let neighbor = lattice
                    .face_neighbor(&cell.index, &face)
                    .and_then(|n| mesh.find_cell(&n));
                match neighbor {
                    Some(nb) => {
                        // record faces between two cut cells once
                        if mesh.cells[nb].is_cut && nb < c {
                            continue;
                        }
                        ghost_faces.push(GhostFace {
                            vertices: face,
                            cells: [c, nb],
                            diameter,
                        });
                    }
                    None => boundary_faces.push(BoundaryFace {
                        vertices: face,
                        cell: c,
                        diameter,
                    }),
                }
            }
        }
        mesh.ghost_faces = ghost_faces;
        mesh.boundary_faces = boundary_faces;
        mesh
    }

    pub fn level(&self) -> u8 {
        self.lattice.level
    }

    pub fn find_cell(&self, index: &CellIndex) -> Option<usize> {
        self.cells.binary_search_by(|c| c.index.cmp(index)).ok()
    }

    pub fn contains(&self, index: &CellIndex) -> bool {
        self.find_cell(index).is_some()
    }

    pub fn cell_coords(&self, c: usize) -> Tet<T> {
        self.lattice.cell_coords(&self.cells[c].index)
    }

    /// Diameter `h_T` of cell `c`.
    pub fn cell_diameter(&self, c: usize) -> T {
        let v = self.cell_coords(c);
        let mut d = T::zero();
        for a in 0..4 {
            for b in a + 1..4 {
                d = d.max(vec3::dist(&v[a], &v[b]));
            }
        }
        d
    }

    pub fn face_diameter(&self, face: &[Vertex; 3]) -> T {
        let x = face.map(|v| self.lattice.coords(&v));
        vec3::dist(&x[0], &x[1])
            .max(vec3::dist(&x[0], &x[2]))
            .max(vec3::dist(&x[1], &x[2]))
    }
}

fn check_contained<T: Real, L: LevelSet<T> + ?Sized>(lattice: &Lattice<T>, ls: &L) -> Result<()> {
    let (lo, hi) = ls.bounding_box();
    let w = lattice.half_width;
    if lo.iter().chain(&hi).all(|&x| x > -w && x < w) {
        Ok(())
    } else {
        Err(Error::DomainNotContained(format!(
            "bounding box {lo:?}..{hi:?} vs half width {w}"
        )))
    }
}
