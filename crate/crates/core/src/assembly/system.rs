use super::element::{
    element_interface_mass, element_nitsche_terms, element_rhs, element_stiffness, ghost_face_penalty,
};
use super::manufactured::ManufacturedSolution;
use crate::error::{Error, Result};
use crate::geometry::{decompose_cut_tet, CutDecomposition};
use crate::linalg::CsrMatrix;
use crate::mesh::{ActiveMesh, SubspaceSplit};
use crate::scalar::Real;

/// Which length enters the `h_T^{-1}` Nitsche scaling. The ghost penalty
/// always uses the face diameter `h_F`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum MeshSize {
    /// The grid size of the level, i.e. the lattice cube edge.
    #[default]
    LatticeSpacing,
    /// Euclidean diameter of the element or face.
    Diameter,
}

/// Nitsche penalty `gamma` and ghost penalty `beta` (polynomial degree 1).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NitscheParams<T> {
    pub gamma: T,
    pub beta: T,
    pub mesh_size: MeshSize,
}

impl<T: Real> NitscheParams<T> {
    pub fn new(gamma: T, beta: T) -> Result<Self> {
        if !(gamma > T::zero()) {
            return Err(Error::InvalidInput(format!("gamma must be positive, got {gamma}")));
        }
        if !(beta >= T::zero()) {
            return Err(Error::InvalidInput(format!("beta must be non-negative, got {beta}")));
        }
        Ok(Self {
            gamma,
            beta,
            mesh_size: MeshSize::default(),
        })
    }

    pub fn with_mesh_size(mut self, mesh_size: MeshSize) -> Self {
        self.mesh_size = mesh_size;
        self
    }

    /// `h_T` of cell `c`.
    pub fn cell_size(&self, mesh: &ActiveMesh<T>, c: usize) -> T {
        match self.mesh_size {
            MeshSize::LatticeSpacing => mesh.lattice.spacing(),
            MeshSize::Diameter => mesh.cell_diameter(c),
        }
    }
}

impl<T: Real> Default for NitscheParams<T> {
    fn default() -> Self {
        Self {
            gamma: T::lit(10.0),
            beta: T::lit(0.1),
            mesh_size: MeshSize::default(),
        }
    }
}

/// Stiffness matrix of `a_h` with the manufactured right-hand side.
#[derive(Clone, Debug)]
pub struct AssembledSystem<T> {
    pub a: CsrMatrix<T>,
    pub b: Vec<T>,
    pub split: SubspaceSplit,
    pub params: NitscheParams<T>,
}

/// Decomposition of cell `c` if it is cut.
pub fn cut_decomposition<T: Real>(mesh: &ActiveMesh<T>, c: usize) -> Result<Option<CutDecomposition<T>>> {
    let cell = &mesh.cells[c];
    if !cell.is_cut {
        return Ok(None);
    }
    decompose_cut_tet(&mesh.cell_coords(c), &cell.phi).map(Some)
}

fn scatter4<T: Real>(trip: &mut Vec<(usize, usize, T)>, dofs: &[usize; 4], m: &[[T; 4]; 4]) {
    for i in 0..4 {
        for j in 0..4 {
            trip.push((dofs[i], dofs[j], m[i][j]));
        }
    }
}

fn ghost_triplets<T: Real>(
    mesh: &ActiveMesh<T>,
    split: &SubspaceSplit,
    params: &NitscheParams<T>,
    trip: &mut Vec<(usize, usize, T)>,
) -> Result<()> {
    if params.beta == T::zero() {
        return Ok(());
    }
    for face in &mesh.ghost_faces {
        let [l, r] = face.cells;
        let coords = face.vertices.map(|v| mesh.lattice.coords(&v));
        let m = ghost_face_penalty(&coords, &mesh.cell_coords(l), &mesh.cell_coords(r), params, face.diameter)?;
        let dl = &split.cell_dofs[l];
        let dr = &split.cell_dofs[r];
        let dofs = [dl[0], dl[1], dl[2], dl[3], dr[0], dr[1], dr[2], dr[3]];
        for i in 0..8 {
            for j in 0..8 {
                trip.push((dofs[i], dofs[j], m[i][j]));
            }
        }
    }
    Ok(())
}

/// Assembles `A_ij = a_h(phi_j, phi_i)` and the load vector. Cells are
/// visited in mesh order, ghost faces afterwards, so the result is
/// bit-reproducible.
pub fn assemble_system<T: Real>(
    mesh: &ActiveMesh<T>,
    split: &SubspaceSplit,
    params: &NitscheParams<T>,
    ms: &ManufacturedSolution<T>,
) -> Result<AssembledSystem<T>> {
    let n = split.n();
    let mut trip = Vec::with_capacity(16 * mesh.cells.len() + 64 * mesh.ghost_faces.len());
    let mut b = vec![T::zero(); n];
    for c in 0..mesh.cells.len() {
        let tet = mesh.cell_coords(c);
        let h = params.cell_size(mesh, c);
        let cut = cut_decomposition(mesh, c)?;
        let dofs = &split.cell_dofs[c];
        let mut k = element_stiffness(&tet, cut.as_ref())?;
        if let Some(cd) = &cut {
            let nit = element_nitsche_terms(&tet, cd, params, h)?;
            for i in 0..4 {
                for j in 0..4 {
                    k[i][j] += nit[i][j];
                }
            }
        }
        scatter4(&mut trip, dofs, &k);
        let be = element_rhs(&tet, cut.as_ref(), ms, params, h)?;
        for i in 0..4 {
            b[dofs[i]] += be[i];
        }
    }
    ghost_triplets(mesh, split, params, &mut trip)?;
    Ok(AssembledSystem {
        a: CsrMatrix::from_triplets(n, n, trip),
        b,
        split: split.clone(),
        params: *params,
    })
}

/// `b_h(u, v) = (grad u, grad v)_{Omega_h} + gamma (h^{-1} u, v)_Gamma`.
pub fn assemble_b_form<T: Real>(
    mesh: &ActiveMesh<T>,
    split: &SubspaceSplit,
    params: &NitscheParams<T>,
) -> Result<CsrMatrix<T>> {
    let n = split.n();
    let mut trip = Vec::with_capacity(16 * mesh.cells.len());
    for c in 0..mesh.cells.len() {
        let tet = mesh.cell_coords(c);
        let mut k = element_stiffness(&tet, None)?;
        if let Some(cd) = cut_decomposition(mesh, c)? {
            let pen = params.gamma / params.cell_size(mesh, c);
            let m = element_interface_mass(&tet, &cd)?;
            for i in 0..4 {
                for j in 0..4 {
                    k[i][j] += pen * m[i][j];
                }
            }
        }
        scatter4(&mut trip, &split.cell_dofs[c], &k);
    }
    Ok(CsrMatrix::from_triplets(n, n, trip))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Sphere;
    use crate::mesh::{build_active_mesh, classify_dofs};

    fn setup(level: u8) -> (ActiveMesh<f64>, SubspaceSplit) {
        let ls = Sphere::new([0.001, 0.002, 0.003], 1.0).unwrap();
        let mesh = build_active_mesh(level, &ls).unwrap();
        let split = classify_dofs(&mesh);
        (mesh, split)
    }

    fn surface_sweep(mesh: &ActiveMesh<f64>, gamma: f64, h: impl Fn(usize) -> f64) -> f64 {
        let mut s = 0.0;
        for &c in &mesh.cut_cells {
            let cd = cut_decomposition(mesh, c).unwrap().unwrap();
            s += gamma / h(c) * cd.interface_area();
        }
        s
    }

    #[test]
    fn params_validated() {
        assert!(NitscheParams::new(0.0, 0.1).is_err());
        assert!(NitscheParams::new(10.0, -1.0).is_err());
        assert!(NitscheParams::new(10.0, 0.0).is_ok());
    }

    #[test]
    fn ones_vector_identity() {
        let (mesh, split) = setup(1);
        let ms = ManufacturedSolution::new([0.001, 0.002, 0.003]);
        let ones = vec![1.0; split.n()];
        let s = mesh.lattice.spacing();
        for (p, expect) in [
            (NitscheParams::default(), surface_sweep(&mesh, 10.0, |_| s)),
            (
                NitscheParams::default().with_mesh_size(MeshSize::Diameter),
                surface_sweep(&mesh, 10.0, |c| mesh.cell_diameter(c)),
            ),
        ] {
            let sys = assemble_system(&mesh, &split, &p, &ms).unwrap();
            assert!((sys.a.quad_form(&ones) - expect).abs() < 1e-10 * expect);
            let bf = assemble_b_form(&mesh, &split, &p).unwrap();
            assert!((bf.quad_form(&ones) - expect).abs() < 1e-10 * expect);
        }
    }

    #[test]
    fn matrix_is_symmetric_and_deterministic() {
        let (mesh, split) = setup(1);
        let ms = ManufacturedSolution::new([0.001, 0.002, 0.003]);
        let p = NitscheParams::default();
        let s1 = assemble_system(&mesh, &split, &p, &ms).unwrap();
        let s2 = assemble_system(&mesh, &split, &p, &ms).unwrap();
        assert!(s1.a.is_symmetric(1e-12));
        assert_eq!(s1.a, s2.a);
        assert_eq!(s1.b, s2.b);
    }

    #[test]
    fn ghost_penalty_is_local_to_the_strip() {
        let (mesh, split) = setup(2);
        let ms = ManufacturedSolution::new([0.001, 0.002, 0.003]);
        let a1 = assemble_system(&mesh, &split, &NitscheParams::new(10.0, 0.1).unwrap(), &ms).unwrap().a;
        let a0 = assemble_system(&mesh, &split, &NitscheParams::new(10.0, 0.0).unwrap(), &ms).unwrap().a;
        let mut touched = vec![false; split.n()];
        for f in &mesh.ghost_faces {
            for &c in &f.cells {
                for &d in &split.cell_dofs[c] {
                    touched[d] = true;
                }
            }
        }
        let diff = a1.add_scaled(&a0, -1.0).unwrap();
        let mut changed = 0;
        for i in 0..split.n() {
            for (j, v) in diff.row(i) {
                if v != 0.0 {
                    assert!(touched[i] && touched[j]);
                    changed += 1;
                }
            }
        }
        assert!(changed > 0);
    }
}
