use crate::error::{Error, Result};
use crate::linalg::{CsrMatrix, Preconditioner, Sgs, SparseCholesky};
use crate::mesh::{ActiveMesh, CellIndex, Lattice, SubspaceSplit, Vertex};
use crate::scalar::Real;
use std::collections::{HashMap, HashSet};

/// One level of the interior-space hierarchy.
#[derive(Clone, Debug)]
pub struct MgLevel<T> {
    pub level: u8,
    /// Lattice vertices of the interior dofs, in dof order.
    pub vertices: Vec<Vertex>,
    /// Gauss-Seidel smoother holding the level operator.
    pub smoother: Sgs<T>,
    /// Interpolation from this level to the next finer one.
    pub prolongation: Option<CsrMatrix<T>>,
    restriction: Option<CsrMatrix<T>>,
}

impl<T: Real> MgLevel<T> {
    pub fn dim(&self) -> usize {
        self.vertices.len()
    }

    pub fn matrix(&self) -> &CsrMatrix<T> {
        self.smoother.matrix()
    }
}

/// Nested interior spaces `V^0_{h_jmin} < ... < V^0_{h_J}` with Galerkin
/// operators; `levels[0]` is the coarsest level.
#[derive(Clone, Debug)]
pub struct MGHierarchy<T> {
    pub levels: Vec<MgLevel<T>>,
    coarse: SparseCholesky<T>,
}

const KUHN_NEIGHBOR_DIRS: [[i64; 3]; 7] = [
    [1, 0, 0],
    [0, 1, 0],
    [0, 0, 1],
    [1, 1, 0],
    [1, 0, 1],
    [0, 1, 1],
    [1, 1, 1],
];

/// Builds the hierarchy below the finest level of `mesh`, whose interior
/// block is `a0`. At most `max_levels` levels are used (all available when
/// `None`); the coarsest level is the smallest one with a nonempty interior
/// set.
pub fn build_mg_hierarchy<T: Real>(
    mesh: &ActiveMesh<T>,
    split: &SubspaceSplit,
    a0: &CsrMatrix<T>,
    max_levels: Option<usize>,
) -> Result<MGHierarchy<T>> {
    let finest = mesh.level();
    if a0.nrows() != split.n_interior {
        return Err(Error::DimensionMismatch {
            expected: split.n_interior,
            got: a0.nrows(),
        });
    }
    let mut vertex_sets: Vec<(u8, Vec<Vertex>)> = vec![(finest, split.dof_vertex[..split.n_interior].to_vec())];

    // coverage: a coarse cell is covered iff all its finest descendants are active
    let mut covered: HashSet<CellIndex> = mesh.cells.iter().map(|c| c.index).collect();
    let mut lattice = mesh.lattice;
    let max_levels = max_levels.unwrap_or(usize::MAX).max(1);
    while vertex_sets.len() < max_levels {
        let Some(coarse_lattice) = lattice.coarser() else { break };
        let mut counts: HashMap<CellIndex, u8> = HashMap::new();
        for c in &covered {
            *counts.entry(c.parent().expect("not the coarsest lattice")).or_default() += 1;
        }
        covered = counts.into_iter().filter(|&(_, n)| n == 8).map(|(c, _)| c).collect();
        let verts = interior_vertices(&coarse_lattice, &covered);
        if verts.is_empty() {
            break;
        }
        vertex_sets.push((coarse_lattice.level, verts));
        lattice = coarse_lattice;
    }
    if vertex_sets.len() == 1 {
        log::warn!("no coarse interior dofs; multigrid reduces to an exact solve");
    }

    // finest to coarsest: prolongations and Galerkin operators
    let mut ops: Vec<CsrMatrix<T>> = vec![a0.clone()];
    let mut prolongations: Vec<CsrMatrix<T>> = Vec::new();
    for k in 1..vertex_sets.len() {
        let p = prolongation::<T>(&vertex_sets[k].1, &vertex_sets[k - 1].1)?;
        let coarse = ops[k - 1].galerkin(&p)?;
        ops.push(coarse);
        prolongations.push(p);
    }
    let coarse = SparseCholesky::factor(ops.last().expect("at least one level"))?;

    let mut levels = Vec::with_capacity(vertex_sets.len());
    let mut prolongations = prolongations.into_iter().rev();
    for ((level, vertices), op) in vertex_sets.into_iter().rev().zip(ops.into_iter().rev()) {
        levels.push(MgLevel {
            level,
            vertices,
            smoother: Sgs::new(op)?,
            prolongation: None,
            restriction: None,
        });
    }
    let nl = levels.len();
    for l in levels.iter_mut().take(nl - 1) {
        l.prolongation = prolongations.next();
        l.restriction = l.prolongation.as_ref().map(CsrMatrix::transpose);
    }
    Ok(MGHierarchy { levels, coarse })
}

/// Vertices whose whole star (24 cells) is covered, in lexicographic order.
fn interior_vertices<T: Real>(lattice: &Lattice<T>, covered: &HashSet<CellIndex>) -> Vec<Vertex> {
    let mut cand: Vec<Vertex> = covered.iter().flat_map(|c| c.vertices()).collect();
    cand.sort_unstable();
    cand.dedup();
    cand.into_iter()
        .filter(|v| {
            let star = lattice.vertex_star(v);
            star.len() == 24 && star.iter().all(|c| covered.contains(c))
        })
        .collect()
}

/// Linear interpolation from coarse interior dofs to fine interior dofs.
fn prolongation<T: Real>(coarse: &[Vertex], fine: &[Vertex]) -> Result<CsrMatrix<T>> {
    let cidx: HashMap<Vertex, usize> = coarse.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let fidx: HashSet<Vertex> = fine.iter().copied().collect();
    // every coarse hat function must live in the fine interior space
    for v in coarse {
        let x = v.map(|c| 2 * c as i64);
        let mut pts = vec![x];
        for d in KUHN_NEIGHBOR_DIRS {
            for s in [-1, 1] {
                pts.push([x[0] + s * d[0], x[1] + s * d[1], x[2] + s * d[2]]);
            }
        }
        for p in pts {
            let ok = p.iter().all(|&c| c >= 0) && fidx.contains(&p.map(|c| c as u32));
            if !ok {
                return Err(Error::NotNested(format!(
                    "coarse vertex {v:?}: fine vertex {p:?} is not an interior dof"
                )));
            }
        }
    }
    let half = T::lit(0.5);
    let mut trip = Vec::new();
    for (row, x) in fine.iter().enumerate() {
        let p = x.map(|c| c % 2);
        if p == [0, 0, 0] {
            if let Some(&c) = cidx.get(&x.map(|c| c / 2)) {
                trip.push((row, c, T::one()));
            }
        } else {
            let a = [(x[0] - p[0]) / 2, (x[1] - p[1]) / 2, (x[2] - p[2]) / 2];
            let b = [(x[0] + p[0]) / 2, (x[1] + p[1]) / 2, (x[2] + p[2]) / 2];
            for e in [a, b] {
                if let Some(&c) = cidx.get(&e) {
                    trip.push((row, c, half));
                }
            }
        }
    }
    Ok(CsrMatrix::from_triplets(fine.len(), coarse.len(), trip))
}

impl<T: Real> MGHierarchy<T> {
    pub fn num_levels(&self) -> usize {
        self.levels.len()
    }

    pub fn finest(&self) -> &MgLevel<T> {
        self.levels.last().expect("nonempty hierarchy")
    }

    /// One symmetric V-cycle for `A_0 z = r` from `z = 0`: a symmetric
    /// Gauss-Seidel step (forward then backward sweep) before and after the
    /// coarse-grid correction, exact solve on the coarsest level.
    pub fn vcycle(&self, r: &[T], z: &mut [T]) {
        self.cycle(self.levels.len() - 1, r, z);
    }

    fn cycle(&self, k: usize, r: &[T], z: &mut [T]) {
        if k == 0 {
            self.coarse.solve_into(r, z);
            return;
        }
        let lvl = &self.levels[k];
        let a = lvl.matrix();
        let below = &self.levels[k - 1];
        let p = below.prolongation.as_ref().expect("prolongation below the finest level");
        let rt = below.restriction.as_ref().expect("restriction below the finest level");
        z.iter_mut().for_each(|v| *v = T::zero());
        lvl.smoother.forward_sweep(r, z);
        lvl.smoother.backward_sweep(r, z);
        let az = a.mul_vec(z);
        let res: Vec<T> = r.iter().zip(&az).map(|(x, y)| *x - *y).collect();
        let rc = rt.mul_vec(&res);
        let mut zc = vec![T::zero(); rc.len()];
        self.cycle(k - 1, &rc, &mut zc);
        let corr = p.mul_vec(&zc);
        for (zi, ci) in z.iter_mut().zip(corr) {
            *zi += ci;
        }
        lvl.smoother.forward_sweep(r, z);
        lvl.smoother.backward_sweep(r, z);
    }
}

/// `n` V-cycles as a stationary iteration from zero.
#[derive(Clone, Debug)]
pub struct VCyclePreconditioner<T> {
    pub hierarchy: std::sync::Arc<MGHierarchy<T>>,
    pub cycles: usize,
}

impl<T: Real> Preconditioner<T> for VCyclePreconditioner<T> {
    fn dim(&self) -> usize {
        self.hierarchy.finest().dim()
    }

    fn apply(&self, r: &[T], z: &mut [T]) {
        self.hierarchy.vcycle(r, z);
        let a = self.hierarchy.finest().matrix();
        let mut dz = vec![T::zero(); z.len()];
        for _ in 1..self.cycles {
            let az = a.mul_vec(z);
            let res: Vec<T> = r.iter().zip(&az).map(|(x, y)| *x - *y).collect();
            self.hierarchy.vcycle(&res, &mut dz);
            for (zi, d) in z.iter_mut().zip(&dz) {
                *zi += *d;
            }
        }
    }
}
