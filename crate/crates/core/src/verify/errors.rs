use crate::assembly::{barycentric_at, cut_decomposition, ManufacturedSolution};
use crate::error::{Error, Result};
use crate::geometry::{barycentric_gradients, signed_volume, simplex_quadrature, Tet};
use crate::mesh::{ActiveMesh, SubspaceSplit};
use crate::scalar::{vec3, Real};
use serde::Serialize;

/// Discretization errors against the manufactured solution.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ErrorNorms {
    /// `||u - u_h||_{L2(Omega)}`
    pub l2: f64,
    /// `|u - u_h|_{H1(Omega)}`
    pub h1: f64,
    /// Full `H1(Omega)` norm of the error.
    pub h1_full: f64,
    /// The same two quantities over the fictitious domain `Omega_h`.
    pub l2_omega_h: f64,
    pub h1_omega_h: f64,
}

/// Error norms of the finite element function with coefficients `u_h`,
/// integrated with a degree-4 rule over the cut pieces (physical domain)
/// and over whole cells (fictitious domain).
pub fn compute_errors<T: Real>(
    u_h: &[T],
    ms: &ManufacturedSolution<T>,
    mesh: &ActiveMesh<T>,
    split: &SubspaceSplit,
) -> Result<ErrorNorms> {
    if u_h.len() != split.n() {
        return Err(Error::DimensionMismatch {
            expected: split.n(),
            got: u_h.len(),
        });
    }
    let rule = simplex_quadrature::<T>(4)?;
    let (mut l2, mut h1, mut l2h, mut h1h) = (T::zero(), T::zero(), T::zero(), T::zero());
    for c in 0..mesh.cells.len() {
        let tet = mesh.cell_coords(c);
        let (g, vol) = barycentric_gradients(&tet)?;
        let coef: [T; 4] = split.cell_dofs[c].map(|d| u_h[d]);
        let mut grad_h = [T::zero(); 3];
        for i in 0..4 {
            grad_h = vec3::add(&grad_h, &vec3::scale(&g[i], coef[i]));
        }
        let integrate = |sub: &Tet<T>, v: T| -> (T, T) {
            let (mut a, mut b) = (T::zero(), T::zero());
            for (x, w) in rule.physical(sub, v) {
                let l = barycentric_at(&tet, &g, &x);
                let uh: T = (0..4).map(|i| coef[i] * l[i]).sum();
                let e = ms.u(&x) - uh;
                let de = vec3::sub(&ms.grad(&x), &grad_h);
                a += w * e * e;
                b += w * vec3::dot(&de, &de);
            }
            (a, b)
        };
        let (a, b) = integrate(&tet, vol);
        l2h += a;
        h1h += b;
        match cut_decomposition(mesh, c)? {
            None => {
                l2 += a;
                h1 += b;
            }
            Some(cd) => {
                for sub in &cd.inside_simplices {
                    let (a, b) = integrate(sub, signed_volume(sub).abs());
                    l2 += a;
                    h1 += b;
                }
            }
        }
    }
    Ok(ErrorNorms {
        l2: l2.sqrt().as_f64(),
        h1: h1.sqrt().as_f64(),
        h1_full: (l2 + h1).sqrt().as_f64(),
        l2_omega_h: l2h.sqrt().as_f64(),
        h1_omega_h: h1h.sqrt().as_f64(),
    })
}

/// Nodal interpolant of the manufactured solution.
pub fn interpolate<T: Real>(ms: &ManufacturedSolution<T>, mesh: &ActiveMesh<T>, split: &SubspaceSplit) -> Vec<T> {
    split.dof_vertex.iter().map(|v| ms.u(&mesh.lattice.coords(v))).collect()
}
