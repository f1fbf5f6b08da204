//! Marching-tetrahedra decomposition of a tetrahedron against the zero set of
//! the linear interpolant of vertex level-set values.

use super::simplex::{barycentric_gradients, signed_volume, triangle_area, Tet, Triangle};
use crate::error::Result;
use crate::scalar::{vec3, Real};

#[derive(Clone, Debug)]
pub struct InterfaceTriangle<T> {
    pub vertices: Triangle<T>,
    /// Unit normal pointing from `phi < 0` towards `phi > 0`.
    pub normal: [T; 3],
}

impl<T: Real> InterfaceTriangle<T> {
    pub fn area(&self) -> T {
        triangle_area(&self.vertices)
    }
}

/// Pieces of a tetrahedron on the negative side of a linear level set.
#[derive(Clone, Debug, Default)]
pub struct CutDecomposition<T> {
    /// Positively oriented sub-tetrahedra covering `{phi_h <= 0}`.
    pub inside_simplices: Vec<Tet<T>>,
    pub interface_triangles: Vec<InterfaceTriangle<T>>,
}

impl<T: Real> CutDecomposition<T> {
    pub fn inside_volume(&self) -> T {
        self.inside_simplices.iter().map(signed_volume).sum()
    }

    pub fn interface_area(&self) -> T {
        self.interface_triangles.iter().map(|t| t.area()).sum()
    }
}

/// Splits `vertices` by the sign of the linear interpolant of `phi`.
///
/// A vertex value of exactly zero counts as negative. Pieces of zero measure
/// (produced by such ties) are dropped.
pub fn decompose_cut_tet<T: Real>(vertices: &Tet<T>, phi: &[T; 4]) -> Result<CutDecomposition<T>> {
    let (grads, _) = barycentric_gradients(vertices)?;

    let neg: Vec<usize> = (0..4).filter(|&i| phi[i] <= T::zero()).collect();
    let pos: Vec<usize> = (0..4).filter(|&i| phi[i] > T::zero()).collect();

    let mut out = CutDecomposition::default();
    if pos.is_empty() {
        out.inside_simplices.push(oriented(*vertices));
        return Ok(out);
    }
    if neg.is_empty() {
        return Ok(out);
    }

    let cut = |a: usize, b: usize| -> [T; 3] {
        let t = phi[a] / (phi[a] - phi[b]);
        vec3::lerp(&vertices[a], &vertices[b], t)
    };
    let x = |i: usize| vertices[i];

    let mut tets: Vec<Tet<T>> = Vec::with_capacity(3);
    let mut tris: Vec<Triangle<T>> = Vec::with_capacity(2);
    match neg.len() {
        1 => {
            let a = neg[0];
            let (pab, pac, pad) = (cut(a, pos[0]), cut(a, pos[1]), cut(a, pos[2]));
            tets.push([x(a), pab, pac, pad]);
            tris.push([pab, pac, pad]);
        }
        3 => {
            let d = pos[0];
            let (a, b, c) = (neg[0], neg[1], neg[2]);
            let (pa, pb, pc) = (cut(a, d), cut(b, d), cut(c, d));
            // prism (a,b,c | pa,pb,pc) split into three tetrahedra
            tets.push([x(a), x(b), x(c), pc]);
            tets.push([x(a), x(b), pb, pc]);
            tets.push([x(a), pa, pb, pc]);
            tris.push([pa, pb, pc]);
        }
        2 => {
            let (a, b) = (neg[0], neg[1]);
            let (c, d) = (pos[0], pos[1]);
            let (pac, pad, pbc, pbd) = (cut(a, c), cut(a, d), cut(b, c), cut(b, d));
            // wedge with triangular faces (a, pac, pad) and (b, pbc, pbd)
            tets.push([x(a), pac, pad, pbd]);
            tets.push([x(a), pac, pbc, pbd]);
            tets.push([x(a), x(b), pbc, pbd]);
            tris.push([pac, pad, pbd]);
            tris.push([pac, pbd, pbc]);
        }
        _ => unreachable!(),
    }

    let parent_scale = parent_volume_scale(vertices);
    for t in tets {
        let t = oriented(t);
        if signed_volume(&t) > parent_scale * T::lit(1e-14) {
            out.inside_simplices.push(t);
        }
    }

    let mut grad_phi = [T::zero(); 3];
    for (g, p) in grads.iter().zip(phi) {
        for d in 0..3 {
            grad_phi[d] += g[d] * *p;
        }
    }
    let gnorm = vec3::norm(&grad_phi);
    let normal = vec3::scale(&grad_phi, T::one() / gnorm);
    let area_scale = parent_scale.powf(T::lit(2.0 / 3.0));
    for vertices in tris {
        let tri = InterfaceTriangle { vertices, normal };
        if tri.area() > area_scale * T::lit(1e-14) {
            out.interface_triangles.push(tri);
        }
    }
    Ok(out)
}

fn parent_volume_scale<T: Real>(v: &Tet<T>) -> T {
    signed_volume(v).abs()
}

fn oriented<T: Real>(mut t: Tet<T>) -> Tet<T> {
    if signed_volume(&t) < T::zero() {
        t.swap(2, 3);
    }
    t
}
