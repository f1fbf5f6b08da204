use super::manufactured::ManufacturedSolution;
use super::system::NitscheParams;
use crate::error::Result;
use crate::geometry::{
    barycentric_gradients, simplex_quadrature, triangle_area, triangle_quadrature, CutDecomposition, Tet, Triangle,
};
use crate::scalar::{vec3, Real};

pub type ElementMatrix<T> = [[T; 4]; 4];
pub type GhostMatrix<T> = [[T; 8]; 8];

/// Barycentric coordinates of `x` in `tet`, given the gradients.
#[inline]
pub fn barycentric_at<T: Real>(tet: &Tet<T>, grads: &[[T; 3]; 4], x: &[T; 3]) -> [T; 4] {
    let d = vec3::sub(x, &tet[0]);
    let mut l = [T::zero(); 4];
    for i in 1..4 {
        l[i] = vec3::dot(&grads[i], &d);
    }
    l[0] = T::one() - l[1] - l[2] - l[3];
    l
}

/// Unit normal of a triangle (orientation unspecified).
pub fn face_normal<T: Real>(f: &Triangle<T>) -> [T; 3] {
    let n = vec3::cross(&vec3::sub(&f[1], &f[0]), &vec3::sub(&f[2], &f[0]));
    vec3::scale(&n, T::one() / vec3::norm(&n))
}

/// `(grad phi_j, grad phi_i)` over `T`, or over `T` intersected with the
/// domain when `cut` is given.
pub fn element_stiffness<T: Real>(tet: &Tet<T>, cut: Option<&CutDecomposition<T>>) -> Result<ElementMatrix<T>> {
    let (g, vol) = barycentric_gradients(tet)?;
    let vol = match cut {
        Some(c) => c.inside_volume(),
        None => vol,
    };
    let mut k = [[T::zero(); 4]; 4];
    for i in 0..4 {
        for j in i..4 {
            let v = vol * vec3::dot(&g[i], &g[j]);
            k[i][j] = v;
            k[j][i] = v;
        }
    }
    Ok(k)
}

/// Interface terms `-(n.grad u, v) - (u, n.grad v) + gamma h_T^{-1} (u, v)`
/// over the interface triangles of `cut`.
pub fn element_nitsche_terms<T: Real>(
    tet: &Tet<T>,
    cut: &CutDecomposition<T>,
    params: &NitscheParams<T>,
    h_t: T,
) -> Result<ElementMatrix<T>> {
    let (g, _) = barycentric_gradients(tet)?;
    let rule = triangle_quadrature::<T>(2)?;
    let mut m = [[T::zero(); 4]; 4];
    if cut.interface_triangles.is_empty() {
        log::warn!("cut element without interface triangles");
    }
    let pen = params.gamma / h_t;
    for tri in &cut.interface_triangles {
        let dn: [T; 4] = std::array::from_fn(|i| vec3::dot(&tri.normal, &g[i]));
        // integrals of phi_i and phi_i phi_j over the triangle
        let mut s1 = [T::zero(); 4];
        let mut s2 = [[T::zero(); 4]; 4];
        for (x, w) in rule.physical(&tri.vertices) {
            let l = barycentric_at(tet, &g, &x);
            for i in 0..4 {
                s1[i] += w * l[i];
                for j in 0..4 {
                    s2[i][j] += w * l[i] * l[j];
                }
            }
        }
        for i in 0..4 {
            for j in 0..4 {
                m[i][j] += pen * s2[i][j] - dn[j] * s1[i] - dn[i] * s1[j];
            }
        }
    }
    Ok(m)
}

/// Interface mass matrix `(phi_j, phi_i)_{T cap Gamma_h}`.
pub fn element_interface_mass<T: Real>(tet: &Tet<T>, cut: &CutDecomposition<T>) -> Result<ElementMatrix<T>> {
    let (g, _) = barycentric_gradients(tet)?;
    let rule = triangle_quadrature::<T>(2)?;
    let mut m = [[T::zero(); 4]; 4];
    for tri in &cut.interface_triangles {
        for (x, w) in rule.physical(&tri.vertices) {
            let l = barycentric_at(tet, &g, &x);
            for i in 0..4 {
                for j in 0..4 {
                    m[i][j] += w * l[i] * l[j];
                }
            }
        }
    }
    Ok(m)
}

/// Jump penalty `beta h_F (n.[grad u], n.[grad v])_F` on a face shared by
/// `left` and `right`. Rows and columns `0..4` refer to the vertices of
/// `left`, `4..8` to those of `right`.
pub fn ghost_face_penalty<T: Real>(
    face: &Triangle<T>,
    left: &Tet<T>,
    right: &Tet<T>,
    params: &NitscheParams<T>,
    h_f: T,
) -> Result<GhostMatrix<T>> {
    let (gl, _) = barycentric_gradients(left)?;
    let (gr, _) = barycentric_gradients(right)?;
    let n = face_normal(face);
    let mut c = [T::zero(); 8];
    for i in 0..4 {
        c[i] = vec3::dot(&n, &gl[i]);
        c[i + 4] = -vec3::dot(&n, &gr[i]);
    }
    let s = params.beta * h_f * triangle_area(face);
    let mut m = [[T::zero(); 8]; 8];
    for i in 0..8 {
        for j in 0..8 {
            m[i][j] = s * c[i] * c[j];
        }
    }
    Ok(m)
}

/// Load vector `(f, phi_i)_{T cap Omega} + gamma h_T^{-1} (g, phi_i)_Gamma
/// - (g, n.grad phi_i)_Gamma`.
pub fn element_rhs<T: Real>(
    tet: &Tet<T>,
    cut: Option<&CutDecomposition<T>>,
    ms: &ManufacturedSolution<T>,
    params: &NitscheParams<T>,
    h_t: T,
) -> Result<[T; 4]> {
    let (g, vol) = barycentric_gradients(tet)?;
    let vrule = simplex_quadrature::<T>(4)?;
    let mut b = [T::zero(); 4];
    let mut add_volume = |sub: &Tet<T>, v: T| {
        for (x, w) in vrule.physical(sub, v) {
            let l = barycentric_at(tet, &g, &x);
            let fx = ms.f(&x) * w;
            for i in 0..4 {
                b[i] += fx * l[i];
            }
        }
    };
    match cut {
        None => add_volume(tet, vol),
        Some(c) => {
            for sub in &c.inside_simplices {
                add_volume(sub, crate::geometry::signed_volume(sub).abs());
            }
        }
    }
    if let Some(c) = cut {
        let srule = triangle_quadrature::<T>(2)?;
        let pen = params.gamma / h_t;
        for tri in &c.interface_triangles {
            let dn: [T; 4] = std::array::from_fn(|i| vec3::dot(&tri.normal, &g[i]));
            for (x, w) in srule.physical(&tri.vertices) {
                let l = barycentric_at(tet, &g, &x);
                let gx = ms.g(&x) * w;
                for i in 0..4 {
                    b[i] += gx * (pen * l[i] - dn[i]);
                }
            }
        }
    }
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::decompose_cut_tet;

    const REF: Tet<f64> = [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];

    fn params(gamma: f64, beta: f64) -> NitscheParams<f64> {
        NitscheParams::new(gamma, beta).unwrap()
    }

    #[test]
    fn reference_stiffness() {
        let k = element_stiffness(&REF, None).unwrap();
        assert!((k[0][0] - 0.5).abs() < 1e-15);
        for row in &k {
            assert!(row.iter().sum::<f64>().abs() < 1e-15);
        }
    }

    #[test]
    fn corner_cut_stiffness_is_volume_scaled() {
        let cut = decompose_cut_tet(&REF, &[-1.0, 1.0, 1.0, 1.0]).unwrap();
        let k = element_stiffness(&REF, Some(&cut)).unwrap();
        let full = element_stiffness(&REF, None).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert!((k[i][j] - full[i][j] / 8.0).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn ones_vector_sees_only_the_penalty() {
        let cut = decompose_cut_tet(&REF, &[-1.0, 1.0, 1.0, 1.0]).unwrap();
        let h = 2f64.sqrt();
        let m = element_nitsche_terms(&REF, &cut, &params(10.0, 0.1), h).unwrap();
        let total: f64 = m.iter().flatten().sum();
        let expect = 10.0 / h * 3f64.sqrt() / 8.0;
        assert!((total - expect).abs() < 1e-14);
    }

    #[test]
    fn penalty_entry_against_surface_oracle() {
        // phi_0 = 1 - x - y - z = 1/2 on the midpoint triangle
        let cut = decompose_cut_tet(&REF, &[-1.0, 1.0, 1.0, 1.0]).unwrap();
        let h = 2f64.sqrt();
        let m = element_nitsche_terms(&REF, &cut, &params(1.0, 0.1), h).unwrap();
        let area = 3f64.sqrt() / 8.0;
        let dn0 = -(3f64).sqrt(); // n = (1,1,1)/sqrt3, grad phi_0 = -(1,1,1)
        let expect = area * 0.25 / h - 2.0 * dn0 * 0.5 * area;
        assert!((m[0][0] - expect).abs() < 1e-14);
    }

    #[test]
    fn tangential_linear_field_without_penalty_vanishes() {
        let cut = decompose_cut_tet(&REF, &[-1.0, 1.0, 1.0, 1.0]).unwrap();
        let m = element_nitsche_terms(&REF, &cut, &params(1e-300, 0.1), 1.0).unwrap();
        // u = x - y has gradient (1,-1,0), orthogonal to n = (1,1,1)/sqrt3;
        // v = constant so the symmetric term vanishes too
        let u = [0.0, 1.0, -1.0, 0.0];
        let v = [1.0; 4];
        let mut s = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                s += v[i] * m[i][j] * u[j];
            }
        }
        assert!(s.abs() < 1e-14);
    }

    fn two_tets() -> (Triangle<f64>, Tet<f64>, Tet<f64>) {
        let face = [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]];
        let left = [face[0], face[1], face[2], [0.0, 0.0, 1.0]];
        let right = [face[0], face[2], face[1], [0.2, 0.3, -1.0]];
        (face, left, right)
    }

    #[test]
    fn ghost_penalty_kernel_and_jump() {
        let (face, left, right) = two_tets();
        let p = params(10.0, 0.1);
        let m = ghost_face_penalty(&face, &left, &right, &p, 2f64.sqrt()).unwrap();
        let quad = |c: &[f64; 8]| -> f64 {
            let mut s = 0.0;
            for i in 0..8 {
                for j in 0..8 {
                    s += c[i] * m[i][j] * c[j];
                }
            }
            s
        };
        let lin = |x: &[f64; 3]| 2.0 * x[0] - x[1] + 0.5 * x[2] + 1.0;
        let mut c = [0.0; 8];
        for i in 0..4 {
            c[i] = lin(&left[i]);
            c[i + 4] = lin(&right[i]);
        }
        assert!(quad(&c).abs() < 1e-13);
        // kink: u = max(z, 0) -> jump of normal derivative is 1
        for i in 0..4 {
            c[i] = left[i][2].max(0.0);
            c[i + 4] = right[i][2].max(0.0);
        }
        let expect = 0.1 * 2f64.sqrt() * 0.5 * 1.0;
        assert!((quad(&c) - expect).abs() < 1e-14);
        let zero = ghost_face_penalty(&face, &left, &right, &params(10.0, 0.0), 1.0).unwrap();
        assert!(zero.iter().flatten().all(|&v| v == 0.0));
    }

    #[test]
    fn rhs_of_uncut_cell_integrates_f() {
        let ms = ManufacturedSolution::new([0.0; 3]);
        let b = element_rhs(&REF, None, &ms, &params(10.0, 0.1), 1.0).unwrap();
        // sum of phi_i is one: total equals int f over the tet
        let rule = simplex_quadrature::<f64>(4).unwrap();
        let total = rule.integrate(&REF, 1.0 / 6.0, |x, _| ms.f(x));
        assert!((b.iter().sum::<f64>() - total).abs() < 1e-14);
    }
}
