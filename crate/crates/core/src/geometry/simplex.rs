use crate::error::{Error, Result};
use crate::scalar::{vec3, Real};

pub type Tet<T> = [[T; 3]; 4];
pub type Triangle<T> = [[T; 3]; 3];

/// Signed volume, positive for right-handed vertex order.
#[inline]
pub fn signed_volume<T: Real>(v: &Tet<T>) -> T {
    let a = vec3::sub(&v[1], &v[0]);
    let b = vec3::sub(&v[2], &v[0]);
    let c = vec3::sub(&v[3], &v[0]);
    vec3::dot(&a, &vec3::cross(&b, &c)) / T::lit(6.0)
}

#[inline]
pub fn triangle_area<T: Real>(v: &Triangle<T>) -> T {
    let a = vec3::sub(&v[1], &v[0]);
    let b = vec3::sub(&v[2], &v[0]);
    vec3::norm(&vec3::cross(&a, &b)) / T::lit(2.0)
}

/// Gradients of the four barycentric coordinates of `v` and the (unsigned)
/// volume.
pub fn barycentric_gradients<T: Real>(v: &Tet<T>) -> Result<([[T; 3]; 4], T)> {
    let e1 = vec3::sub(&v[1], &v[0]);
    let e2 = vec3::sub(&v[2], &v[0]);
    let e3 = vec3::sub(&v[3], &v[0]);
    let det = vec3::dot(&e1, &vec3::cross(&e2, &e3));
    let scale = vec3::norm(&e1).max(vec3::norm(&e2)).max(vec3::norm(&e3));
    if !(det.abs() > T::epsilon() * T::lit(16.0) * scale * scale * scale) {
        return Err(Error::DegenerateSimplex(det.as_f64() / 6.0));
    }
    // Rows of the inverse Jacobian are the gradients of lambda_1..lambda_3.
    let g1 = vec3::scale(&vec3::cross(&e2, &e3), T::one() / det);
    let g2 = vec3::scale(&vec3::cross(&e3, &e1), T::one() / det);
    let g3 = vec3::scale(&vec3::cross(&e1, &e2), T::one() / det);
    let g0 = [
        -(g1[0] + g2[0] + g3[0]),
        -(g1[1] + g2[1] + g3[1]),
        -(g1[2] + g2[2] + g3[2]),
    ];
    Ok(([g0, g1, g2, g3], det.abs() / T::lit(6.0)))
}

#[cfg(test)]
mod tests {
    use super::*;

    const REF: Tet<f64> = [
        [0.0, 0.0, 0.0],
        [1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
        [0.0, 0.0, 1.0],
    ];

    #[test]
    fn reference_gradients() {
        let (g, vol) = barycentric_gradients(&REF).unwrap();
        assert!((vol - 1.0 / 6.0).abs() < 1e-15);
        assert_eq!(g[0], [-1.0, -1.0, -1.0]);
        assert_eq!(g[1], [1.0, 0.0, 0.0]);
        assert_eq!(g[3], [0.0, 0.0, 1.0]);
    }

    #[test]
    fn degenerate_is_rejected() {
        let flat = [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [1.0, 1.0, 0.0]];
        assert!(matches!(
            barycentric_gradients(&flat),
            Err(Error::DegenerateSimplex(_))
        ));
    }
}
