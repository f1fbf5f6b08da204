//! Symmetric quadrature rules on the reference tetrahedron and triangle in
//! barycentric coordinates.

use super::simplex::{triangle_area, Tet, Triangle};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Quadrature rule with `B` barycentric coordinates per point. Weights are
/// relative to the reference simplex (they sum to 1/6 for tetrahedra and 1/2
/// for triangles).
#[derive(Clone, Debug)]
pub struct QuadratureRule<T, const B: usize> {
    pub points: Vec<[T; B]>,
    pub weights: Vec<T>,
    pub exactness_degree: usize,
}

pub type TetRule<T> = QuadratureRule<T, 4>;
pub type TriangleRule<T> = QuadratureRule<T, 3>;

// Tetrahedron, degree 2: points (b,b,b,a) and permutations.
const TET2_A: f64 = 0.585_410_196_624_968_454_461_376_050_309_691_435_3;
const TET2_B: f64 = 0.138_196_601_125_010_515_179_541_316_563_436_188_2;

// Tetrahedron, 14 points, degree 5.
const TET5_A1: f64 = 0.092_735_250_310_891_225_336_965_474_929_374_723;
const TET5_W1: f64 = 0.012_248_840_519_393_657_950_337_027_234_625_782;
const TET5_A2: f64 = 0.310_885_919_263_300_609_436_613_413_856_804_394;
const TET5_W2: f64 = 0.018_781_320_953_002_641_133_935_494_083_815_306;
const TET5_C: f64 = 0.454_496_295_874_350_345_832_013_555_482_405_707;
const TET5_W3: f64 = 0.007_091_003_462_846_911_721_596_096_898_817_053;

// Triangle, 6 points, degree 4 (weights normalised to unit area).
const TRI4_A: f64 = 0.445_948_490_915_964_886_318_329_253_883_051_988;
const TRI4_WA: f64 = 0.111_690_794_839_005_732_847_503_504_216_561_402;
const TRI4_B: f64 = 0.091_576_213_509_770_743_459_571_463_402_201_508;
const TRI4_WB: f64 = 0.054_975_871_827_660_933_819_163_162_450_105_265;

fn orbit4<T: Real>(a: f64, b: f64) -> Vec<[T; 4]> {
    // all distinct permutations of (a, b, b, b)
    (0..4)
        .map(|i| {
            let mut p = [T::lit(b); 4];
            p[i] = T::lit(a);
            p
        })
        .collect()
}

fn orbit22<T: Real>(c: f64, d: f64) -> Vec<[T; 4]> {
    // all distinct permutations of (c, c, d, d)
    const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    PAIRS
        .iter()
        .map(|&(i, j)| {
            let mut p = [T::lit(d); 4];
            p[i] = T::lit(c);
            p[j] = T::lit(c);
            p
        })
        .collect()
}

fn orbit3<T: Real>(a: f64) -> Vec<[T; 3]> {
    let b = 1.0 - 2.0 * a;
    (0..3)
        .map(|i| {
            let mut p = [T::lit(a); 3];
            p[i] = T::lit(b);
            p
        })
        .collect()
}

/// Volume rule on the reference tetrahedron exact for polynomials of total
/// degree `degree` (1..=4).
pub fn simplex_quadrature<T: Real>(degree: usize) -> Result<TetRule<T>> {
    match degree {
        1 => Ok(TetRule {
            points: vec![[T::lit(0.25); 4]],
            weights: vec![T::lit(1.0 / 6.0)],
            exactness_degree: 1,
        }),
        2 => Ok(TetRule {
            points: orbit4(TET2_A, TET2_B),
            weights: vec![T::lit(1.0 / 24.0); 4],
            exactness_degree: 2,
        }),
        3 | 4 => {
            let mut points = orbit4(1.0 - 3.0 * TET5_A1, TET5_A1);
            points.extend(orbit4(1.0 - 3.0 * TET5_A2, TET5_A2));
            points.extend(orbit22(TET5_C, 0.5 - TET5_C));
            let mut weights = vec![T::lit(TET5_W1); 4];
            weights.extend(vec![T::lit(TET5_W2); 4]);
            weights.extend(vec![T::lit(TET5_W3); 6]);
            Ok(TetRule {
                points,
                weights,
                exactness_degree: 5,
            })
        }
        d => Err(Error::UnsupportedDegree(d)),
    }
}

/// Surface rule on the reference triangle exact for polynomials of total
/// degree `degree` (1..=4).
pub fn triangle_quadrature<T: Real>(degree: usize) -> Result<TriangleRule<T>> {
    match degree {
        1 => Ok(TriangleRule {
            points: vec![[T::lit(1.0 / 3.0); 3]],
            weights: vec![T::lit(0.5)],
            exactness_degree: 1,
        }),
        2 => Ok(TriangleRule {
            points: orbit3(1.0 / 6.0),
            weights: vec![T::lit(1.0 / 6.0); 3],
            exactness_degree: 2,
        }),
        3 | 4 => {
            let mut points = orbit3(TRI4_A);
            points.extend(orbit3(TRI4_B));
            let mut weights = vec![T::lit(TRI4_WA); 3];
            weights.extend(vec![T::lit(TRI4_WB); 3]);
            Ok(TriangleRule {
                points,
                weights,
                exactness_degree: 4,
            })
        }
        d => Err(Error::UnsupportedDegree(d)),
    }
}

impl<T: Real, const B: usize> QuadratureRule<T, B> {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    fn map(&self, q: usize, v: &[[T; 3]; B]) -> [T; 3] {
        let l = &self.points[q];
        let mut x = [T::zero(); 3];
        for (lk, vk) in l.iter().zip(v) {
            for d in 0..3 {
                x[d] += *lk * vk[d];
            }
        }
        x
    }
}

impl<T: Real> TetRule<T> {
    /// Integrates `f(x, lambda)` over the physical tetrahedron `v`, where
    /// `lambda` are the barycentric coordinates of `x` with respect to `v`.
    pub fn integrate<F>(&self, v: &Tet<T>, abs_volume: T, mut f: F) -> T
    where
        F: FnMut(&[T; 3], &[T; 4]) -> T,
    {
        let jac = abs_volume * T::lit(6.0);
        let mut acc = T::zero();
        for (q, w) in self.weights.iter().enumerate() {
            let x = self.map(q, v);
            acc += *w * f(&x, &self.points[q]);
        }
        acc * jac
    }

    /// Physical quadrature points and weights on `v`.
    pub fn physical(&self, v: &Tet<T>, abs_volume: T) -> impl Iterator<Item = ([T; 3], T)> + '_ {
        let jac = abs_volume * T::lit(6.0);
        let v = *v;
        (0..self.len()).map(move |q| (self.map(q, &v), self.weights[q] * jac))
    }
}

impl<T: Real> TriangleRule<T> {
    /// Physical quadrature points and weights on the triangle `v`.
    pub fn physical(&self, v: &Triangle<T>) -> impl Iterator<Item = ([T; 3], T)> + '_ {
        let jac = triangle_area(v) * T::lit(2.0);
        let v = *v;
        (0..self.len()).map(move |q| (self.map(q, &v), self.weights[q] * jac))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factorial(n: u32) -> f64 {
        (1..=n).map(f64::from).product()
    }

    /// Closed form of int l1^a l2^b l3^c over the reference tetrahedron.
    fn tet_monomial(a: u32, b: u32, c: u32) -> f64 {
        factorial(a) * factorial(b) * factorial(c) / factorial(a + b + c + 3)
    }

    fn tri_monomial(a: u32, b: u32) -> f64 {
        factorial(a) * factorial(b) / factorial(a + b + 2)
    }

    #[test]
    fn degree_one_is_centroid_rule() {
        let r = simplex_quadrature::<f64>(1).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r.points[0], [0.25; 4]);
        assert!((r.weights[0] - 1.0 / 6.0).abs() < 1e-16);
    }

    #[test]
    fn degree_two_examples() {
        let r = simplex_quadrature::<f64>(2).unwrap();
        let xy: f64 = r
            .points
            .iter()
            .zip(&r.weights)
            .map(|(p, w)| w * p[1] * p[2])
            .sum();
        assert!((xy - 1.0 / 120.0).abs() < 1e-16);
        let one: f64 = r.weights.iter().sum();
        assert!((one - 1.0 / 6.0).abs() < 1e-16);
    }

    #[test]
    fn unsupported_degrees() {
        assert!(matches!(
            simplex_quadrature::<f64>(0),
            Err(Error::UnsupportedDegree(0))
        ));
        assert!(simplex_quadrature::<f64>(5).is_err());
        assert!(triangle_quadrature::<f64>(7).is_err());
    }

    #[test]
    fn all_tet_rules_exact_on_monomials() {
        for degree in 1..=4 {
            let r = simplex_quadrature::<f64>(degree).unwrap();
            for p in &r.points {
                assert!(p.iter().all(|&l| (0.0..=1.0).contains(&l)));
                assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-15);
            }
            for a in 0..=degree as u32 {
                for b in 0..=degree as u32 - a {
                    for c in 0..=degree as u32 - a - b {
                        let q: f64 = r
                            .points
                            .iter()
                            .zip(&r.weights)
                            .map(|(p, w)| {
                                w * p[1].powi(a as i32) * p[2].powi(b as i32) * p[3].powi(c as i32)
                            })
                            .sum();
                        let exact = tet_monomial(a, b, c);
                        assert!(
                            ((q - exact) / exact).abs() < 1e-13,
                            "deg {degree} monomial ({a},{b},{c}): {q} vs {exact}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn all_triangle_rules_exact_on_monomials() {
        for degree in 1..=4 {
            let r = triangle_quadrature::<f64>(degree).unwrap();
            let total: f64 = r.weights.iter().sum();
            assert!((total - 0.5).abs() < 1e-15);
            for a in 0..=degree as u32 {
                for b in 0..=degree as u32 - a {
                    let q: f64 = r
                        .points
                        .iter()
                        .zip(&r.weights)
                        .map(|(p, w)| w * p[1].powi(a as i32) * p[2].powi(b as i32))
                        .sum();
                    let exact = tri_monomial(a, b);
                    assert!(((q - exact) / exact).abs() < 1e-13, "deg {degree} ({a},{b})");
                }
            }
        }
    }

    #[test]
    fn generic_over_f32() {
        let r = simplex_quadrature::<f32>(4).unwrap();
        let total: f32 = r.weights.iter().sum();
        assert!((total - 1.0 / 6.0).abs() < 1e-6);
    }
}
