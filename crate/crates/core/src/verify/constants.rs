use crate::assembly::{cut_decomposition, element_interface_mass, element_stiffness, ElementMatrix};
use crate::error::{Error, Result};
use crate::geometry::signed_volume;
use crate::linalg::DenseMatrix;
use crate::mesh::{ActiveMesh, SubspaceSplit};
use crate::scalar::Real;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Observed `[min, max]` of a sampled ratio.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RatioInterval {
    pub min: f64,
    pub max: f64,
}

impl RatioInterval {
    pub fn empty() -> Self {
        Self {
            min: f64::INFINITY,
            max: f64::NEG_INFINITY,
        }
    }

    pub fn push(&mut self, x: f64) {
        self.min = self.min.min(x);
        self.max = self.max.max(x);
    }

    pub fn width(&self) -> f64 {
        self.max / self.min
    }

    pub fn is_finite_positive(&self) -> bool {
        self.min.is_finite() && self.max.is_finite() && self.min > 0.0
    }
}

/// `||h^{-1} v|| / ||grad v||` over the strip of cut cells, sampled
/// separately in the interior space, the boundary space and the full space.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct StripRatios {
    pub interior: RatioInterval,
    pub boundary: RatioInterval,
    pub full: RatioInterval,
    pub n_samples: usize,
}

/// Outcome of the element-wise strengthened Cauchy-Schwarz check.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CsReport {
    pub max_ratio: f64,
    /// `1 - 1/kappa(M_ref)`.
    pub bound: f64,
    pub elements_checked: usize,
    pub elements_skipped: usize,
}

impl CsReport {
    pub fn holds(&self) -> bool {
        self.max_ratio <= self.bound + 1e-10
    }
}

/// Element matrices of the cut-cell strip; `h` is the lattice spacing.
struct Strip<T> {
    dofs: Vec<[usize; 4]>,
    mass: Vec<ElementMatrix<T>>,
    stiff: Vec<ElementMatrix<T>>,
    gamma_mass: Vec<ElementMatrix<T>>,
    h: T,
}

fn p1_mass<T: Real>(vol: T) -> ElementMatrix<T> {
    let mut m = [[vol / T::lit(20.0); 4]; 4];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = vol / T::lit(10.0);
    }
    m
}

fn local_form<T: Real>(m: &ElementMatrix<T>, x: &[T; 4], y: &[T; 4]) -> T {
    let mut s = T::zero();
    for i in 0..4 {
        for j in 0..4 {
            s += x[i] * m[i][j] * y[j];
        }
    }
    s
}

impl<T: Real> Strip<T> {
    fn new(mesh: &ActiveMesh<T>, split: &SubspaceSplit) -> Result<Self> {
        if mesh.cut_cells.is_empty() {
            return Err(Error::InvalidInput("empty boundary strip".into()));
        }
        let n = mesh.cut_cells.len();
        let mut s = Strip {
            dofs: Vec::with_capacity(n),
            mass: Vec::with_capacity(n),
            stiff: Vec::with_capacity(n),
            gamma_mass: Vec::with_capacity(n),
            h: mesh.lattice.spacing(),
        };
        for &c in &mesh.cut_cells {
            let tet = mesh.cell_coords(c);
            let cut = cut_decomposition(mesh, c)?.expect("cut cell");
            s.dofs.push(split.cell_dofs[c]);
            s.mass.push(p1_mass(signed_volume(&tet).abs()));
            s.stiff.push(element_stiffness(&tet, None)?);
            s.gamma_mass.push(element_interface_mass(&tet, &cut)?);
        }
        Ok(s)
    }

    /// `(||h^{-1} v||^2, ||grad v||^2, ||h^{-1/2} v||_Gamma^2)` on the strip.
    fn norms(&self, v: &[T]) -> (f64, f64, f64) {
        let (mut m, mut k, mut g) = (T::zero(), T::zero(), T::zero());
        for (e, d) in self.dofs.iter().enumerate() {
            let x = d.map(|i| v[i]);
            m += local_form(&self.mass[e], &x, &x);
            k += local_form(&self.stiff[e], &x, &x);
            g += local_form(&self.gamma_mass[e], &x, &x);
        }
        let h = self.h;
        ((m / (h * h)).as_f64(), k.as_f64(), (g / h).as_f64())
    }

    /// Dofs touched by the strip.
    fn strip_dofs(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.dofs.iter().flatten().copied().collect();
        d.sort_unstable();
        d.dedup();
        d
    }
}

fn sample<T: Real>(rng: &mut ChaCha8Rng, n: usize, support: &[usize]) -> Vec<T> {
    let mut v = vec![T::zero(); n];
    for &i in support {
        v[i] = T::lit(rng.gen_range(-1.0..1.0));
    }
    v
}

/// Samples `||h^{-1} v||_strip / ||grad v||_strip` for `v` in the interior
/// space, the boundary space and the full space (whole cells of the strip,
/// `h` = lattice spacing).
pub fn measure_norm_equivalence_strip<T: Real>(
    mesh: &ActiveMesh<T>,
    split: &SubspaceSplit,
    n_samples: usize,
    seed: u64,
) -> Result<StripRatios> {
    let strip = Strip::new(mesh, split)?;
    let dofs = strip.strip_dofs();
    let (int, bnd): (Vec<usize>, Vec<usize>) = dofs.iter().partition(|&&d| split.is_interior(d));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = StripRatios {
        interior: RatioInterval::empty(),
        boundary: RatioInterval::empty(),
        full: RatioInterval::empty(),
        n_samples,
    };
    let n = split.n();
    for _ in 0..n_samples {
        for (support, acc) in [
            (&int, &mut out.interior),
            (&bnd, &mut out.boundary),
            (&dofs, &mut out.full),
        ] {
            if support.is_empty() {
                continue;
            }
            let v = sample::<T>(&mut rng, n, support);
            let (m, k, _) = strip.norms(&v);
            acc.push((m / k).sqrt());
        }
    }
    Ok(out)
}

/// Largest sampled `||h^{-1} v||_strip / (||h^{-1/2} v||_Gamma + ||grad v||_strip)`
/// over the full space; the constant function is always included.
pub fn check_estfund<T: Real>(mesh: &ActiveMesh<T>, split: &SubspaceSplit, n_samples: usize, seed: u64) -> Result<f64> {
    let strip = Strip::new(mesh, split)?;
    let dofs = strip.strip_dofs();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ratio = |v: &[T]| {
        let (m, k, g) = strip.norms(v);
        m.sqrt() / (g.sqrt() + k.sqrt())
    };
    let mut max = ratio(&vec![T::one(); split.n()]);
    for _ in 0..n_samples {
        let v = sample::<T>(&mut rng, split.n(), &dofs);
        max = max.max(ratio(&v));
    }
    Ok(max)
}

/// Reference P1 mass matrix `(1 + delta_ij)` (up to the factor `|T|/20`).
pub fn reference_mass() -> DenseMatrix<f64> {
    let mut m = DenseMatrix::zeros(4, 4);
    for i in 0..4 {
        for j in 0..4 {
            m[(i, j)] = if i == j { 2.0 } else { 1.0 };
        }
    }
    m
}

/// Spectral condition number of an SPD dense matrix.
pub fn dense_condition(m: &DenseMatrix<f64>) -> f64 {
    let (ev, _) = m.symmetric_eigen();
    ev[ev.len() - 1] / ev[0]
}

/// `|<M x, y>| / (<M x, x> <M y, y>)^{1/2}`.
pub fn cs_ratio(m: &DenseMatrix<f64>, x: &[f64], y: &[f64]) -> f64 {
    let mx = m.mul_vec(x);
    let my = m.mul_vec(y);
    let d = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(p, q)| p * q).sum::<f64>();
    d(&mx, y).abs() / (d(&mx, x) * d(&my, y)).sqrt()
}

/// Samples, on every cut element, pairs `v0` (supported on the element's
/// interior dofs) and `vG` (on its boundary dofs) and returns the largest
/// mass-inner-product cosine. Elements without both kinds of dofs are
/// skipped.
pub fn check_strengthened_cs<T: Real>(
    mesh: &ActiveMesh<T>,
    split: &SubspaceSplit,
    pairs_per_element: usize,
    seed: u64,
) -> CsReport {
    let m = reference_mass();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = CsReport {
        max_ratio: 0.0,
        bound: 1.0 - 1.0 / dense_condition(&m),
        elements_checked: 0,
        elements_skipped: 0,
    };
    for &c in &mesh.cut_cells {
        let interior = split.cell_dofs[c].map(|d| split.is_interior(d));
        let m0 = interior.iter().filter(|&&b| b).count();
        if m0 == 0 || m0 == 4 {
            log::warn!("cut cell {c} has {m0} interior dofs out of 4; skipped");
            rep.elements_skipped += 1;
            continue;
        }
        rep.elements_checked += 1;
        for _ in 0..pairs_per_element {
            let mut x = [0.0; 4];
            let mut y = [0.0; 4];
            for i in 0..4 {
                let r = rng.gen_range(-1.0..1.0);
                if interior[i] {
                    x[i] = r;
                } else {
                    y[i] = r;
                }
            }
            rep.max_ratio = rep.max_ratio.max(cs_ratio(&m, &x, &y));
        }
    }
    rep
}

/// Checks `|<Mx, y>| <= (1 - 1/kappa(M)) <Mx,x>^{1/2} <My,y>^{1/2}` for
/// `x` orthogonal to `y`, with slack `1e-12` relative to the right side.
pub fn matrix_lemma_holds(m: &DenseMatrix<f64>, x: &[f64], y: &[f64]) -> bool {
    let mx = m.mul_vec(x);
    let my = m.mul_vec(y);
    let d = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(p, q)| p * q).sum::<f64>();
    let rhs = (1.0 - 1.0 / dense_condition(m)) * (d(&mx, x) * d(&my, y)).sqrt();
    d(&mx, y).abs() <= rhs + 1e-12 * (d(&mx, x) * d(&my, y)).sqrt()
}

fn random_orthogonal(rng: &mut ChaCha8Rng, m: usize) -> DenseMatrix<f64> {
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(m);
    while cols.len() < m {
        let mut v: Vec<f64> = (0..m).map(|_| rng.gen_range(-1.0..1.0)).collect();
        for _ in 0..2 {
            for c in &cols {
                let p: f64 = c.iter().zip(&v).map(|(a, b)| a * b).sum();
                v.iter_mut().zip(c).for_each(|(vi, ci)| *vi -= p * ci);
            }
        }
        let nrm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if nrm > 1e-8 {
            cols.push(v.into_iter().map(|a| a / nrm).collect());
        }
    }
    let mut q = DenseMatrix::zeros(m, m);
    for (j, c) in cols.iter().enumerate() {
        for (i, v) in c.iter().enumerate() {
            q[(i, j)] = *v;
        }
    }
    q
}

/// Random trials of the SPD matrix inequality: `M = Q D Q^T` with a random
/// orthogonal `Q` and positive diagonal `D`, and random `x` orthogonal to `y`.
pub fn check_matrix_lemma(m: usize, n_trials: usize, seed: u64) -> bool {
    if m < 2 {
        return true;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..n_trials {
        let q = random_orthogonal(&mut rng, m);
        let mut d = DenseMatrix::zeros(m, m);
        for i in 0..m {
            d[(i, i)] = 10f64.powf(rng.gen_range(-2.0..2.0));
        }
        let mat = q.matmul(&d).matmul(&q.transpose());
        let x: Vec<f64> = (0..m).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let mut y: Vec<f64> = (0..m).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let p = x.iter().zip(&y).map(|(a, b)| a * b).sum::<f64>() / x.iter().map(|a| a * a).sum::<f64>();
        y.iter_mut().zip(&x).for_each(|(yi, xi)| *yi -= p * xi);
        if !matrix_lemma_holds(&mat, &x, &y) {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Sphere;
    use crate::mesh::{build_active_mesh, classify_dofs};

    fn setup(level: u8) -> (ActiveMesh<f64>, SubspaceSplit) {
        let mesh = build_active_mesh(level, &Sphere::new([0.001, 0.002, 0.003], 1.0).unwrap()).unwrap();
        let split = classify_dofs(&mesh);
        (mesh, split)
    }

    #[test]
    fn reference_mass_condition_is_five() {
        let k = dense_condition(&reference_mass());
        assert!((k - 5.0).abs() < 1e-12);
        assert!((1.0 - 1.0 / k - 0.8).abs() < 1e-12);
    }

    #[test]
    fn two_vertex_cs_ratio_is_one_half() {
        let r = cs_ratio(&reference_mass(), &[1.0, 0.0, 0.0, 0.0], &[0.0, 1.0, 0.0, 0.0]);
        assert!((r - 0.5).abs() < 1e-14);
        let r10 = cs_ratio(&reference_mass(), &[10.0, 0.0, 0.0, 0.0], &[0.0, 1.0, 0.0, 0.0]);
        assert!((r - r10).abs() < 1e-14);
    }

    #[test]
    fn matrix_lemma_examples() {
        let id = DenseMatrix::<f64>::identity(3);
        assert!(matrix_lemma_holds(&id, &[1.0, 0.0, 0.0], &[0.0, 2.0, 0.0]));
        let d = DenseMatrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 4.0]]);
        let s = 0.5f64.sqrt();
        let (x, y) = ([s, s], [s, -s]);
        let lhs = d.mul_vec(&x).iter().zip(&y).map(|(a, b)| a * b).sum::<f64>().abs();
        assert!((lhs - 1.5).abs() < 1e-14);
        assert!(matrix_lemma_holds(&d, &x, &y));
        assert!(check_matrix_lemma(20, 100, 42));
    }

    #[test]
    fn strengthened_cs_respects_bound_at_level_two() {
        let (mesh, split) = setup(2);
        let rep = check_strengthened_cs(&mesh, &split, 50, 1);
        assert!(rep.elements_checked > 0);
        assert!(rep.holds(), "{rep:?}");
        assert!(rep.max_ratio > 0.0);
    }

    #[test]
    fn strip_ratios_are_finite_and_positive() {
        let (mesh, split) = setup(2);
        let r = measure_norm_equivalence_strip(&mesh, &split, 100, 3).unwrap();
        assert!(r.interior.is_finite_positive());
        assert!(r.boundary.is_finite_positive());
        let single = Strip::new(&mesh, &split).unwrap();
        let b = (split.n_interior..split.n()).find(|d| single.strip_dofs().contains(d)).unwrap();
        let mut v = vec![0.0; split.n()];
        v[b] = 1.0;
        let (m, k, _) = single.norms(&v);
        assert!(m > 0.0 && k > 0.0);
    }

    #[test]
    fn estfund_with_constant_is_finite() {
        let (mesh, split) = setup(1);
        let strip = Strip::new(&mesh, &split).unwrap();
        let (_, k, g) = strip.norms(&vec![1.0; split.n()]);
        assert!(k.abs() < 1e-12 && g > 0.0);
        let r = check_estfund(&mesh, &split, 100, 9).unwrap();
        assert!(r.is_finite() && r > 0.0);
    }
}
