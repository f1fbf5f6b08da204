use cutfem::assembly::{assemble_system, ManufacturedSolution, NitscheParams};
use cutfem::geometry::Sphere;
use cutfem::linalg::{pcg, CsrMatrix, DenseMatrix, Preconditioner, SparseCholesky};
use cutfem::mesh::{build_active_mesh, classify_dofs, ActiveMesh, SubspaceSplit};
use cutfem::precond::{
    build_mg_hierarchy, extract_blocks, B0Kind, B1Kind, PreconditionerFactory, PreconditionerSpec,
};
use cutfem::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

fn system(level: u8) -> (ActiveMesh<f64>, SubspaceSplit, CsrMatrix<f64>) {
    let x0 = [0.001, 0.002, 0.003];
    let mesh = build_active_mesh(level, &Sphere::new(x0, 1.0).unwrap()).unwrap();
    let split = classify_dofs(&mesh);
    let sys = assemble_system(&mesh, &split, &NitscheParams::default(), &ManufacturedSolution::new(x0)).unwrap();
    (mesh, split, sys.a)
}

fn random_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

fn norm(x: &[f64]) -> f64 {
    dot(x, x).sqrt()
}

#[test]
fn prolongated_coarse_ones_is_one_where_parents_are_interior() {
    let (mesh, split, a) = system(3);
    let part = extract_blocks(&a, &split);
    let h = build_mg_hierarchy(&mesh, &split, &part.a0, None).unwrap();
    assert!(h.num_levels() >= 2);
    for k in 0..h.num_levels() - 1 {
        let coarse = &h.levels[k];
        let fine = &h.levels[k + 1];
        let p = coarse.prolongation.as_ref().unwrap();
        let v = p.mul_vec(&vec![1.0; coarse.dim()]);
        let cset: std::collections::HashSet<_> = coarse.vertices.iter().copied().collect();
        for (i, x) in fine.vertices.iter().enumerate() {
            let par = x.map(|c| c % 2);
            let lo = [(x[0] - par[0]) / 2, (x[1] - par[1]) / 2, (x[2] - par[2]) / 2];
            let hi = [(x[0] + par[0]) / 2, (x[1] + par[1]) / 2, (x[2] + par[2]) / 2];
            if cset.contains(&lo) && cset.contains(&hi) {
                assert!((v[i] - 1.0).abs() < 1e-14, "fine dof {i}: {}", v[i]);
            } else {
                assert!(v[i] < 1.0);
            }
        }
    }
}

#[test]
fn galerkin_operators_are_spd() {
    let (mesh, split, a) = system(3);
    let part = extract_blocks(&a, &split);
    let h = build_mg_hierarchy(&mesh, &split, &part.a0, None).unwrap();
    for lvl in &h.levels {
        assert!(lvl.matrix().is_symmetric(1e-12));
        SparseCholesky::factor(lvl.matrix()).unwrap();
    }
}

#[test]
fn two_grid_error_propagation_contracts() {
    let (mesh, split, a) = system(3);
    let part = extract_blocks(&a, &split);
    let h = build_mg_hierarchy(&mesh, &split, &part.a0, Some(2)).unwrap();
    assert_eq!(h.num_levels(), 2);
    let a0 = &part.a0;
    // power iteration on E = I - B^{-1} A_0 in the energy norm
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut e = random_vec(&mut rng, a0.nrows());
    let mut rho = 0.0;
    for _ in 0..40 {
        let ae = a0.mul_vec(&e);
        let mut z = vec![0.0; e.len()];
        h.vcycle(&ae, &mut z);
        let next: Vec<f64> = e.iter().zip(&z).map(|(x, y)| x - y).collect();
        let num = a0.quad_form(&next).sqrt();
        let den = a0.quad_form(&e).sqrt();
        rho = num / den;
        e = next.iter().map(|x| x / num).collect();
    }
    assert!(rho < 1.0, "two-grid contraction {rho}");
}

#[test]
fn vcycle_of_zero_is_zero_and_single_level_is_exact() {
    let (mesh, split, a) = system(2);
    let part = extract_blocks(&a, &split);
    let h = build_mg_hierarchy(&mesh, &split, &part.a0, None).unwrap();
    let mut z = vec![1.0; part.n0];
    h.vcycle(&vec![0.0; part.n0], &mut z);
    assert!(z.iter().all(|&v| v == 0.0));

    let one = build_mg_hierarchy(&mesh, &split, &part.a0, Some(1)).unwrap();
    assert_eq!(one.num_levels(), 1);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let r = random_vec(&mut rng, part.n0);
    let mut z = vec![0.0; part.n0];
    one.vcycle(&r, &mut z);
    let res: Vec<f64> = part.a0.mul_vec(&z).iter().zip(&r).map(|(x, y)| x - y).collect();
    assert!(norm(&res) <= 1e-10 * norm(&r));
}

#[test]
fn every_preconditioner_is_symmetric() {
    let (mesh, split, a) = system(2);
    let part = extract_blocks(&a, &split);
    let h = Arc::new(build_mg_hierarchy(&mesh, &split, &part.a0, None).unwrap());
    let f = PreconditionerFactory::new(&a, &split).with_hierarchy(h);
    let specs = [
        PreconditionerSpec::SGS,
        PreconditionerSpec::PA,
        PreconditionerSpec::PD,
        PreconditionerSpec::PB,
        PreconditionerSpec::Block {
            b0: B0Kind::VCycle(2),
            b1: B1Kind::Jacobi,
        },
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for spec in specs {
        let p = f.build(spec).unwrap();
        for _ in 0..20 {
            let x = random_vec(&mut rng, a.nrows());
            let y = random_vec(&mut rng, a.nrows());
            let lhs = dot(&p.apply_vec(&x), &y);
            let rhs = dot(&x, &p.apply_vec(&y));
            assert!((lhs - rhs).abs() <= 1e-10 * norm(&x) * norm(&y), "{spec}: {lhs} vs {rhs}");
        }
    }
}

#[test]
fn exact_block_preconditioner_matches_dense_block_solve() {
    let (_, split, a) = system(0);
    let f = PreconditionerFactory::new(&a, &split);
    let p = f.build(PreconditionerSpec::PA).unwrap();
    let part = f.partition();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let r = random_vec(&mut rng, a.nrows());
    let z = p.apply_vec(&r);
    let d0 = DenseMatrix::from_rows(&part.a0.to_dense()).cholesky().unwrap();
    let d1 = DenseMatrix::from_rows(&part.a1.to_dense()).cholesky().unwrap();
    let mut expect = d0.solve(&r[..part.n0]);
    expect.extend(d1.solve(&r[part.n0..]));
    let err: f64 = z.iter().zip(&expect).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    assert!(err < 1e-10 * norm(&expect), "{err}");
}

#[test]
fn multigrid_without_hierarchy_is_a_config_error() {
    let (_, split, a) = system(0);
    let f = PreconditionerFactory::new(&a, &split);
    assert!(matches!(f.build(PreconditionerSpec::PB), Err(Error::Config(_))));
}

#[test]
fn pb_iterations_close_to_pd() {
    let (mesh, split, a) = system(2);
    let part = extract_blocks(&a, &split);
    let h = Arc::new(build_mg_hierarchy(&mesh, &split, &part.a0, None).unwrap());
    let f = PreconditionerFactory::new(&a, &split).with_hierarchy(h);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let b = random_vec(&mut rng, a.nrows());
    let it = |spec| pcg(&a, &b, &f.build(spec).unwrap(), 1e-6, 500).unwrap().1.iterations;
    let (pd, pb) = (it(PreconditionerSpec::PD), it(PreconditionerSpec::PB));
    assert!(pb <= pd + 4, "pd {pd} pb {pb}");
}

#[test]
fn block_dimensions_at_level_one() {
    let (_, split, a) = system(1);
    let part = extract_blocks(&a, &split);
    assert_eq!((part.n0, part.n1), (81, 140));
}
