use cutfem::assembly::{assemble_system, ManufacturedSolution, NitscheParams};
use cutfem::geometry::Sphere;
use cutfem::linalg::{pcg, SparseCholesky};
use cutfem::mesh::{build_active_mesh, classify_dofs, ActiveMesh, SubspaceSplit};
use cutfem::precond::extract_blocks;
use cutfem::verify::{
    check_estfund, compute_errors, estimate_splitting_constant, interpolate, measure_norm_equivalence_strip,
};

const X0: [f64; 3] = [0.001, 0.002, 0.003];

fn setup(level: u8) -> (ActiveMesh<f64>, SubspaceSplit) {
    let mesh = build_active_mesh(level, &Sphere::new(X0, 1.0).unwrap()).unwrap();
    let split = classify_dofs(&mesh);
    (mesh, split)
}

#[test]
fn interpolant_errors_are_positive_with_optimal_orders() {
    let ms = ManufacturedSolution::new(X0);
    let errs: Vec<_> = (1..=3)
        .map(|l| {
            let (mesh, split) = setup(l);
            compute_errors(&interpolate(&ms, &mesh, &split), &ms, &mesh, &split).unwrap()
        })
        .collect();
    for e in &errs {
        assert!(e.l2 > 0.0 && e.h1 > 0.0);
        assert!(e.h1_full >= e.h1);
    }
    let l2_order = (errs[1].l2 / errs[2].l2).log2();
    let h1_order = (errs[1].h1 / errs[2].h1).log2();
    assert!((1.8..2.3).contains(&l2_order), "{l2_order}");
    assert!((0.9..1.1).contains(&h1_order), "{h1_order}");
}

#[test]
fn discrete_solution_is_as_accurate_as_the_interpolant() {
    let ms = ManufacturedSolution::new(X0);
    let (mesh, split) = setup(2);
    let sys = assemble_system(&mesh, &split, &NitscheParams::default(), &ms).unwrap();
    let u = SparseCholesky::factor(&sys.a).unwrap().solve(&sys.b);
    let e = compute_errors(&u, &ms, &mesh, &split).unwrap();
    let ei = compute_errors(&interpolate(&ms, &mesh, &split), &ms, &mesh, &split).unwrap();
    assert!(e.h1 <= 1.1 * ei.h1, "{} vs {}", e.h1, ei.h1);
    assert!(e.l2 <= 1.5 * ei.l2, "{} vs {}", e.l2, ei.l2);
}

#[test]
fn splitting_constant_sampled_close_to_eigensolve() {
    for level in 0..=2 {
        let (mesh, split) = setup(level);
        let sys = assemble_system(&mesh, &split, &NitscheParams::default(), &ManufacturedSolution::new(X0)).unwrap();
        let part = extract_blocks(&sys.a, &split);
        let k = estimate_splitting_constant(&sys.a, &part, 17).unwrap();
        assert_eq!(k.method, if split.n() <= 1000 { "dense" } else { "lanczos" });
        assert!(k.k_a >= 1.0);
        assert!(k.sampled <= k.k_a * (1.0 + 1e-6), "level {level}: {k:?}");
        assert!(k.sampled >= 0.95 * k.k_a, "level {level}: {k:?}");
    }
}

#[test]
fn strip_equivalence_is_level_robust() {
    let r2 = {
        let (m, s) = setup(2);
        measure_norm_equivalence_strip(&m, &s, 100, 5).unwrap()
    };
    let r3 = {
        let (m, s) = setup(3);
        measure_norm_equivalence_strip(&m, &s, 100, 5).unwrap()
    };
    for (a, b) in [(r2.interior, r3.interior), (r2.boundary, r3.boundary)] {
        assert!(a.max / b.min < 2.0 && b.max / a.min < 2.0, "{a:?} {b:?}");
    }
}

#[test]
fn estfund_ratio_is_stable_across_levels() {
    let r: Vec<f64> = (2..=3)
        .map(|l| {
            let (m, s) = setup(l);
            check_estfund(&m, &s, 100, 8).unwrap()
        })
        .collect();
    assert!(r[0].max(r[1]) / r[0].min(r[1]) < 1.5, "{r:?}");
}

#[test]
fn pcg_reaches_cholesky_solution() {
    let (mesh, split) = setup(2);
    let sys = assemble_system(&mesh, &split, &NitscheParams::default(), &ManufacturedSolution::new(X0)).unwrap();
    let exact = SparseCholesky::factor(&sys.a).unwrap().solve(&sys.b);
    let sgs = cutfem::linalg::Sgs::new(sys.a.clone()).unwrap();
    let (u, _) = pcg(&sys.a, &sys.b, &sgs, 1e-8, 1000).unwrap();
    let e: Vec<f64> = u.iter().zip(&exact).map(|(p, q)| p - q).collect();
    assert!((sys.a.quad_form(&e) / sys.a.quad_form(&exact)).sqrt() <= 1e-5);
}
