use cutfem::geometry::{decompose_cut_tet, signed_volume, simplex_quadrature, triangle_quadrature, Tet};
use cutfem::linalg::{pcg, CsrMatrix, Preconditioner, Sgs, SparseCholesky};
use cutfem::verify::check_matrix_lemma;
use proptest::prelude::*;

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

fn tet_strategy() -> impl Strategy<Value = Tet<f64>> {
    proptest::array::uniform4(proptest::array::uniform3(-1.0f64..1.0))
        .prop_filter("well shaped", |t| signed_volume(t).abs() > 1e-3)
}

fn phi_strategy() -> impl Strategy<Value = [f64; 4]> {
    proptest::array::uniform4(prop_oneof![-1.0f64..-1e-3, 1e-3f64..1.0])
}

/// Random sparse SPD matrix: graph Laplacian of a random graph plus a
/// positive diagonal shift.
fn spd(n: usize, edges: &[(usize, usize, f64)], shift: f64) -> CsrMatrix<f64> {
    let mut trip = Vec::new();
    let mut diag = vec![shift; n];
    for &(i, j, w) in edges {
        let (i, j) = (i % n, j % n);
        if i == j {
            continue;
        }
        trip.push((i, j, -w));
        trip.push((j, i, -w));
        diag[i] += w;
        diag[j] += w;
    }
    trip.extend(diag.iter().enumerate().map(|(i, d)| (i, i, *d)));
    CsrMatrix::from_triplets(n, n, trip)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn cut_pieces_partition_the_volume(tet in tet_strategy(), phi in phi_strategy()) {
        let vol = signed_volume(&tet).abs();
        let neg = decompose_cut_tet(&tet, &phi).unwrap();
        let pos = decompose_cut_tet(&tet, &phi.map(|p| -p)).unwrap();
        let sum = neg.inside_volume() + pos.inside_volume();
        prop_assert!((sum - vol).abs() <= 1e-12 * vol.max(1.0), "{} vs {}", sum, vol);
        prop_assert!((neg.interface_area() - pos.interface_area()).abs() <= 1e-12);
    }

    #[test]
    fn tet_rule_integrates_monomials(a in 0u32..=4, b in 0u32..=4, c in 0u32..=4) {
        prop_assume!(a + b + c <= 4);
        let rule = simplex_quadrature::<f64>(4).unwrap();
        let reference = [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        let got: f64 = rule
            .physical(&reference, 1.0 / 6.0)
            .map(|(x, w)| w * x[0].powi(a as i32) * x[1].powi(b as i32) * x[2].powi(c as i32))
            .sum();
        let exact = factorial(a) * factorial(b) * factorial(c) / factorial(a + b + c + 3);
        prop_assert!((got - exact).abs() <= 1e-13, "{} vs {}", got, exact);
    }

    #[test]
    fn triangle_rule_integrates_monomials(a in 0u32..=4, b in 0u32..=4) {
        prop_assume!(a + b <= 4);
        let rule = triangle_quadrature::<f64>(4).unwrap();
        let reference = [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]];
        let got: f64 = rule
            .physical(&reference)
            .map(|(x, w)| w * x[0].powi(a as i32) * x[1].powi(b as i32))
            .sum();
        let exact = factorial(a) * factorial(b) / factorial(a + b + 2);
        prop_assert!((got - exact).abs() <= 1e-13, "{} vs {}", got, exact);
    }

    #[test]
    fn sgs_is_symmetric(
        edges in proptest::collection::vec((0usize..30, 0usize..30, 0.1f64..2.0), 10..80),
        x in proptest::collection::vec(-1.0f64..1.0, 30),
        y in proptest::collection::vec(-1.0f64..1.0, 30),
    ) {
        let a = spd(30, &edges, 0.5);
        let s = Sgs::new(a).unwrap();
        let d = |u: &[f64], v: &[f64]| u.iter().zip(v).map(|(p, q)| p * q).sum::<f64>();
        let n = |u: &[f64]| d(u, u).sqrt();
        let lhs = d(&s.apply_vec(&x), &y);
        let rhs = d(&x, &s.apply_vec(&y));
        prop_assert!((lhs - rhs).abs() <= 1e-10 * n(&x) * n(&y));
    }

    #[test]
    fn pcg_matches_cholesky_in_energy_norm(
        edges in proptest::collection::vec((0usize..40, 0usize..40, 0.1f64..2.0), 20..120),
        b in proptest::collection::vec(-1.0f64..1.0, 40),
    ) {
        let a = spd(40, &edges, 0.05);
        let exact = SparseCholesky::factor(&a).unwrap().solve(&b);
        let res: Vec<f64> = a.mul_vec(&exact).iter().zip(&b).map(|(p, q)| p - q).collect();
        prop_assert!(res.iter().map(|r| r * r).sum::<f64>().sqrt() <= 1e-10);
        let sgs = Sgs::new(a.clone()).unwrap();
        let (u, rep) = pcg(&a, &b, &sgs, 1e-8, 500).unwrap();
        prop_assert!(rep.converged);
        let e: Vec<f64> = u.iter().zip(&exact).map(|(p, q)| p - q).collect();
        let rel = (a.quad_form(&e) / a.quad_form(&exact)).sqrt();
        prop_assert!(rel <= 1e-5, "{}", rel);
    }

    #[test]
    fn spd_matrix_lemma(seed in any::<u64>(), m in 2usize..12) {
        prop_assert!(check_matrix_lemma(m, 5, seed));
    }
}
