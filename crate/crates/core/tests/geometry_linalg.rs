use fracbem::geometry::{discretize_boundary, interior_cells, Domain, Point};
use fracbem::linalg::{lu_factor, DenseMatrix};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};

fn domains() -> Vec<Domain> {
    vec![
        Domain::rectangle(0.0, 0.0, std::f64::consts::PI, std::f64::consts::PI).unwrap(),
        Domain::rectangle(-1.0, 0.5, 2.0, 1.5).unwrap(),
        Domain::disk(Point::new(0.3, -0.2), 1.7).unwrap(),
        Domain::l_shape(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn meshes_close_and_point_outward(quarter in 2usize..60, which in 0usize..4) {
        let domain = &domains()[which];
        let mesh = discretize_boundary(domain, 4 * quarter).unwrap();
        let n = mesh.len();
        for i in 0..n {
            let (e, next) = (&mesh.elements[i], &mesh.elements[(i + 1) % n]);
            prop_assert_eq!(e.end, next.start);
            let eps = 1e-6 * e.length;
            let out = e.midpoint + eps * e.normal;
            let inside = e.midpoint + (-eps) * e.normal;
            prop_assert!(!mesh.contains(out));
            prop_assert!(mesh.contains(inside));
        }
    }

    #[test]
    fn cells_are_separated_from_midpoints(m in 2usize..30, which in 0usize..4) {
        let domain = &domains()[which];
        let mesh = discretize_boundary(domain, 64).unwrap();
        let cells = interior_cells(domain, m).unwrap();
        for p in &cells.points {
            for q in mesh.midpoints() {
                prop_assert!(p.distance(q) > 0.0);
            }
        }
    }
}

fn random_matrix(n: usize, seed: u64) -> DenseMatrix {
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    DenseMatrix::from_fn(n, n, |i, j| rng.gen_range(-1.0..1.0) + if i == j { 2.0 } else { 0.0 })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(30))]

    #[test]
    fn solve_round_trip(n in 1usize..60, seed in any::<u64>()) {
        let a = random_matrix(n, seed);
        let f = lu_factor(&a).unwrap();
        let mut perm = f.permutation().to_vec();
        perm.sort_unstable();
        prop_assert_eq!(perm, (0..n).collect::<Vec<_>>());
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed ^ 0x5eed);
        let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let b = a.matvec(&x).unwrap();
        let got = f.solve(&b).unwrap();
        let back = a.matvec(&got).unwrap();
        let resid = back.iter().zip(&b).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
        prop_assert!(resid <= 1e-10 * a.norm_inf().max(1.0), "residual {resid}");
    }

    #[test]
    fn matrix_solve_matches_column_solves(n in 1usize..30, m in 1usize..8, seed in any::<u64>()) {
        let a = random_matrix(n, seed);
        let b = DenseMatrix::from_fn(n, m, |i, j| ((i * 7 + j * 3) % 5) as f64 - 2.0);
        let f = lu_factor(&a).unwrap();
        let x = f.solve_matrix(&b).unwrap();
        for j in 0..m {
            let col = f.solve(&b.column(j)).unwrap();
            for i in 0..n {
                prop_assert!((x[(i, j)] - col[i]).abs() <= 1e-12 * col[i].abs().max(1.0));
            }
        }
    }
}
