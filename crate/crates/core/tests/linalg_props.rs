use diagonal_homotopy::linalg::{
    hermitian_eig, polar_partial_isometry, principal_unitary_log_path, psd_sqrt, Field, Matrix,
};
use diagonal_homotopy::random::{gaussian_matrix, random_hermitian, random_unitary, seeded};
use proptest::prelude::*;

fn field(complex: bool) -> Field {
    if complex {
        Field::Complex
    } else {
        Field::Real
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hermitian_eig_reconstructs(seed in any::<u64>(), n in 1usize..=12, complex in any::<bool>()) {
        let a = random_hermitian(&mut seeded(seed), n, field(complex));
        let e = hermitian_eig(&a).unwrap();
        let v = &e.vectors;
        let d = Matrix::diag_real(&e.values);
        prop_assert!((&(v * &d) * &v.adjoint()).dist(&a) <= 1e-9 * a.norm_fro().max(1.0));
        prop_assert!((&v.adjoint() * v).dist(&Matrix::identity(n)) <= 1e-9);
        prop_assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn psd_sqrt_squares_back(seed in any::<u64>(), n in 1usize..=8) {
        let g = gaussian_matrix(&mut seeded(seed), n, n, Field::Complex);
        let a = (&g * &g.adjoint()).hermitian_part();
        let s = psd_sqrt(&a).unwrap();
        let scale = 1.0 + a.norm_fro();
        prop_assert!((&s * &s).dist(&a) <= 1e-9 * scale);
        prop_assert!((&s * &a).dist(&(&a * &s)) <= 1e-9 * scale);
    }

    #[test]
    fn polar_initial_projection(seed in any::<u64>(), m in 1usize..=6, n in 1usize..=6, rank in 0usize..=6) {
        let mut rng = seeded(seed);
        let r = rank.min(m).min(n);
        let b = &gaussian_matrix(&mut rng, m, r, Field::Complex) * &gaussian_matrix(&mut rng, r, n, Field::Complex);
        let p = polar_partial_isometry(&b, 1e-9).unwrap();
        let u = &p.isometry;
        let initial = &u.adjoint() * u;
        prop_assert!(initial.projection_residual() <= 1e-9);
        prop_assert!((&initial * &b.adjoint()).dist(&b.adjoint()) <= 1e-9 * (1.0 + b.norm_fro()));
        prop_assert_eq!(p.ker_dim, n - r);
        prop_assert!((u * &p.abs).dist(&b) <= 1e-9 * (1.0 + b.norm_fro()));
    }

    #[test]
    fn unitary_log_path_is_lipschitz(seed in any::<u64>(), n in 1usize..=6, t in 0.0f64..0.95, delta in 0.0f64..0.05) {
        let u = random_unitary(&mut seeded(seed), n, Field::Complex);
        let a = principal_unitary_log_path(&u, t).unwrap();
        let b = principal_unitary_log_path(&u, t + delta).unwrap();
        prop_assert!(a.dist(&b) <= std::f64::consts::PI * n as f64 * delta + 1e-9);
        let end = principal_unitary_log_path(&u, 1.0).unwrap();
        prop_assert!(end.dist(&u) <= 1e-9);
    }
}
