use num_complex::Complex64;
use proptest::prelude::*;
use qpgf_core::bie::quadrature::periodic_cardinal;
use qpgf_core::bie::{gmres_solve, DenseMatrix};
use qpgf_core::greens::free_green;
use qpgf_core::greens::chi;
use qpgf_core::lattice::dual_basis;
use qpgf_core::validation::fit_decay_rate;
use qpgf_core::*;

proptest! {
    #[test]
    fn free_green_is_even(x in -3.0..3.0f64, y in -3.0..3.0f64, z in 0.05..3.0f64, k in 0.1..10.0f64) {
        let a = free_green(Vec3::new(x, y, z), k).unwrap();
        let b = free_green(Vec3::new(-x, -y, -z), k).unwrap();
        prop_assert!((a.value - b.value).norm() <= 1e-14 * a.value.norm());
        prop_assert!((a.gradient_source.norm() - b.gradient_source.norm()).abs() <= 1e-12 * a.gradient_source.norm());
    }

    #[test]
    fn window_is_monotone_and_bounded(t in 0.0..1.5f64, dt in 0.0..0.5f64, c in 0.1..0.9f64) {
        let (a, b) = (chi(t, c), chi(t + dt, c));
        prop_assert!((0.0..=1.0).contains(&a));
        prop_assert!(b <= a + 1e-15);
    }

    #[test]
    fn dual_basis_is_biorthogonal(a in 0.5..2.0f64, b in -1.0..1.0f64, c in 0.5..2.0f64, d in -0.4..0.4f64) {
        let lat = dual_basis(Vec2::new(a, d), Vec2::new(b, c)).unwrap();
        prop_assert!((lat.v1.dot(lat.v1s) - 1.0).abs() < 1e-12);
        prop_assert!(lat.v1.dot(lat.v2s).abs() < 1e-12);
        prop_assert!(lat.v2.dot(lat.v1s).abs() < 1e-12);
        prop_assert!((lat.v2.dot(lat.v2s) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cardinal_functions_sum_to_one(x in 0.0..1.0f64, half in 2usize..20) {
        let n = 2 * half;
        let s: f64 = (0..n).map(|j| periodic_cardinal(x - j as f64 / n as f64, n)).sum();
        prop_assert!((s - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fit_recovers_random_power_laws(c in 1e-6..1e3f64, s in -4.0..-0.2f64) {
        let samples: Vec<_> = [40.0f64, 80.0, 160.0, 320.0, 640.0].iter().map(|&a| (a, c * a.powf(s))).collect();
        let fit = fit_decay_rate(&samples).unwrap();
        prop_assert!((fit.slope - s).abs() < 1e-10);
    }

    #[test]
    fn gmres_solves_dominant_systems(seed in proptest::collection::vec(-1.0..1.0f64, 2 * 36), n in 2usize..6) {
        let mut op = DenseMatrix::identity(n);
        for i in 0..n {
            for j in 0..n {
                let v = Complex64::new(seed[2 * (i * n + j)], seed[2 * (i * n + j) + 1]) * (0.5 / n as f64);
                op.row_mut(i)[j] += v;
            }
        }
        let x: Vec<_> = (0..n).map(|i| Complex64::new(i as f64, 1.0)).collect();
        let b = op.matvec(&x);
        let sol = gmres_solve(&op, &b, 1e-12, 50).unwrap();
        for (u, v) in sol.values.iter().zip(&x) {
            prop_assert!((u - v).norm() < 1e-9);
        }
    }
}
