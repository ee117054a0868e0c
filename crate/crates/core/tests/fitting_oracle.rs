#![allow(clippy::needless_range_loop)]

use netvalue::{fit_linear, fit_power_law, fit_quadratic, DegreeHistogram};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Raw-x normal equations solved by Gaussian elimination with partial
/// pivoting. Returns `(a, b, c)` for `y = a·x² + b·x + c`.
fn normal_equations_oracle(points: &[(f64, f64)]) -> (f64, f64, f64) {
    let mut m = [[0.0f64; 4]; 3];
    for &(x, y) in points {
        let basis = [x * x, x, 1.0];
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] += basis[i] * basis[j];
            }
            m[i][3] += basis[i] * y;
        }
    }
    for col in 0..3 {
        let pivot = (col..3)
            .max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))
            .unwrap();
        m.swap(col, pivot);
        for row in col + 1..3 {
            let f = m[row][col] / m[col][col];
            for k in col..4 {
                m[row][k] -= f * m[col][k];
            }
        }
    }
    let mut sol = [0.0; 3];
    for row in (0..3).rev() {
        let tail: f64 = (row + 1..3).map(|k| m[row][k] * sol[k]).sum();
        sol[row] = (m[row][3] - tail) / m[row][row];
    }
    (sol[0], sol[1], sol[2])
}

#[test]
fn quadratic_fit_matches_oracle_on_random_data() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for trial in 0..100 {
        let len = rng.random_range(5..40);
        let (a, b, c) = (
            rng.random_range(-20.0..20.0),
            rng.random_range(-10.0..10.0),
            rng.random_range(-5.0..5.0),
        );
        let points: Vec<(f64, f64)> = (0..len)
            .map(|_| {
                let x: f64 = rng.random_range(0.0..1.0);
                (x, a * x * x + b * x + c + rng.random_range(-0.5..0.5))
            })
            .collect();
        let fit = fit_quadratic(&points).unwrap();
        let (oa, ob, oc) = normal_equations_oracle(&points);
        assert!(
            (fit.a - oa).abs() <= 1e-9,
            "trial {trial}: a {} vs {oa}",
            fit.a
        );
        assert!(
            (fit.b - ob).abs() <= 1e-9,
            "trial {trial}: b {} vs {ob}",
            fit.b
        );
        assert!(
            (fit.c - oc).abs() <= 1e-9,
            "trial {trial}: c {} vs {oc}",
            fit.c
        );
        assert!((0.0..=1.0).contains(&fit.r_squared));
    }
}

#[test]
fn oracle_recovers_published_law() {
    let pts: Vec<_> = (1..=5)
        .map(|i| {
            let x = i as f64 / 10.0;
            (x, 12.045 * x * x + 6.59 * x + 2.5533)
        })
        .collect();
    let (a, b, c) = normal_equations_oracle(&pts);
    assert!((a - 12.045).abs() < 1e-9 && (b - 6.59).abs() < 1e-9 && (c - 2.5533).abs() < 1e-9);
}

proptest! {
    #[test]
    fn exact_quadratic_has_tiny_residuals(
        a in -50.0f64..50.0, b in -50.0f64..50.0, c in -50.0f64..50.0,
        xs in proptest::collection::btree_set(0u32..1000, 3..30),
    ) {
        let pts: Vec<(f64, f64)> = xs.iter()
            .map(|&i| { let x = i as f64 / 1000.0; (x, a * x * x + b * x + c) })
            .collect();
        let fit = fit_quadratic(&pts).unwrap();
        for &(x, y) in &pts {
            prop_assert!((fit.eval(x) - y).abs() <= 1e-9);
        }
        prop_assert!(fit.r_squared > 1.0 - 1e-9);
    }

    #[test]
    fn power_law_scale_equivariance(
        counts in proptest::collection::vec(1usize..1000, 2..40),
        scale in 2usize..50,
    ) {
        let base = DegreeHistogram::from_counts(counts.iter().enumerate().map(|(i, &c)| (i + 1, c)));
        let scaled = DegreeHistogram::from_counts(counts.iter().enumerate().map(|(i, &c)| (i + 1, c * scale)));
        let f0 = fit_power_law(&base).unwrap();
        let f1 = fit_power_law(&scaled).unwrap();
        prop_assert!((f0.exponent - f1.exponent).abs() <= 1e-12);
        prop_assert!((f1.log_coefficient - f0.log_coefficient - (scale as f64).log10()).abs() <= 1e-9);
    }

    #[test]
    fn mean_model_has_zero_r_squared(ys in proptest::collection::vec(-100.0f64..100.0, 3..30)) {
        // fitted line through a constant predictor: R² of predicting the mean
        let mean = ys.iter().sum::<f64>() / ys.len() as f64;
        let ss_tot: f64 = ys.iter().map(|y| (y - mean).powi(2)).sum();
        prop_assume!(ss_tot > 1e-6);
        let ss_res: f64 = ys.iter().map(|y| (y - mean).powi(2)).sum();
        prop_assert_eq!(1.0 - ss_res / ss_tot, 0.0);
        // and a perfect line scores 1
        let line: Vec<(f64, f64)> = ys.iter().enumerate().map(|(i, _)| (i as f64, 3.0 * i as f64 - 1.0)).collect();
        prop_assert!((fit_linear(&line).unwrap().r_squared - 1.0).abs() < 1e-12);
    }
}
