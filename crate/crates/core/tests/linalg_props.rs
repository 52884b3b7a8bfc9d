mod common;

use fipm::linalg::{
    cholesky, mat, max_steplength, min_norm_least_squares, symmetrize, vec, StepSign,
};
use fipm::SymMatrix;
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rand::Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn mat_inverts_vec(seed in any::<u64>(), n in 1usize..7) {
        let mut rng = common::rng(seed);
        let x = DMatrix::from_fn(n, n, |_, _| rng.random_range(-3.0..3.0));
        prop_assert_eq!(mat(vec(&x).as_slice(), n).unwrap(), x);
    }

    #[test]
    fn steplength_marks_the_boundary(seed in any::<u64>(), n in 1usize..7) {
        let mut rng = common::rng(seed);
        let x = common::random_pd(&mut rng, n, 0.05);
        let d = common::random_sym(&mut rng, n);
        if let Some(a) = max_steplength(&x, &d, StepSign::Plus).unwrap().value() {
            prop_assert!(cholesky(&x.axpy(0.99 * a, &d)).is_ok());
            prop_assert!(cholesky(&x.axpy(1.01 * a, &d)).is_err());
            // the oracle: smallest eigenvalue of X + αD vanishes at α_max
            let at = x.axpy(a, &d);
            prop_assert!(common::min_eig(at.as_matrix()).abs() <= 1e-8 * (1.0 + at.frobenius_norm()));
        } else {
            prop_assert!(cholesky(&x.axpy(1e6, &d)).is_ok());
        }
    }

    #[test]
    fn steplength_of_diagonal_matrices(seed in any::<u64>(), n in 1usize..7) {
        let mut rng = common::rng(seed);
        let x: Vec<f64> = (0..n).map(|_| rng.random_range(0.1..5.0)).collect();
        let mut d: Vec<f64> = (0..n).map(|_| rng.random_range(-2.0..2.0)).collect();
        d[0] = -d[0].abs() - 0.1;
        let worst = x.iter().zip(&d).map(|(x, d)| -d / x).fold(f64::NEG_INFINITY, f64::max);
        let a = max_steplength(&SymMatrix::from_diagonal(&x), &SymMatrix::from_diagonal(&d), StepSign::Plus)
            .unwrap()
            .value()
            .unwrap();
        prop_assert!((a - 1.0 / worst).abs() <= 1e-12 * a);
    }

    #[test]
    fn least_squares_is_locally_optimal(seed in any::<u64>(), r in 1usize..7, c in 1usize..7) {
        let mut rng = common::rng(seed);
        let a = DMatrix::from_fn(r, c, |_, _| rng.random_range(-1.0..1.0));
        let b: Vec<f64> = (0..r).map(|_| rng.random_range(-1.0..1.0)).collect();
        let bv = DVector::from_column_slice(&b);
        let x = min_norm_least_squares(&a, &b).unwrap();
        let base = (&a * &x - &bv).norm();
        for _ in 0..10 {
            let mut delta = DVector::from_fn(c, |_, _| rng.random_range(-1.0..1.0));
            delta *= 1e-3 / delta.norm();
            prop_assert!((&a * (&x + delta) - &bv).norm() >= base - 1e-12);
        }
    }

    #[test]
    fn symmetrize_is_idempotent(seed in any::<u64>(), n in 1usize..7) {
        let mut rng = common::rng(seed);
        let d = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
        let once = symmetrize(&d).unwrap();
        let twice = symmetrize(once.as_matrix()).unwrap();
        prop_assert_eq!(once, twice);
    }
}
