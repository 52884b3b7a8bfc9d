mod common;

use fipm::decomp::{decompose, nonsym_basis};
use fipm::io::fixtures;
use fipm::SdpProblem;
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rand::Rng;

fn is_symmetric_vec(v: &[f64], n: usize, sign: f64) -> bool {
    (0..n).all(|i| (0..n).all(|j| (v[i + j * n] - sign * v[j + i * n]).abs() <= 1e-12))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn decomposition_invariants(seed in any::<u64>(), n in 1usize..6, m_raw in 0usize..9) {
        let mut rng = common::rng(seed);
        let m = m_raw.min(n * (n + 1) / 2 - 1);
        let (p, _) = common::random_bounded_sdp(&mut rng, n, m);
        let d = decompose(&p, 1e-10).unwrap();

        prop_assert_eq!(d.m_nu(), n * (n - 1) / 2);
        prop_assert_eq!(d.m_xi() + d.m_eta() + m + d.m_nu(), n * n);
        let all = d.all_directions();
        let k = all.ncols();
        prop_assert!((all.transpose() * &all - DMatrix::identity(k, k)).amax() <= 1e-10);
        prop_assert!((d.constraint_matrix() * d.symmetric_directions()).amax() <= 1e-10);
        for col in d.symmetric_directions().column_iter() {
            prop_assert!(is_symmetric_vec(col.as_slice(), n, 1.0));
        }
        for col in d.nu().column_iter() {
            prop_assert!(is_symmetric_vec(col.as_slice(), n, -1.0));
        }
        let scale = p.objective().frobenius_norm();
        for j in 0..d.m_xi() {
            prop_assert!(p.objective().dot(&d.xi_matrix(j)).abs() <= 1e-9 * scale);
        }
    }

    #[test]
    fn null_space_is_spanned(seed in any::<u64>(), n in 1usize..6, m_raw in 0usize..9) {
        let mut rng = common::rng(seed);
        let m = m_raw.min(n * (n + 1) / 2 - 1);
        let (p, _) = common::random_bounded_sdp(&mut rng, n, m);
        let d = decompose(&p, 1e-10).unwrap();
        // independent construction of a null-space element: project a random
        // symmetric matrix onto ker(A) with a dense least-squares solve
        let a = d.constraint_matrix();
        let v0 = common::random_sym(&mut rng, n).vec();
        let correction = if m == 0 {
            DVector::zeros(n * n)
        } else {
            let at = a.transpose();
            let y = (a * &at).lu().solve(&(a * &v0)).unwrap();
            at * y
        };
        let v = v0 - correction;
        prop_assert!((a * &v).amax() <= 1e-9);
        let res = common::span_residual(&d.symmetric_directions(), &v);
        prop_assert!(res <= 1e-9 * v.norm().max(1.0));
    }

    #[test]
    fn classification_ignores_objective_scale(seed in any::<u64>(), n in 2usize..5, s in 1e-3f64..1e3) {
        let mut rng = common::rng(seed);
        let m = rng.random_range(1..n * (n + 1) / 2);
        let (p, _) = common::random_bounded_sdp(&mut rng, n, m);
        let q = SdpProblem::new(p.objective().scale(s), p.constraints().to_vec(), p.b().to_vec()).unwrap();
        let (dp, dq) = (decompose(&p, 1e-10).unwrap(), decompose(&q, 1e-10).unwrap());
        prop_assert_eq!((dp.m_xi(), dp.m_eta()), (dq.m_xi(), dq.m_eta()));
    }
}

#[test]
fn nonsym_basis_gram_is_identity() {
    for n in 1..6 {
        let b = nonsym_basis(n);
        assert_eq!(b.ncols(), n * (n - 1) / 2);
        let k = b.ncols();
        assert!((b.transpose() * &b - DMatrix::identity(k, k)).amax() < 1e-15);
    }
}

#[test]
fn fixture_splits() {
    let sos = decompose(&fixtures::sos_example(), 1e-10).unwrap();
    assert_eq!((sos.m_xi(), sos.m_eta()), (1, 1));
    let cmb = decompose(&fixtures::combinatorial_example(None), 1e-10).unwrap();
    assert_eq!((cmb.m_xi(), cmb.m_eta()), (1, 2));
}
