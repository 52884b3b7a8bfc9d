mod common;

use fipm::lp::{
    lp_initial_feasible, lp_search_direction, lp_solve, null_space_basis, verify_weak_duality_lp,
    LpConfig, LpPhase,
};
use fipm::LpProblem;
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rand::Rng;

fn random_lp(seed: u64) -> LpProblem {
    let mut rng = common::rng(seed);
    let n = rng.random_range(2..=6);
    let m = rng.random_range(1..n);
    common::random_bounded_lp(&mut rng, m, n)
}

/// `max bᵀy` over `Aᵀy ≤ c` by enumerating the vertices of the dual polyhedron.
fn dual_vertex_enumeration(p: &LpProblem) -> Option<(f64, Vec<f64>)> {
    let (m, n) = (p.m(), p.n());
    let c = DVector::from_column_slice(p.c());
    let mut best: Option<(f64, Vec<f64>)> = None;
    for rows in common::combinations(n, m) {
        let sub = DMatrix::from_fn(m, m, |i, j| p.a()[(j, rows[i])]);
        if sub.determinant().abs() < 1e-12 {
            continue;
        }
        let rhs = DVector::from_fn(m, |i, _| c[rows[i]]);
        let y = sub.lu().solve(&rhs)?;
        let slack = &c - p.a().transpose() * &y;
        if slack.iter().any(|v| *v < -1e-10) {
            continue;
        }
        let val: f64 = p.b().iter().zip(y.iter()).map(|(b, y)| b * y).sum();
        if best.as_ref().is_none_or(|(v, _)| val > *v) {
            best = Some((val, y.iter().copied().collect()));
        }
    }
    best
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn iterates_stay_feasible_positive_and_descend(seed in any::<u64>()) {
        let p = random_lp(seed);
        let r = lp_solve(&p, &LpConfig::default(), None).unwrap();
        let cnt: Vec<_> = r.trace.iter().filter(|t| t.phase == LpPhase::Cnt).collect();
        let bound = 100.0 * cnt[0].residual.max(1e-14);
        for row in &cnt {
            prop_assert!(row.residual <= bound);
            prop_assert!(row.x.iter().all(|v| *v > 0.0));
        }
        for w in cnt.windows(2) {
            prop_assert!(w[1].ctx < w[0].ctx);
        }
    }

    #[test]
    fn gamma_only_rescales_the_direction(seed in any::<u64>(), g in 0.01f64..10.0) {
        let p = random_lp(seed);
        let basis = null_space_basis(p.a());
        let mut rng = common::rng(seed ^ 1);
        let x: Vec<f64> = (0..p.n()).map(|_| rng.random_range(0.01..3.0)).collect();
        let d1 = lp_search_direction(&x, &basis, p.c(), 0.1).unwrap();
        let d2 = lp_search_direction(&x, &basis, p.c(), g).unwrap();
        let size = d1.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for (a, b) in d1.iter().zip(&d2) {
            prop_assert!((a * g / 0.1 - b).abs() <= 1e-10 * size * g / 0.1);
        }
        // the steplength absorbs the scale, so the iterates agree
        let x0 = lp_initial_feasible(&p, &LpConfig::default()).unwrap();
        let run = |gamma| {
            let cfg = LpConfig { gamma, tau: 1.0 - 1e-6, ..LpConfig::default() };
            lp_solve(&p, &cfg, Some(&x0)).unwrap()
        };
        let (a, b) = (run(0.1), run(g));
        let first = |r: &fipm::LpResult| r.trace.iter().find(|t| t.iter == 1).map(|t| t.x.clone());
        if let (Some(xa), Some(xb)) = (first(&a), first(&b)) {
            let size = xa.iter().fold(1.0f64, |m, v| m.max(v.abs()));
            let diff = xa.iter().zip(&xb).map(|(u, v)| (u - v).abs()).fold(0.0, f64::max);
            prop_assert!(diff <= 1e-10 * size, "{diff}");
        }
        prop_assert!((a.objective - b.objective).abs() <= 1e-8 * (1.0 + a.objective.abs()));
    }

    #[test]
    fn solution_matches_both_oracles(seed in any::<u64>()) {
        let p = random_lp(seed);
        let (primal, _) = common::vertex_enumeration(&p).unwrap();
        let (dual, y) = dual_vertex_enumeration(&p).unwrap();
        prop_assert!((primal - dual).abs() <= 1e-8 * (1.0 + primal.abs()));
        // the default 1 − 1e-10 fraction occasionally jams next to a
        // suboptimal vertex; a slightly shorter step does not
        let cfg = LpConfig { tau: 1.0 - 1e-6, ..LpConfig::default() };
        let r = lp_solve(&p, &cfg, None).unwrap();
        prop_assert!((r.objective - primal).abs() <= 1e-7);
        let z: Vec<f64> = (DVector::from_column_slice(p.c()) - p.a().transpose() * DVector::from_vec(y.clone()))
            .iter()
            .copied()
            .collect();
        let gap = verify_weak_duality_lp(&r.x, &y, &z, &p).unwrap();
        prop_assert!((-1e-9..=1e-6).contains(&gap));
    }
}

#[test]
fn unbounded_problem_is_reported() {
    // x₁ − x₂ = 0, minimize −x₁: the ray (1, 1) is feasible
    let p = LpProblem::new(
        DMatrix::from_row_slice(1, 2, &[1.0, -1.0]),
        vec![0.0],
        vec![-1.0, 0.0],
    )
    .unwrap();
    assert!(matches!(
        lp_solve(&p, &LpConfig::default(), None),
        Err(fipm::Error::Unbounded)
    ));
}

#[test]
fn weak_duality_rejects_infeasible_pairs() {
    let p = random_lp(3);
    let x = vec![-1.0; p.n()];
    let y = vec![0.0; p.m()];
    let z = p.c().to_vec();
    assert!(matches!(
        verify_weak_duality_lp(&x, &y, &z, &p),
        Err(fipm::Error::Feasibility(_))
    ));
}
