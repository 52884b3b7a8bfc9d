//! Random problem generators and brute-force oracles shared by the
//! integration tests.
#![allow(dead_code)]

use fipm::{DenseMatrix, LpProblem, SdpProblem, SymMatrix};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_sym(rng: &mut impl Rng, n: usize) -> SymMatrix {
    let g = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
    SymMatrix::new((&g + g.transpose()) * 0.5).unwrap()
}

/// `G Gᵀ + shift·I`, eigenvalues bounded below by `shift`.
pub fn random_pd(rng: &mut impl Rng, n: usize, shift: f64) -> SymMatrix {
    let g = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
    SymMatrix::new(&g * g.transpose() + DMatrix::identity(n, n) * shift).unwrap()
}

/// Feasible SDP with a strictly feasible dual, so the optimum is attained.
/// Returns the problem and the strictly feasible primal point used to build `b`.
pub fn random_bounded_sdp(rng: &mut impl Rng, n: usize, m: usize) -> (SdpProblem, SymMatrix) {
    loop {
        let x0 = random_pd(rng, n, 0.5);
        let constraints: Vec<SymMatrix> = (0..m).map(|_| random_sym(rng, n)).collect();
        let b: Vec<f64> = constraints.iter().map(|a| a.dot(&x0)).collect();
        let mut c = random_pd(rng, n, 0.1);
        for a in &constraints {
            c = c.axpy(rng.random_range(-1.0..1.0), a);
        }
        if let Ok(p) = SdpProblem::new(c, constraints, b) {
            if fipm::decompose(&p, 1e-10).is_ok() {
                return (p, x0);
            }
        }
    }
}

/// LP with a strictly positive feasible point and a strictly feasible dual.
pub fn random_bounded_lp(rng: &mut impl Rng, m: usize, n: usize) -> LpProblem {
    loop {
        let a = DMatrix::from_fn(m, n, |_, _| rng.random_range(-2.0..2.0));
        let x0: Vec<f64> = (0..n).map(|_| rng.random_range(0.2..2.0)).collect();
        let b: Vec<f64> = (0..m)
            .map(|i| (0..n).map(|j| a[(i, j)] * x0[j]).sum())
            .collect();
        let y: Vec<f64> = (0..m).map(|_| rng.random_range(-1.0..1.0)).collect();
        let c: Vec<f64> = (0..n)
            .map(|j| (0..m).map(|i| a[(i, j)] * y[i]).sum::<f64>() + rng.random_range(0.1..1.5))
            .collect();
        if let Ok(p) = LpProblem::new(a, b, c) {
            return p;
        }
    }
}

/// Minimum of `cᵀx` over `Ax = b, x ≥ 0` by enumerating basic solutions.
pub fn vertex_enumeration(p: &LpProblem) -> Option<(f64, Vec<f64>)> {
    let (m, n) = (p.m(), p.n());
    let mut best: Option<(f64, Vec<f64>)> = None;
    for cols in combinations(n, m) {
        let sub = DMatrix::from_fn(m, m, |i, j| p.a()[(i, cols[j])]);
        if sub.determinant().abs() < 1e-12 {
            continue;
        }
        let Some(inv) = sub.try_inverse() else {
            continue;
        };
        let xb = inv * nalgebra::DVector::from_column_slice(p.b());
        if xb.iter().any(|v| *v < -1e-10) {
            continue;
        }
        let mut x = vec![0.0; n];
        for (k, &j) in cols.iter().enumerate() {
            x[j] = xb[k].max(0.0);
        }
        let obj = p.objective_value(&x);
        if best.as_ref().is_none_or(|(o, _)| obj < *o) {
            best = Some((obj, x));
        }
    }
    best
}

pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Smallest eigenvalue straight from nalgebra, bypassing `SymMatrix`.
pub fn min_eig(x: &DenseMatrix) -> f64 {
    x.clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// Least-squares residual of `v` against the column span of `basis`.
pub fn span_residual(basis: &DenseMatrix, v: &nalgebra::DVector<f64>) -> f64 {
    if basis.ncols() == 0 {
        return v.norm();
    }
    let svd = basis.clone().svd(true, true);
    let coeffs = svd.solve(v, 1e-12).unwrap();
    (basis * coeffs - v).norm()
}
