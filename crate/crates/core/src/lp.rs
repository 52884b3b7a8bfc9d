//! Greedy feasible-interior-point method for linear programs
//!
//! ```text
//! minimize cᵀx  subject to  A x = b,  x ≥ 0
//! ```
//!
//! The diagonal special case of the SDP solver: every iterate is strictly
//! positive and satisfies `A x = b`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::{
    full_svd, min_norm_least_squares, normalized_min_norm, DenseMatrix, Steplength,
};

#[derive(Debug, Clone, PartialEq)]
pub struct LpProblem {
    a: DenseMatrix,
    b: Vec<f64>,
    c: Vec<f64>,
}

impl LpProblem {
    /// Requires `A` to have full row rank.
    pub fn new(a: DenseMatrix, b: Vec<f64>, c: Vec<f64>) -> Result<Self> {
        let (m, n) = a.shape();
        if b.len() != m || c.len() != n {
            return Err(Error::dim(format!(
                "A is {m}x{n} but b has {} and c has {} entries",
                b.len(),
                c.len()
            )));
        }
        if n == 0 {
            return Err(Error::dim("problem has no variables"));
        }
        let rank = row_rank(&a);
        if rank < m {
            return Err(Error::RankDeficient {
                rank,
                rows: m,
                deficient: m - rank,
            });
        }
        Ok(Self { a, b, c })
    }

    pub fn a(&self) -> &DenseMatrix {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn c(&self) -> &[f64] {
        &self.c
    }

    pub fn m(&self) -> usize {
        self.a.nrows()
    }

    pub fn n(&self) -> usize {
        self.a.ncols()
    }

    pub fn objective_value(&self, x: &[f64]) -> f64 {
        self.c.iter().zip(x).map(|(c, x)| c * x).sum()
    }

    /// `‖A x − b‖₂`
    pub fn residual(&self, x: &[f64]) -> f64 {
        (&self.a * DVector::from_column_slice(x) - DVector::from_column_slice(&self.b)).norm()
    }
}

fn row_rank(a: &DenseMatrix) -> usize {
    if a.nrows() == 0 {
        return 0;
    }
    let Ok(svd) = full_svd(a) else {
        return 0;
    };
    let smax = svd.s.first().copied().unwrap_or(0.0);
    svd.s
        .iter()
        .filter(|&&s| s > 1e-10 * smax && smax > 0.0)
        .count()
}

/// Orthonormal basis of `{ v : A v = 0 }` for `A` with full row rank.
pub fn null_space_basis(a: &DenseMatrix) -> DenseMatrix {
    let (m, n) = a.shape();
    if m == 0 {
        return DMatrix::identity(n, n);
    }
    let svd = full_svd(a).expect("SVD of a small dense matrix converges");
    let smax = svd.s.first().copied().unwrap_or(0.0);
    let rank = svd
        .s
        .iter()
        .filter(|&&s| s > 1e-10 * smax && smax > 0.0)
        .count();
    svd.v.columns(rank, n - rank).into_owned()
}

/// Search direction variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpSearch {
    /// Directions satisfying the linearized invertibility condition.
    Invertibility,
    /// Plain projected gradient. Kept only to show how the method fails
    /// without the invertibility rows; do not use for real problems.
    UnsafeDemo,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpConfig {
    pub tau: f64,
    pub tol: f64,
    pub maxit: usize,
    pub gamma: f64,
    pub search: LpSearch,
}

impl Default for LpConfig {
    fn default() -> Self {
        Self {
            tau: 1.0 - 1e-10,
            tol: 2e-9,
            maxit: 30,
            gamma: 0.1,
            search: LpSearch::Invertibility,
        }
    }
}

impl LpConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tau > 0.0 && self.tau < 1.0) {
            return Err(Error::Config("tau must lie in (0, 1)".into()));
        }
        if !(self.tol > 0.0) || !(self.gamma > 0.0) || self.maxit == 0 {
            return Err(Error::Config(
                "tol, gamma and maxit must be positive".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpPhase {
    Ini,
    Cnt,
}

/// One logged iteration. `Ini` rows carry the untruncated steplength in
/// `alpha`; `Cnt` rows the step taken and `ctdx = alpha · cᵀΔx`.
#[derive(Debug, Clone)]
pub struct LpTraceRow {
    pub phase: LpPhase,
    pub iter: usize,
    pub alpha: f64,
    pub ctdx: f64,
    pub ctx: f64,
    pub residual: f64,
    pub inv_norm: f64,
    pub min_x: f64,
    pub x: Vec<f64>,
}

impl LpTraceRow {
    fn new(phase: LpPhase, iter: usize, alpha: f64, ctdx: f64, p: &LpProblem, x: &[f64]) -> Self {
        Self {
            phase,
            iter,
            alpha,
            ctdx,
            ctx: p.objective_value(x),
            residual: p.residual(x),
            inv_norm: x.iter().map(|v| v.powi(-2)).sum::<f64>().sqrt(),
            min_x: x.iter().copied().fold(f64::INFINITY, f64::min),
            x: x.to_vec(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    IterationLimit,
    InfeasibleStart,
}

impl LpStatus {
    pub fn label(self) -> &'static str {
        match self {
            LpStatus::Optimal => "optimal",
            LpStatus::IterationLimit => "iteration-limit",
            LpStatus::InfeasibleStart => "infeasible-start",
        }
    }
}

#[derive(Debug, Clone)]
pub struct LpResult {
    pub x: Vec<f64>,
    pub status: LpStatus,
    pub objective: f64,
    pub trace: Vec<LpTraceRow>,
}

impl LpResult {
    pub fn init_iterations(&self) -> usize {
        self.trace
            .iter()
            .filter(|r| r.phase == LpPhase::Ini)
            .count()
    }

    pub fn iterations(&self) -> usize {
        self.trace
            .iter()
            .filter(|r| r.phase == LpPhase::Cnt && r.iter > 0)
            .count()
    }
}

/// `sup { α : x + α d > 0 }` for `x > 0`.
pub fn lp_max_steplength(x: &[f64], d: &[f64]) -> Steplength {
    let lambda = x
        .iter()
        .zip(d)
        .map(|(x, d)| -d / x)
        .fold(f64::NEG_INFINITY, f64::max);
    if lambda > 0.0 {
        Steplength::Finite(1.0 / lambda)
    } else {
        Steplength::Infinite
    }
}

/// Finds `x > 0` with `A x = b`, starting from the all-ones vector.
pub fn lp_initial_feasible(problem: &LpProblem, config: &LpConfig) -> Result<Vec<f64>> {
    run_init(problem, config, &mut |_| {})
}

fn run_init(
    problem: &LpProblem,
    config: &LpConfig,
    sink: &mut dyn FnMut(LpTraceRow),
) -> Result<Vec<f64>> {
    config.validate()?;
    let (m, n) = (problem.m(), problem.n());
    let a = problem.a();
    let b = DVector::from_column_slice(problem.b());
    let mut x = vec![1.0; n];
    let mut best = (problem.residual(&x), x.clone());
    let mut lhs = DMatrix::zeros(m + n, 2 * n);
    lhs.view_mut((0, 0), (m, n)).copy_from(a);
    for k in 1..=config.maxit {
        for i in 0..n {
            lhs[(m + i, i)] = 1.0 / x[i];
            lhs[(m + i, n + i)] = x[i];
        }
        let r = &b - a * DVector::from_column_slice(&x);
        let mut rhs = vec![0.0; m + n];
        rhs[..m].copy_from_slice(r.as_slice());
        let sol = min_norm_least_squares(&lhs, &rhs)?;
        let dx: Vec<f64> = sol.rows(0, n).iter().copied().collect();
        let alpha = lp_max_steplength(&x, &dx);
        let full = alpha.value().is_none_or(|a| a > 1.0);
        let step = if full {
            1.0
        } else {
            config.tau * alpha.as_f64()
        };
        for (xi, di) in x.iter_mut().zip(&dx) {
            *xi += step * di;
        }
        let row = LpTraceRow::new(LpPhase::Ini, k, alpha.as_f64(), 0.0, problem, &x);
        let residual = row.residual;
        sink(row);
        if residual < best.0 {
            best = (residual, x.clone());
        }
        if full || residual <= config.tol {
            return Ok(x);
        }
    }
    Err(Error::InfeasibleStart {
        iterations: config.maxit,
        residual: best.0,
        best: best.1,
    })
}

/// Direction `Δx = M x̂` with `cᵀΔx = −γ` that keeps `x + Δx` invertible to
/// first order; `m` spans the null space of `A`.
///
/// The invertibility rows `(M x̂)ᵢ / xᵢ + xᵢ Δx̃ᵢ = 0` are met by
/// `Δx̃ᵢ = −(M x̂)ᵢ / xᵢ²`, so the minimum-norm solution minimizes
/// `‖x̂‖² + ‖diag(x)⁻² M x̂‖²` under the normalization.
pub fn lp_search_direction(x: &[f64], m: &DenseMatrix, c: &[f64], gamma: f64) -> Result<Vec<f64>> {
    let (n, k) = m.shape();
    if x.len() != n || c.len() != n {
        return Err(Error::dim("direction basis does not match the iterate"));
    }
    let cv = DVector::from_column_slice(c);
    let slope = m.transpose() * &cv;
    if k == 0 || slope.norm() <= 1e-14 * cv.norm().max(f64::MIN_POSITIVE) {
        return Err(Error::AlreadyOptimal);
    }
    let weighted = DMatrix::from_fn(n, k, |i, j| m[(i, j)] / (x[i] * x[i]));
    let coeffs = normalized_min_norm(&weighted, &slope, -gamma).ok_or(Error::AlreadyOptimal)?;
    Ok((m * coeffs).iter().copied().collect())
}

fn projected_gradient(m: &DenseMatrix, c: &[f64], gamma: f64) -> Result<Vec<f64>> {
    let cv = DVector::from_column_slice(c);
    let proj = m * (m.transpose() * &cv);
    let s = proj.norm_squared();
    if s <= 1e-28 * cv.norm_squared().max(f64::MIN_POSITIVE) {
        return Err(Error::AlreadyOptimal);
    }
    Ok((proj * (-gamma / s)).iter().copied().collect())
}

/// Minimizes from `x0`, or from the output of the feasibility phase.
pub fn lp_solve(problem: &LpProblem, config: &LpConfig, x0: Option<&[f64]>) -> Result<LpResult> {
    config.validate()?;
    let mut trace = Vec::new();
    let mut x = match x0 {
        Some(x0) => {
            if x0.len() != problem.n() {
                return Err(Error::dim("starting vector does not match the problem"));
            }
            let b_norm = problem.b().iter().map(|v| v * v).sum::<f64>().sqrt();
            let mut bad = Vec::new();
            if x0.iter().any(|&v| !(v > 0.0)) {
                bad.push("starting vector is not strictly positive".to_string());
            }
            if problem.residual(x0) > 100.0 * config.tol * (1.0 + b_norm) {
                bad.push("starting vector violates A x = b".to_string());
            }
            if !bad.is_empty() {
                return Err(Error::Feasibility(bad));
            }
            x0.to_vec()
        }
        None => match run_init(problem, config, &mut |row| trace.push(row)) {
            Ok(x) => x,
            Err(Error::InfeasibleStart { best, .. }) => {
                return Ok(LpResult {
                    objective: problem.objective_value(&best),
                    x: best,
                    status: LpStatus::InfeasibleStart,
                    trace,
                })
            }
            Err(e) => return Err(e),
        },
    };

    let basis = null_space_basis(problem.a());
    let c = problem.c();
    trace.push(LpTraceRow::new(
        LpPhase::Cnt,
        0,
        0.0,
        -config.gamma,
        problem,
        &x,
    ));
    let finish = |x: Vec<f64>, status, trace| LpResult {
        objective: problem.objective_value(&x),
        x,
        status,
        trace,
    };
    for k in 1..=config.maxit {
        let dx = match config.search {
            LpSearch::Invertibility => lp_search_direction(&x, &basis, c, config.gamma),
            LpSearch::UnsafeDemo => projected_gradient(&basis, c, config.gamma),
        };
        let dx = match dx {
            Ok(d) => d,
            Err(Error::AlreadyOptimal) => return Ok(finish(x, LpStatus::Optimal, trace)),
            Err(e) => return Err(e),
        };
        let slope: f64 = c.iter().zip(&dx).map(|(c, d)| c * d).sum();
        let Some(alpha) = lp_max_steplength(&x, &dx).value() else {
            if slope < 0.0 {
                return Err(Error::Unbounded);
            }
            return Ok(finish(x, LpStatus::Optimal, trace));
        };
        let step = config.tau * alpha;
        for (xi, di) in x.iter_mut().zip(&dx) {
            *xi += step * di;
        }
        let row = LpTraceRow::new(LpPhase::Cnt, k, step, step * slope, problem, &x);
        let done = row.ctdx.abs() <= config.tol;
        trace.push(row);
        if done {
            return Ok(finish(x, LpStatus::Optimal, trace));
        }
    }
    Ok(finish(x, LpStatus::IterationLimit, trace))
}

/// Duality gap `cᵀx − bᵀy` of a primal feasible `x` and dual feasible `(y, z)`.
///
/// The gap must agree with `xᵀz` and be nonnegative; violated conditions are
/// reported together.
pub fn verify_weak_duality_lp(x: &[f64], y: &[f64], z: &[f64], problem: &LpProblem) -> Result<f64> {
    let (m, n) = (problem.m(), problem.n());
    if x.len() != n || z.len() != n || y.len() != m {
        return Err(Error::dim("primal-dual pair does not match the problem"));
    }
    const FEAS: f64 = 1e-8;
    let a = problem.a();
    let yv = DVector::from_column_slice(y);
    let zv = DVector::from_column_slice(z);
    let cv = DVector::from_column_slice(problem.c());
    let primal = problem.residual(x);
    let dual = (a.transpose() * &yv + &zv - &cv).norm();
    let mut violated = Vec::new();
    if primal > FEAS {
        violated.push(format!("A x = b violated by {primal:.3e}"));
    }
    if let Some(v) = x.iter().copied().find(|&v| v < -FEAS) {
        violated.push(format!("x has negative entry {v:.3e}"));
    }
    if dual > FEAS {
        violated.push(format!("Aᵀy + z = c violated by {dual:.3e}"));
    }
    if let Some(v) = z.iter().copied().find(|&v| v < -FEAS) {
        violated.push(format!("z has negative entry {v:.3e}"));
    }
    if !violated.is_empty() {
        return Err(Error::Feasibility(violated));
    }
    let ctx = problem.objective_value(x);
    let bty: f64 = problem.b().iter().zip(y).map(|(b, y)| b * y).sum();
    let gap = ctx - bty;
    let xtz: f64 = x.iter().zip(z).map(|(x, z)| x * z).sum();
    let xn = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    let scale = 1.0 + ctx.abs() + bty.abs();
    let slack = xn * dual + yv.norm() * primal + 1e-9 * scale;
    if (gap - xtz).abs() > slack || gap < -slack {
        return Err(Error::Feasibility(vec![format!(
            "gap {gap:.3e} inconsistent with xᵀz = {xtz:.3e}"
        )]));
    }
    Ok(gap)
}
