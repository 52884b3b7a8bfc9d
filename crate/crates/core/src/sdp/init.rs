use nalgebra::DMatrix;

use super::{Phase, SdpConfig, SdpProblem, SdpTraceRow};
use crate::centering::{algebraic_center, linearized_center};
use crate::decomp::Decomposition;
use crate::error::{Error, Result};
use crate::linalg::{
    kron_identity, max_steplength, min_norm_least_squares, sym_of_vec, StepSign, SymMatrix,
};

/// Number of times the initial scale `γ₀` is doubled before giving up.
pub const MAX_ESCALATIONS: usize = 8;

/// Iterations over which the residual must drop by at least 1 %.
const STALL_WINDOW: usize = 3;

#[derive(Debug, Clone)]
pub struct InitOutcome {
    pub x: SymMatrix,
    /// Iterations of the successful attempt.
    pub iterations: usize,
    /// Scale `γ₀` of the successful attempt.
    pub init_gamma: f64,
    pub trace: Vec<SdpTraceRow>,
}

/// Finds a strictly feasible positive definite matrix, starting from `γ₀ I`.
pub fn sdp_initial_feasible(
    problem: &SdpProblem,
    decomp: &Decomposition,
    config: &SdpConfig,
) -> Result<InitOutcome> {
    let mut trace = Vec::new();
    let (x, iterations, init_gamma) =
        run_init(problem, decomp, config, &mut |row| trace.push(row))?;
    Ok(InitOutcome {
        x,
        iterations,
        init_gamma,
        trace,
    })
}

enum Attempt {
    Done(SymMatrix, usize),
    Stalled,
}

/// Runs the escalating attempts; rows of every attempt go to `sink`.
pub(crate) fn run_init(
    problem: &SdpProblem,
    decomp: &Decomposition,
    config: &SdpConfig,
    sink: &mut dyn FnMut(SdpTraceRow),
) -> Result<(SymMatrix, usize, f64)> {
    config.validate()?;
    let mut gamma0 = config.init_gamma;
    let mut best: Option<(f64, SymMatrix)> = None;
    let mut total = 0;
    for _ in 0..=MAX_ESCALATIONS {
        match attempt(problem, decomp, config, gamma0, &mut best, &mut total, sink) {
            Attempt::Done(x, k) => return Ok((x, k, gamma0)),
            Attempt::Stalled => gamma0 *= 2.0,
        }
    }
    let (residual, x) = best.unwrap_or_else(|| {
        let x = SymMatrix::identity(problem.n()).scale(config.init_gamma);
        (problem.residual(&x), x)
    });
    Err(Error::InfeasibleStart {
        iterations: total,
        residual,
        best: x.vec().iter().copied().collect(),
    })
}

fn attempt(
    problem: &SdpProblem,
    decomp: &Decomposition,
    config: &SdpConfig,
    gamma0: f64,
    best: &mut Option<(f64, SymMatrix)>,
    total: &mut usize,
    sink: &mut dyn FnMut(SdpTraceRow),
) -> Attempt {
    let n = problem.n();
    let nn = n * n;
    let m = problem.m();
    let a = decomp.constraint_matrix();
    let b = nalgebra::DVector::from_column_slice(problem.b());
    let centering_basis = if decomp.m_xi() > 0 {
        None
    } else {
        Some(decomp.eta_nu())
    };

    let mut x = SymMatrix::identity(n).scale(gamma0);
    let mut history = Vec::with_capacity(config.maxit);
    for k in 1..=config.maxit {
        *total += 1;
        let Ok(inv) = x.inverse() else {
            return Attempt::Stalled;
        };
        let s = (inv.frobenius_norm() / x.frobenius_norm()).max(1.0);
        let r = &b - a * x.vec();

        let mut lhs = DMatrix::zeros(m + nn, 2 * nn);
        lhs.view_mut((0, 0), (m, nn)).copy_from(&(a * s));
        lhs.view_mut((m, 0), (nn, nn))
            .copy_from(&kron_identity(inv.as_matrix()));
        lhs.view_mut((m, nn), (nn, nn))
            .copy_from(&kron_identity(x.as_matrix()));
        let mut rhs = vec![0.0; m + nn];
        for (i, v) in r.iter().enumerate() {
            rhs[i] = s * v;
        }
        let Ok(sol) = min_norm_least_squares(&lhs, &rhs) else {
            return Attempt::Stalled;
        };
        let dx = sym_of_vec(&sol.rows(0, nn).into_owned(), n);
        let Ok(alpha) = max_steplength(&x, &dx, StepSign::Plus) else {
            return Attempt::Stalled;
        };
        let step = match alpha.value() {
            Some(v) => (config.tau * v).min(1.0),
            None => 1.0,
        };
        x = x.axpy(step, &dx);
        sink(SdpTraceRow::new(
            Phase::Ini,
            k,
            alpha.as_f64(),
            0.0,
            problem,
            &x,
            None,
        ));

        if config.centering {
            let centered = match &centering_basis {
                None => algebraic_center(&x, decomp.xi(), config.init_mu),
                Some(basis) => linearized_center(&x, basis, config.init_mu),
            };
            if let Ok(c) = centered {
                x = c.x;
            }
        }

        let residual = problem.residual(&x);
        let pd = x.is_positive_definite();
        if pd && best.as_ref().is_none_or(|(r, _)| residual < *r) {
            *best = Some((residual, x.clone()));
        }
        if pd && residual <= config.tol {
            return Attempt::Done(x, k);
        }
        history.push(residual);
        if k > STALL_WINDOW && residual > 0.99 * history[k - 1 - STALL_WINDOW] {
            return Attempt::Stalled;
        }
    }
    Attempt::Stalled
}
