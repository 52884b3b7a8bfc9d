use super::init::run_init;
use super::{
    constructed_direction, sdp_search_direction, Phase, SdpConfig, SdpProblem, SdpResult,
    SdpStatus, SdpTraceRow, Search,
};
use crate::centering::{algebraic_center, geometric_center};
use crate::decomp::{decompose, Decomposition};
use crate::error::{Error, Result};
use crate::linalg::{max_steplength, StepSign, SymMatrix};

/// Receives trace rows as the solver produces them.
pub trait TraceSink {
    fn record(&mut self, row: &SdpTraceRow);
}

impl<F: FnMut(&SdpTraceRow)> TraceSink for F {
    fn record(&mut self, row: &SdpTraceRow) {
        self(row)
    }
}

/// Solves the problem, running the feasibility phase first when `x0` is `None`.
pub fn sdp_solve(
    problem: &SdpProblem,
    config: &SdpConfig,
    x0: Option<&SymMatrix>,
) -> Result<SdpResult> {
    sdp_solve_with(problem, config, x0, &mut |_: &SdpTraceRow| {})
}

/// Like [`sdp_solve`], additionally streaming every trace row to `sink`.
pub fn sdp_solve_with(
    problem: &SdpProblem,
    config: &SdpConfig,
    x0: Option<&SymMatrix>,
    sink: &mut dyn TraceSink,
) -> Result<SdpResult> {
    config.validate()?;
    let decomp = decompose(problem, config.decomp_tol)?;
    let mut run = Run {
        problem,
        config,
        decomp: &decomp,
        trace: Vec::new(),
        sink,
    };

    let start = match x0 {
        Some(x) => {
            check_start(problem, config, x)?;
            x.clone()
        }
        None => {
            let mut rows = Vec::new();
            let init = run_init(problem, &decomp, config, &mut |row| rows.push(row));
            for row in rows {
                run.emit(row);
            }
            match init {
                Ok((x, _, _)) => x,
                Err(Error::InfeasibleStart { best, .. }) => {
                    let x =
                        crate::linalg::sym_of_vec(&nalgebra::DVector::from_vec(best), problem.n());
                    return Ok(run.finish(x, SdpStatus::InitFailed));
                }
                Err(e) => return Err(e),
            }
        }
    };
    run.minimize(start)
}

fn check_start(problem: &SdpProblem, config: &SdpConfig, x: &SymMatrix) -> Result<()> {
    if x.n() != problem.n() {
        return Err(Error::dim("starting matrix does not match the problem"));
    }
    crate::linalg::cholesky(x)?;
    let b_norm = problem.b().iter().map(|v| v * v).sum::<f64>().sqrt();
    let residual = problem.residual(x);
    if residual > 100.0 * config.tol * (1.0 + b_norm) {
        return Err(Error::Feasibility(vec![format!(
            "starting matrix violates the constraints (residual {residual:.3e})"
        )]));
    }
    Ok(())
}

struct Run<'a> {
    problem: &'a SdpProblem,
    config: &'a SdpConfig,
    decomp: &'a Decomposition,
    trace: Vec<SdpTraceRow>,
    sink: &'a mut dyn TraceSink,
}

impl Run<'_> {
    fn emit(&mut self, row: SdpTraceRow) {
        self.sink.record(&row);
        self.trace.push(row);
    }

    fn finish(self, x: SymMatrix, status: SdpStatus) -> SdpResult {
        SdpResult {
            objective: self.problem.objective_value(&x),
            x,
            status,
            trace: self.trace,
            dims: (self.decomp.m_xi(), self.decomp.m_eta()),
        }
    }

    fn abort(self, iteration: usize, cause: Error) -> Error {
        Error::Aborted {
            iteration,
            cause: Box::new(cause),
            trace: self.trace,
        }
    }

    fn minimize(mut self, start: SymMatrix) -> Result<SdpResult> {
        let cfg = self.config;
        let c = self.problem.objective();
        let directions = match cfg.search {
            Search::Std => self.decomp.all_directions(),
            _ => self.decomp.symmetric_directions(),
        };

        let start_slope = if self.decomp.m_eta() == 0 {
            0.0
        } else {
            -cfg.gamma
        };
        let row = SdpTraceRow::new(Phase::Cnt, 0, 0.0, start_slope, self.problem, &start, None);
        self.emit(row);
        if self.decomp.m_eta() == 0 {
            return Ok(self.finish(start, SdpStatus::Optimal));
        }

        let mut x = start;
        let mut prev: Option<SymMatrix> = None;
        for k in 1..=cfg.maxit {
            let constructed = match (&prev, cfg.search.constructs_directions()) {
                (Some(p), true) => constructed_direction(p, &x, c),
                _ => None,
            };
            let dx = match constructed {
                Some(d) => d,
                None => match sdp_search_direction(&x, &directions, c, cfg.gamma) {
                    Ok(d) => d,
                    Err(Error::AlreadyOptimal) => return Ok(self.finish(x, SdpStatus::Optimal)),
                    Err(e) => return Err(self.abort(k, e)),
                },
            };
            let slope = c.dot(&dx);
            let alpha = match max_steplength(&x, &dx, StepSign::Plus) {
                Ok(a) => a,
                Err(e) => return Err(self.abort(k, e)),
            };
            let Some(alpha) = alpha.value() else {
                let status = if slope < 0.0 {
                    SdpStatus::Unbounded
                } else {
                    SdpStatus::Optimal
                };
                return Ok(self.finish(x, status));
            };

            // back off from the boundary when rounding leaves the cone
            let mut gap = 1.0 - cfg.tau;
            let (step, stepped) = loop {
                let t = (1.0 - gap) * alpha;
                let xs = x.axpy(t, &dx);
                if xs.is_positive_definite() {
                    break (t, xs);
                }
                gap *= 10.0;
                if gap >= 1.0 && (alpha * slope).abs() <= cfg.tol {
                    // nothing left to gain along this direction
                    return Ok(self.finish(x, SdpStatus::Optimal));
                }
                if gap >= 1.0 {
                    let cause =
                        crate::linalg::cholesky(&xs)
                            .err()
                            .unwrap_or(Error::NotPositiveDefinite {
                                index: 0,
                                pivot: 0.0,
                            });
                    return Err(self.abort(k, cause));
                }
            };
            let trcdx = step * slope;

            let next = if cfg.centering && self.decomp.m_xi() > 0 {
                let centered = match cfg.search {
                    Search::Gce => geometric_center(&stepped, self.decomp.xi())
                        .map(|r| stepped.scale(cfg.mu).axpy(1.0 - cfg.mu, &r.x)),
                    _ => algebraic_center(&stepped, self.decomp.xi(), cfg.mu).map(|r| r.x),
                };
                match centered {
                    Ok(xc) => xc,
                    Err(e) => return Err(self.abort(k, e)),
                }
            } else {
                stepped.clone()
            };

            prev = Some(std::mem::replace(&mut x, next));
            let row = SdpTraceRow::new(Phase::Cnt, k, step, trcdx, self.problem, &x, Some(stepped));
            self.emit(row);
            if trcdx.abs() <= cfg.tol {
                return Ok(self.finish(x, SdpStatus::Optimal));
            }
        }
        Ok(self.finish(x, SdpStatus::IterationLimit))
    }
}
