//! Semidefinite programs in primal standard form
//!
//! ```text
//! minimize ⟨C, X⟩  subject to  ⟨A_i, X⟩ = b_i,  X ⪰ 0
//! ```
//!
//! solved by feasible-interior-point iterations: every iterate satisfies the
//! constraints and stays strictly inside the cone.

mod direction;
mod init;
mod path;
mod primal_dual;
mod solver;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::SymMatrix;

pub use direction::{constructed_direction, sdp_search_direction};
pub use init::{sdp_initial_feasible, InitOutcome};
pub use path::path_projection;
pub use primal_dual::{pd_newdir_solve, pd_system, PdDirection, PdPoint};
pub use solver::{sdp_solve, sdp_solve_with, TraceSink};

#[derive(Debug, Clone, PartialEq)]
pub struct SdpProblem {
    objective: SymMatrix,
    constraints: Vec<SymMatrix>,
    b: Vec<f64>,
}

impl SdpProblem {
    pub fn new(objective: SymMatrix, constraints: Vec<SymMatrix>, b: Vec<f64>) -> Result<Self> {
        let n = objective.n();
        if constraints.len() != b.len() {
            return Err(Error::dim(format!(
                "{} constraint matrices but {} right-hand side values",
                constraints.len(),
                b.len()
            )));
        }
        if let Some(i) = constraints.iter().position(|a| a.n() != n) {
            return Err(Error::dim(format!(
                "constraint {} is {}x{}, objective is {n}x{n}",
                i + 1,
                constraints[i].n(),
                constraints[i].n()
            )));
        }
        Ok(Self {
            objective,
            constraints,
            b,
        })
    }

    pub fn n(&self) -> usize {
        self.objective.n()
    }

    pub fn m(&self) -> usize {
        self.constraints.len()
    }

    pub fn objective(&self) -> &SymMatrix {
        &self.objective
    }

    pub fn constraints(&self) -> &[SymMatrix] {
        &self.constraints
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn objective_value(&self, x: &SymMatrix) -> f64 {
        self.objective.dot(x)
    }

    /// `‖A vec(X) − b‖₂`
    pub fn residual(&self, x: &SymMatrix) -> f64 {
        self.constraints
            .iter()
            .zip(&self.b)
            .map(|(a, b)| (a.dot(x) - b).powi(2))
            .sum::<f64>()
            .sqrt()
    }
}

/// How the minimization direction is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Search {
    /// All feasible directions, including non-symmetric ones.
    Std,
    /// Symmetric directions only.
    Sym,
    /// Differences of successive iterates, algebraic centering.
    Ace,
    /// Differences of successive iterates, geometric centering.
    Gce,
}

impl Search {
    pub const ALL: [Search; 4] = [Search::Std, Search::Sym, Search::Ace, Search::Gce];

    pub fn name(self) -> &'static str {
        match self {
            Search::Std => "STD",
            Search::Sym => "SYM",
            Search::Ace => "ACE",
            Search::Gce => "GCE",
        }
    }

    fn constructs_directions(self) -> bool {
        matches!(self, Search::Ace | Search::Gce)
    }
}

impl fmt::Display for Search {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Search {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "std" => Ok(Search::Std),
            "sym" => Ok(Search::Sym),
            "ace" => Ok(Search::Ace),
            "gce" => Ok(Search::Gce),
            _ => Err(Error::Config(format!(
                "unknown search '{s}' (expected std, sym, ace or gce)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SdpConfig {
    pub search: Search,
    /// Fraction of the maximal steplength taken per step.
    pub tau: f64,
    pub tol: f64,
    /// Centering weight: 0 applies the full correction, 1 none.
    pub mu: f64,
    pub maxit: usize,
    /// Normalization `⟨C, ΔX⟩ = −γ` of the search direction.
    pub gamma: f64,
    /// Switches centering off in both phases.
    pub centering: bool,
    /// Centering weight used during initialization.
    pub init_mu: f64,
    /// Scale of the initial matrix `γ₀ I`.
    pub init_gamma: f64,
    /// Relative threshold used by the decomposition.
    pub decomp_tol: f64,
}

impl SdpConfig {
    pub fn for_search(search: Search) -> Self {
        let (mu, gap) = match search {
            Search::Std => (0.765, 1e-6),
            Search::Sym => (0.2, 5e-5),
            Search::Ace => (0.215, 5e-5),
            Search::Gce => (0.0, 5e-5),
        };
        Self {
            search,
            tau: 1.0 - gap,
            tol: 2e-8,
            mu,
            maxit: 20,
            gamma: 0.1,
            centering: true,
            init_mu: 0.0,
            init_gamma: 1.0,
            decomp_tol: crate::decomp::DEFAULT_DECOMP_TOL,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::Config(what.to_string()));
        if !(self.tau > 0.0 && self.tau < 1.0) {
            return bad("tau must lie in (0, 1)");
        }
        if !(self.tol > 0.0) {
            return bad("tol must be positive");
        }
        if !(0.0..=1.0).contains(&self.mu) || !(0.0..=1.0).contains(&self.init_mu) {
            return bad("mu must lie in [0, 1]");
        }
        if self.maxit == 0 {
            return bad("maxit must be positive");
        }
        if !(self.gamma > 0.0) || !(self.init_gamma > 0.0) {
            return bad("gamma must be positive");
        }
        if !(self.decomp_tol > 0.0) {
            return bad("decomposition tolerance must be positive");
        }
        Ok(())
    }
}

impl Default for SdpConfig {
    fn default() -> Self {
        Self::for_search(Search::Std)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    /// Feasibility iterations.
    Ini,
    /// Minimization iterations; row 0 is the feasible start.
    Cnt,
}

impl Phase {
    pub fn label(self) -> &'static str {
        match self {
            Phase::Ini => "ini",
            Phase::Cnt => "cnt",
        }
    }
}

/// One logged iteration.
///
/// For `Ini` rows `alpha` is the untruncated maximal steplength of the
/// feasibility direction and `trcdx` is unused (zero); for `Cnt` rows
/// `alpha` is the step actually taken and `trcdx = alpha · ⟨C, ΔX⟩`.
#[derive(Debug, Clone)]
pub struct SdpTraceRow {
    pub phase: Phase,
    pub iter: usize,
    pub alpha: f64,
    pub trcdx: f64,
    pub trcx: f64,
    pub residual: f64,
    pub inv_norm: f64,
    pub min_eig: f64,
    /// Iterate at the end of the iteration.
    pub x: SymMatrix,
    /// Point reached by the step, before centering.
    pub stepped: Option<SteppedPoint>,
}

#[derive(Debug, Clone)]
pub struct SteppedPoint {
    pub x: SymMatrix,
    pub residual: f64,
    pub inv_norm: f64,
}

fn inv_norm(x: &SymMatrix) -> f64 {
    x.inverse()
        .map(|i| i.frobenius_norm())
        .unwrap_or(f64::INFINITY)
}

impl SdpTraceRow {
    pub(crate) fn new(
        phase: Phase,
        iter: usize,
        alpha: f64,
        trcdx: f64,
        problem: &SdpProblem,
        x: &SymMatrix,
        stepped: Option<SymMatrix>,
    ) -> Self {
        let stepped = stepped.map(|s| SteppedPoint {
            residual: problem.residual(&s),
            inv_norm: inv_norm(&s),
            x: s,
        });
        Self {
            phase,
            iter,
            alpha,
            trcdx,
            trcx: problem.objective_value(x),
            residual: problem.residual(x),
            inv_norm: inv_norm(x),
            min_eig: x.min_eigenvalue(),
            x: x.clone(),
            stepped,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SdpStatus {
    Optimal,
    IterationLimit,
    Unbounded,
    InitFailed,
}

impl SdpStatus {
    pub fn label(self) -> &'static str {
        match self {
            SdpStatus::Optimal => "optimal",
            SdpStatus::IterationLimit => "iteration-limit",
            SdpStatus::Unbounded => "unbounded",
            SdpStatus::InitFailed => "init-failed",
        }
    }
}

#[derive(Debug, Clone)]
pub struct SdpResult {
    pub x: SymMatrix,
    pub status: SdpStatus,
    pub objective: f64,
    pub trace: Vec<SdpTraceRow>,
    /// `(m_ξ, m_η)` of the decomposition used.
    pub dims: (usize, usize),
}

impl SdpResult {
    pub fn init_iterations(&self) -> usize {
        self.trace.iter().filter(|r| r.phase == Phase::Ini).count()
    }

    /// Number of minimization iterations (excluding the start row).
    pub fn iterations(&self) -> usize {
        self.trace
            .iter()
            .filter(|r| r.phase == Phase::Cnt && r.iter > 0)
            .count()
    }
}
