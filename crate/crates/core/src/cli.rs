//! Command-line front end.
//!
//! Exit codes: 0 optimal, 1 usage or input error, 2 iteration limit,
//! 3 infeasible start, unbounded problem or aborted solve.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::decomp::decompose;
use crate::error::{Error, Result};
use crate::io::fixtures::{self, FixtureProblem, StartBuilder};
use crate::io::sdpa::{parse_sdpa_sparse, write_sdpa_sparse};
use crate::io::trace::{emit_trace_csv, Projection};
use crate::linalg::SymMatrix;
use crate::lp::{lp_solve, LpConfig, LpPhase, LpProblem, LpResult, LpSearch, LpStatus};
use crate::sdp::{
    sdp_solve, Phase, SdpConfig, SdpProblem, SdpResult, SdpStatus, SdpTraceRow, Search,
};

pub const EXIT_OPTIMAL: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_ITERATION_LIMIT: i32 = 2;
pub const EXIT_FAILED: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "fipm",
    version,
    about = "Feasible-interior-point solver for LP and SDP"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve a linear program.
    Lp(RunArgs),
    /// Solve a semidefinite program.
    Sdp(RunArgs),
}

#[derive(Debug, Args, Clone, Default)]
pub struct RunArgs {
    /// Built-in problem (lp_example, sos_example, combinatorial_example, pencil_example).
    #[arg(
        long,
        value_name = "NAME",
        conflicts_with = "file",
        required_unless_present = "file"
    )]
    pub fixture: Option<String>,
    /// Problem in SDPA sparse format.
    #[arg(long, value_name = "PATH")]
    pub file: Option<PathBuf>,
    /// Search strategy for SDPs: std, sym, ace or gce.
    #[arg(long, value_name = "S")]
    pub search: Option<String>,
    #[arg(long, value_name = "R")]
    pub tau: Option<f64>,
    #[arg(long, value_name = "R")]
    pub tol: Option<f64>,
    #[arg(long, value_name = "R")]
    pub mu: Option<f64>,
    #[arg(long, value_name = "N")]
    pub maxit: Option<usize>,
    #[arg(long, value_name = "R")]
    pub gamma: Option<f64>,
    /// Starting point parameters for fixtures with a start family.
    #[arg(long, value_name = "XI,ETA", allow_hyphen_values = true)]
    pub start: Option<String>,
    /// Write the path trace of an SDP solve as CSV.
    #[arg(long, value_name = "PATH")]
    pub trace_csv: Option<PathBuf>,
    /// Disable centering in both phases.
    #[arg(long)]
    pub no_centering: bool,
    /// Write the problem in SDPA sparse format.
    #[arg(long, value_name = "PATH")]
    pub export_dats: Option<PathBuf>,
    /// Use the plain projected-gradient LP direction (illustrates failure modes).
    #[arg(long)]
    pub unsafe_demo: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Lp,
    Sdp,
}

#[derive(Debug, Clone)]
pub enum Source {
    Fixture(String),
    File(PathBuf),
}

/// A validated run request.
#[derive(Debug, Clone)]
pub struct RunSpec {
    pub mode: Mode,
    pub source: Source,
    pub search: Search,
    pub tau: Option<f64>,
    pub tol: Option<f64>,
    pub mu: Option<f64>,
    pub maxit: Option<usize>,
    pub gamma: Option<f64>,
    pub start: Option<(f64, f64)>,
    pub trace_out: Option<PathBuf>,
    pub centering: bool,
    pub export_dats: Option<PathBuf>,
    pub unsafe_demo: bool,
}

impl RunSpec {
    pub fn from_args(mode: Mode, args: RunArgs) -> Result<Self> {
        let source = match (args.fixture, args.file) {
            (Some(f), None) => Source::Fixture(f),
            (None, Some(p)) => Source::File(p),
            _ => {
                return Err(Error::Config(
                    "give exactly one of --fixture and --file".into(),
                ))
            }
        };
        let search = match &args.search {
            Some(s) => s.parse()?,
            None => Search::Std,
        };
        let start = args.start.as_deref().map(parse_start).transpose()?;
        if mode == Mode::Lp {
            let unsupported = [
                ("--search", args.search.is_some()),
                ("--mu", args.mu.is_some()),
                ("--start", args.start.is_some()),
                ("--trace-csv", args.trace_csv.is_some()),
                ("--no-centering", args.no_centering),
            ];
            if let Some((flag, _)) = unsupported.iter().find(|(_, set)| *set) {
                return Err(Error::Config(format!("{flag} is only available for sdp")));
            }
        } else if args.unsafe_demo {
            return Err(Error::Config(
                "--unsafe-demo is only available for lp".into(),
            ));
        }
        Ok(Self {
            mode,
            source,
            search,
            tau: args.tau,
            tol: args.tol,
            mu: args.mu,
            maxit: args.maxit,
            gamma: args.gamma,
            start,
            trace_out: args.trace_csv,
            centering: !args.no_centering,
            export_dats: args.export_dats,
            unsafe_demo: args.unsafe_demo,
        })
    }

    pub fn sdp_config(&self) -> SdpConfig {
        let mut c = SdpConfig::for_search(self.search);
        if let Some(v) = self.tau {
            c.tau = v;
        }
        if let Some(v) = self.tol {
            c.tol = v;
        }
        if let Some(v) = self.mu {
            c.mu = v;
        }
        if let Some(v) = self.maxit {
            c.maxit = v;
        }
        if let Some(v) = self.gamma {
            c.gamma = v;
        }
        c.centering = self.centering;
        c
    }

    pub fn lp_config(&self) -> LpConfig {
        let mut c = LpConfig::default();
        if let Some(v) = self.tau {
            c.tau = v;
        }
        if let Some(v) = self.tol {
            c.tol = v;
        }
        if let Some(v) = self.maxit {
            c.maxit = v;
        }
        if let Some(v) = self.gamma {
            c.gamma = v;
        }
        if self.unsafe_demo {
            c.search = LpSearch::UnsafeDemo;
        }
        c
    }
}

fn parse_start(s: &str) -> Result<(f64, f64)> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let bad = || Error::Config(format!("--start expects XI,ETA, got '{s}'"));
    if parts.len() != 2 {
        return Err(bad());
    }
    let xi = parts[0].parse().map_err(|_| bad())?;
    let eta = parts[1].parse().map_err(|_| bad())?;
    Ok((xi, eta))
}

/// Parses `args` (including the program name) and runs; returns the exit code.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_OPTIMAL
            };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    let (mode, args) = match cli.command {
        Command::Lp(a) => (Mode::Lp, a),
        Command::Sdp(a) => (Mode::Sdp, a),
    };
    match RunSpec::from_args(mode, args) {
        Ok(spec) => run(&spec, out, err),
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

/// Runs a validated request, writing the log to `out` and diagnostics to `err`.
pub fn run(spec: &RunSpec, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let outcome = match spec.mode {
        Mode::Lp => run_lp(spec, out, err),
        Mode::Sdp => run_sdp(spec, out, err),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::Unbounded | Error::InfeasibleStart { .. } | Error::Aborted { .. } => {
                    EXIT_FAILED
                }
                _ => EXIT_USAGE,
            }
        }
    }
}

struct LoadedSdp {
    problem: SdpProblem,
    start_builder: Option<StartBuilder>,
}

fn load_sdp(spec: &RunSpec, err: &mut dyn Write) -> Result<LoadedSdp> {
    match &spec.source {
        Source::Fixture(name) => match fixture_problem(name)? {
            (FixtureProblem::Sdp(problem), builder) => Ok(LoadedSdp {
                problem,
                start_builder: builder,
            }),
            (FixtureProblem::Lp(_), _) => Err(Error::Config(format!(
                "fixture '{name}' is a linear program; use the lp command"
            ))),
        },
        Source::File(path) => Ok(LoadedSdp {
            problem: read_file(path, err)?,
            start_builder: None,
        }),
    }
}

fn fixture_problem(name: &str) -> Result<(FixtureProblem, Option<StartBuilder>)> {
    let f = fixtures::fixture(name).ok_or_else(|| {
        Error::Config(format!(
            "unknown fixture '{name}' (available: {})",
            fixtures::fixture_names().join(", ")
        ))
    })?;
    Ok((f.problem, f.start_builder))
}

fn read_file(path: &Path, err: &mut dyn Write) -> Result<SdpProblem> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    let parsed = parse_sdpa_sparse(&text)?;
    for w in &parsed.warnings {
        let _ = writeln!(err, "warning: {w}");
    }
    Ok(parsed.problem)
}

fn export(path: &Path, problem: &SdpProblem) -> Result<()> {
    fs::write(path, write_sdpa_sparse(problem))?;
    Ok(())
}

fn run_sdp(spec: &RunSpec, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let loaded = load_sdp(spec, err)?;
    let problem = &loaded.problem;
    let config = spec.sdp_config();
    config.validate()?;
    if let Some(path) = &spec.export_dats {
        export(path, problem)?;
    }
    let x0 = match (spec.start, loaded.start_builder) {
        (Some((a, b)), Some(build)) => Some(build(a, b)),
        (Some(_), None) => {
            return Err(Error::Config(
                "--start needs a fixture with a starting family".into(),
            ))
        }
        (None, _) => None,
    };
    let decomp = decompose(problem, config.decomp_tol)?;

    let mut log = String::new();
    let _ = writeln!(log);
    let _ = writeln!(log, "FIPM SDP  Search {}", config.search);
    let _ = writeln!(log, "{}", "-".repeat(70));
    let _ = writeln!(
        log,
        "Semidefinite Program: n={}, m={}, m_dof={}, m_min={}",
        problem.n(),
        problem.m(),
        decomp.m_xi(),
        decomp.m_eta()
    );
    let _ = writeln!(
        log,
        "      1-tau={}, tol={}, mu={:.3}, maxit={}",
        cfmt_e(1.0 - config.tau, 2),
        cfmt_e(config.tol, 2),
        config.mu,
        config.maxit
    );
    out.write_all(log.as_bytes())?;

    let result = match sdp_solve(problem, &config, x0.as_ref()) {
        Ok(r) => r,
        Err(Error::Aborted {
            iteration,
            cause,
            trace,
        }) => {
            out.write_all(sdp_rows(&trace).as_bytes())?;
            return Err(Error::Aborted {
                iteration,
                cause,
                trace: Vec::new(),
            });
        }
        Err(e) => return Err(e),
    };
    out.write_all(sdp_rows(&result.trace).as_bytes())?;
    let _ = writeln!(out, "{:>53}", cfmt_e(result.objective, 15));
    let _ = writeln!(out, "status: {}", result.status.label());

    if let Some(path) = &spec.trace_out {
        let projection = projection_for(&result, problem, loaded.start_builder, &decomp);
        emit_trace_csv(&result, &projection, path)?;
    }
    Ok(match result.status {
        SdpStatus::Optimal => EXIT_OPTIMAL,
        SdpStatus::IterationLimit => EXIT_ITERATION_LIMIT,
        SdpStatus::Unbounded | SdpStatus::InitFailed => EXIT_FAILED,
    })
}

fn projection_for(
    result: &SdpResult,
    problem: &SdpProblem,
    builder: Option<StartBuilder>,
    decomp: &crate::decomp::Decomposition,
) -> Projection {
    let objective = problem.objective().clone();
    match builder {
        Some(build) => {
            let x_ref = build(0.0, 0.0);
            let u = &build(1.0, 0.0) - &x_ref;
            Projection {
                x_ref,
                u_xi: Some(u),
                objective,
            }
        }
        None => Projection {
            x_ref: result
                .trace
                .first()
                .map(|r| r.x.clone())
                .unwrap_or_else(|| result.x.clone()),
            u_xi: (decomp.m_xi() > 0).then(|| decomp.xi_matrix(0)),
            objective,
        },
    }
}

fn sdp_rows(trace: &[SdpTraceRow]) -> String {
    let mut s = String::new();
    let mut last = None;
    for row in trace {
        if last != Some(row.phase) {
            let third = if row.phase == Phase::Ini {
                "min(eig(X))"
            } else {
                "tr(C*dX)   "
            };
            let _ = writeln!(
                s,
                "{}   alpha      {third}   tr(C*X)        ||A*vec(X)-b||  ||X^-1||",
                row.phase.label()
            );
            last = Some(row.phase);
        }
        let third = if row.phase == Phase::Ini {
            row.min_eig
        } else {
            row.trcdx
        };
        let _ = writeln!(
            s,
            "{:3}   {:>8}   {:>10}    {:>16}     {:>8}   {:>7}",
            row.iter,
            cfmt_e(row.alpha, 2),
            cfmt_e(third, 3),
            cfmt_e(row.trcx, 9),
            cfmt_e(row.residual, 2),
            cfmt_e(row.inv_norm, 1)
        );
    }
    s
}

fn load_lp(spec: &RunSpec, err: &mut dyn Write) -> Result<LpProblem> {
    match &spec.source {
        Source::Fixture(name) => match fixture_problem(name)? {
            (FixtureProblem::Lp(p), _) => Ok(p),
            (FixtureProblem::Sdp(_), _) => Err(Error::Config(format!(
                "fixture '{name}' is a semidefinite program; use the sdp command"
            ))),
        },
        Source::File(path) => lp_from_diagonal_sdp(&read_file(path, err)?),
    }
}

/// An SDP whose matrices are all diagonal is the LP on their diagonals.
pub fn lp_from_diagonal_sdp(p: &SdpProblem) -> Result<LpProblem> {
    let n = p.n();
    let is_diag = |a: &SymMatrix| (0..n).all(|j| (0..n).all(|i| i == j || a.get(i, j) == 0.0));
    if !is_diag(p.objective()) || !p.constraints().iter().all(is_diag) {
        return Err(Error::Config(
            "lp input must have diagonal matrices only".into(),
        ));
    }
    let mut a = crate::linalg::DenseMatrix::zeros(p.m(), n);
    for (i, ai) in p.constraints().iter().enumerate() {
        for j in 0..n {
            a[(i, j)] = ai.get(j, j);
        }
    }
    let c = (0..n).map(|j| p.objective().get(j, j)).collect();
    LpProblem::new(a, p.b().to_vec(), c)
}

/// The LP as an SDP with diagonal matrices.
pub fn diagonal_sdp_from_lp(p: &LpProblem) -> SdpProblem {
    let constraints = (0..p.m())
        .map(|i| SymMatrix::from_diagonal(p.a().row(i).transpose().as_slice()))
        .collect();
    SdpProblem::new(SymMatrix::from_diagonal(p.c()), constraints, p.b().to_vec())
        .expect("dimensions agree by construction")
}

fn run_lp(spec: &RunSpec, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let problem = load_lp(spec, err)?;
    let config = spec.lp_config();
    config.validate()?;
    if let Some(path) = &spec.export_dats {
        export(path, &diagonal_sdp_from_lp(&problem))?;
    }
    let search = if config.search == LpSearch::UnsafeDemo {
        "DEMO"
    } else {
        "STD"
    };
    let mut log = String::new();
    let _ = writeln!(log);
    let _ = writeln!(log, "FIPM LP  Search {search}");
    let _ = writeln!(log, "{}", "-".repeat(70));
    let _ = writeln!(log, "Linear Program: n={}, m={}", problem.n(), problem.m());
    let _ = writeln!(
        log,
        "      1-tau={}, tol={}, maxit={}",
        cfmt_e(1.0 - config.tau, 2),
        cfmt_e(config.tol, 2),
        config.maxit
    );
    out.write_all(log.as_bytes())?;
    let result = lp_solve(&problem, &config, None)?;
    out.write_all(lp_rows(&result).as_bytes())?;
    let _ = writeln!(out, "{:>53}", cfmt_e(result.objective, 15));
    let _ = writeln!(out, "status: {}", result.status.label());
    Ok(match result.status {
        LpStatus::Optimal => EXIT_OPTIMAL,
        LpStatus::IterationLimit => EXIT_ITERATION_LIMIT,
        LpStatus::InfeasibleStart => EXIT_FAILED,
    })
}

fn lp_rows(result: &LpResult) -> String {
    let mut s = String::new();
    let mut last = None;
    for row in &result.trace {
        if last != Some(row.phase) {
            let (label, third) = match row.phase {
                LpPhase::Ini => ("ini", "min(x)  "),
                LpPhase::Cnt => ("cnt", "tr(c*dx)"),
            };
            let _ = writeln!(
                s,
                "{label}   alpha      {third}      tr(c*x)             ||A*x-b|| ||x.^-1||"
            );
            last = Some(row.phase);
        }
        let third = if row.phase == LpPhase::Ini {
            row.min_x
        } else {
            row.ctdx
        };
        let _ = writeln!(
            s,
            "{:3}   {:>8}   {:>10}    {:>16}     {:>8}   {:>7}",
            row.iter,
            cfmt_e(row.alpha, 2),
            cfmt_e(third, 3),
            cfmt_e(row.ctx, 9),
            cfmt_e(row.residual, 2),
            cfmt_e(row.inv_norm, 1)
        );
    }
    s
}

/// `printf("%.*e")`: mantissa with `prec` digits and an exponent of at least two digits.
pub fn cfmt_e(v: f64, prec: usize) -> String {
    if v.is_nan() {
        return "NaN".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "Inf".into() } else { "-Inf".into() };
    }
    let s = format!("{v:.prec$e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exp.abs())
}
