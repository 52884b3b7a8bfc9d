//! C ABI for the `fipm` solvers.
//!
//! Problems and results are opaque handles created by `*_new`, `*_fixture`,
//! `*_from_dats` or `*_solve` and released with the matching `*_free`.
//! Every function that can fail returns a [`FipmStatus`]; the message of the
//! last failure on the calling thread is available from
//! [`fipm_last_error_message`].
//!
//! Pointer arguments must be null or valid for the documented number of
//! elements. Matrices are passed column-major. Handles must not be shared
//! between threads while a call is using them.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use fipm::io::fixtures::{self, FixtureProblem};
use fipm::io::parse_sdpa_sparse;
use fipm::lp::{lp_solve, LpPhase};
use fipm::sdp::{sdp_solve, Phase};
use fipm::{
    DenseMatrix, Error, LpConfig, LpProblem, LpResult, LpStatus, SdpConfig, SdpProblem, SdpResult,
    SdpStatus, Search, SymMatrix,
};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FipmStatus {
    Ok = 0,
    NullPointer = 1,
    Dimension = 2,
    NotPositiveDefinite = 3,
    RankDeficient = 4,
    Config = 5,
    Parse = 6,
    InfeasibleStart = 7,
    Unbounded = 8,
    Aborted = 9,
    Io = 10,
    OutOfRange = 11,
    Other = 12,
    Panic = 13,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FipmSearch {
    Std = 0,
    Sym = 1,
    Ace = 2,
    Gce = 3,
}

/// Outcome of a successful solve.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FipmSolveStatus {
    Optimal = 0,
    IterationLimit = 1,
    Unbounded = 2,
    InitFailed = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FipmPhase {
    /// Initial feasibility phase.
    Ini = 0,
    /// Minimization phase.
    Cnt = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FipmSdpConfig {
    pub search: FipmSearch,
    /// Fraction of the maximal steplength taken.
    pub tau: f64,
    pub tol: f64,
    /// Centering blend, 0 centers fully.
    pub mu: f64,
    pub maxit: usize,
    /// Normalization `tr(C dX) = -gamma` of the search direction.
    pub gamma: f64,
    pub centering: bool,
    pub init_mu: f64,
    pub init_gamma: f64,
    pub decomp_tol: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FipmLpConfig {
    pub tau: f64,
    pub tol: f64,
    pub maxit: usize,
    pub gamma: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FipmSdpTraceRow {
    pub phase: FipmPhase,
    pub iter: usize,
    pub alpha: f64,
    pub trcdx: f64,
    pub trcx: f64,
    pub residual: f64,
    pub inv_norm: f64,
    pub min_eig: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FipmLpTraceRow {
    pub phase: FipmPhase,
    pub iter: usize,
    pub alpha: f64,
    pub ctdx: f64,
    pub ctx: f64,
    pub residual: f64,
    pub inv_norm: f64,
    pub min_x: f64,
}

pub struct FipmSdpProblem(SdpProblem);
pub struct FipmSdpResult(SdpResult);
pub struct FipmLpProblem(LpProblem);
pub struct FipmLpResult(LpResult);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn code_of(e: &Error) -> FipmStatus {
    match e {
        Error::Dimension(_) => FipmStatus::Dimension,
        Error::NotPositiveDefinite { .. } => FipmStatus::NotPositiveDefinite,
        Error::RankDeficient { .. } => FipmStatus::RankDeficient,
        Error::Config(_) => FipmStatus::Config,
        Error::Parse { .. } | Error::Index { .. } => FipmStatus::Parse,
        Error::InfeasibleStart { .. } => FipmStatus::InfeasibleStart,
        Error::Unbounded => FipmStatus::Unbounded,
        Error::Aborted { .. } => FipmStatus::Aborted,
        Error::Io(_) => FipmStatus::Io,
        _ => FipmStatus::Other,
    }
}

struct Failure(FipmStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(code_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(FipmStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, recording any error or panic as the thread's last error.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> FipmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error("");
            FipmStatus::Ok
        }
        Ok(Err(Failure(code, msg))) => {
            set_last_error(&msg);
            code
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(&format!("panic: {msg}"));
            FipmStatus::Panic
        }
    }
}

unsafe fn slice_arg<'a>(p: *const f64, len: usize, what: &str) -> Result<&'a [f64], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(slice::from_raw_parts(p, len))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(FipmStatus::Parse, format!("{what} is not valid UTF-8")))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output handle"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

fn sym_from(n: usize, data: &[f64]) -> Result<SymMatrix, Failure> {
    Ok(SymMatrix::new(DenseMatrix::from_column_slice(n, n, data))?)
}

fn search_from(s: FipmSearch) -> Search {
    match s {
        FipmSearch::Std => Search::Std,
        FipmSearch::Sym => Search::Sym,
        FipmSearch::Ace => Search::Ace,
        FipmSearch::Gce => Search::Gce,
    }
}

fn search_to(s: Search) -> FipmSearch {
    match s {
        Search::Std => FipmSearch::Std,
        Search::Sym => FipmSearch::Sym,
        Search::Ace => FipmSearch::Ace,
        Search::Gce => FipmSearch::Gce,
    }
}

impl From<SdpConfig> for FipmSdpConfig {
    fn from(c: SdpConfig) -> Self {
        Self {
            search: search_to(c.search),
            tau: c.tau,
            tol: c.tol,
            mu: c.mu,
            maxit: c.maxit,
            gamma: c.gamma,
            centering: c.centering,
            init_mu: c.init_mu,
            init_gamma: c.init_gamma,
            decomp_tol: c.decomp_tol,
        }
    }
}

impl From<FipmSdpConfig> for SdpConfig {
    fn from(c: FipmSdpConfig) -> Self {
        SdpConfig {
            search: search_from(c.search),
            tau: c.tau,
            tol: c.tol,
            mu: c.mu,
            maxit: c.maxit,
            gamma: c.gamma,
            centering: c.centering,
            init_mu: c.init_mu,
            init_gamma: c.init_gamma,
            decomp_tol: c.decomp_tol,
        }
    }
}

/// Version of the library as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn fipm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, empty after a successful one.
/// The pointer stays valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn fipm_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

#[no_mangle]
pub extern "C" fn fipm_sdp_config_default(search: FipmSearch) -> FipmSdpConfig {
    SdpConfig::for_search(search_from(search)).into()
}

#[no_mangle]
pub extern "C" fn fipm_lp_config_default() -> FipmLpConfig {
    let c = LpConfig::default();
    FipmLpConfig {
        tau: c.tau,
        tol: c.tol,
        maxit: c.maxit,
        gamma: c.gamma,
    }
}

/// Builds `min tr(C X)` s.t. `tr(A_i X) = b_i`, `X ⪰ 0`.
///
/// `c` holds `n*n` values, `a` holds the `m` constraint matrices one after
/// another (`m*n*n` values) and `b` holds `m` values.
#[no_mangle]
pub unsafe extern "C" fn fipm_sdp_problem_new(
    n: usize,
    m: usize,
    c: *const f64,
    a: *const f64,
    b: *const f64,
    out: *mut *mut FipmSdpProblem,
) -> FipmStatus {
    guard(|| {
        let nn = n
            .checked_mul(n)
            .ok_or_else(|| Failure(FipmStatus::Dimension, "n is too large".into()))?;
        let total = nn
            .checked_mul(m)
            .ok_or_else(|| Failure(FipmStatus::Dimension, "m*n*n overflows".into()))?;
        let c = slice_arg(c, nn, "c")?;
        let a = slice_arg(a, total, "a")?;
        let b = slice_arg(b, m, "b")?;
        let constraints = if nn == 0 {
            vec![SymMatrix::zeros(0); m]
        } else {
            a.chunks(nn)
                .map(|chunk| sym_from(n, chunk))
                .collect::<Result<_, _>>()?
        };
        let problem = SdpProblem::new(sym_from(n, c)?, constraints, b.to_vec())?;
        put(out, FipmSdpProblem(problem))
    })
}

/// Parses a problem in SDPA sparse format from a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn fipm_sdp_problem_from_dats(
    text: *const c_char,
    out: *mut *mut FipmSdpProblem,
) -> FipmStatus {
    guard(|| {
        let parsed = parse_sdpa_sparse(str_arg(text, "text")?)?;
        put(out, FipmSdpProblem(parsed.problem))
    })
}

/// Loads a built-in SDP by name, for example `"sos_example"`.
#[no_mangle]
pub unsafe extern "C" fn fipm_sdp_problem_fixture(
    name: *const c_char,
    out: *mut *mut FipmSdpProblem,
) -> FipmStatus {
    guard(|| {
        let name = str_arg(name, "name")?;
        match fixtures::fixture(name).map(|f| f.problem) {
            Some(FixtureProblem::Sdp(p)) => put(out, FipmSdpProblem(p)),
            Some(FixtureProblem::Lp(_)) => Err(Failure(
                FipmStatus::Config,
                format!("fixture '{name}' is a linear program"),
            )),
            None => Err(Failure(
                FipmStatus::Config,
                format!("unknown fixture '{name}'"),
            )),
        }
    })
}

/// Order of the matrices, 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn fipm_sdp_problem_n(problem: *const FipmSdpProblem) -> usize {
    problem.as_ref().map_or(0, |p| p.0.n())
}

/// Number of constraints, 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn fipm_sdp_problem_m(problem: *const FipmSdpProblem) -> usize {
    problem.as_ref().map_or(0, |p| p.0.m())
}

#[no_mangle]
pub unsafe extern "C" fn fipm_sdp_problem_free(problem: *mut FipmSdpProblem) {
    if !problem.is_null() {
        drop(Box::from_raw(problem));
    }
}

/// Solves `problem`. `config` may be null for the STD defaults; `x0` may be
/// null to run the initial feasibility phase, otherwise it holds `n*n` values.
#[no_mangle]
pub unsafe extern "C" fn fipm_sdp_solve(
    problem: *const FipmSdpProblem,
    config: *const FipmSdpConfig,
    x0: *const f64,
    out: *mut *mut FipmSdpResult,
) -> FipmStatus {
    guard(|| {
        let p = &problem.as_ref().ok_or_else(|| null("problem"))?.0;
        let config: SdpConfig = match config.as_ref() {
            Some(c) => (*c).into(),
            None => SdpConfig::default(),
        };
        let start = if x0.is_null() {
            None
        } else {
            let n = p.n();
            Some(sym_from(n, slice::from_raw_parts(x0, n * n))?)
        };
        let result = sdp_solve(p, &config, start.as_ref())?;
        put(out, FipmSdpResult(result))
    })
}

fn sdp_status(s: SdpStatus) -> FipmSolveStatus {
    match s {
        SdpStatus::Optimal => FipmSolveStatus::Optimal,
        SdpStatus::IterationLimit => FipmSolveStatus::IterationLimit,
        SdpStatus::Unbounded => FipmSolveStatus::Unbounded,
        SdpStatus::InitFailed => FipmSolveStatus::InitFailed,
    }
}

/// Solve outcome; a null handle reads as `INIT_FAILED`.
#[no_mangle]
pub unsafe extern "C" fn fipm_sdp_result_status(result: *const FipmSdpResult) -> FipmSolveStatus {
    result
        .as_ref()
        .map_or(FipmSolveStatus::InitFailed, |r| sdp_status(r.0.status))
}

/// Final objective value, NaN for a null handle.
#[no_mangle]
pub unsafe extern "C" fn fipm_sdp_result_objective(result: *const FipmSdpResult) -> f64 {
    result.as_ref().map_or(f64::NAN, |r| r.0.objective)
}

#[no_mangle]
pub unsafe extern "C" fn fipm_sdp_result_iterations(result: *const FipmSdpResult) -> usize {
    result.as_ref().map_or(0, |r| r.0.iterations())
}

#[no_mangle]
pub unsafe extern "C" fn fipm_sdp_result_init_iterations(result: *const FipmSdpResult) -> usize {
    result.as_ref().map_or(0, |r| r.0.init_iterations())
}

#[no_mangle]
pub unsafe extern "C" fn fipm_sdp_result_n(result: *const FipmSdpResult) -> usize {
    result.as_ref().map_or(0, |r| r.0.x.n())
}

/// Copies the final iterate into `buf`, which must hold at least `n*n` values.
#[no_mangle]
pub unsafe extern "C" fn fipm_sdp_result_copy_x(
    result: *const FipmSdpResult,
    buf: *mut f64,
    len: usize,
) -> FipmStatus {
    guard(|| {
        let r = &result.as_ref().ok_or_else(|| null("result"))?.0;
        copy_out(r.x.as_matrix().as_slice(), buf, len)
    })
}

unsafe fn copy_out(src: &[f64], buf: *mut f64, len: usize) -> Result<(), Failure> {
    if len < src.len() {
        return Err(Failure(
            FipmStatus::OutOfRange,
            format!("buffer holds {len} values, {} needed", src.len()),
        ));
    }
    if src.is_empty() {
        return Ok(());
    }
    if buf.is_null() {
        return Err(null("buf"));
    }
    ptr::copy_nonoverlapping(src.as_ptr(), buf, src.len());
    Ok(())
}

/// Number of rows in the iteration trace.
#[no_mangle]
pub unsafe extern "C" fn fipm_sdp_result_trace_len(result: *const FipmSdpResult) -> usize {
    result.as_ref().map_or(0, |r| r.0.trace.len())
}

#[no_mangle]
pub unsafe extern "C" fn fipm_sdp_result_trace_row(
    result: *const FipmSdpResult,
    index: usize,
    row: *mut FipmSdpTraceRow,
) -> FipmStatus {
    guard(|| {
        let r = &result.as_ref().ok_or_else(|| null("result"))?.0;
        let row = row.as_mut().ok_or_else(|| null("row"))?;
        let t = r.trace.get(index).ok_or_else(|| {
            Failure(
                FipmStatus::OutOfRange,
                format!("trace has {} rows, index {index}", r.trace.len()),
            )
        })?;
        *row = FipmSdpTraceRow {
            phase: match t.phase {
                Phase::Ini => FipmPhase::Ini,
                Phase::Cnt => FipmPhase::Cnt,
            },
            iter: t.iter,
            alpha: t.alpha,
            trcdx: t.trcdx,
            trcx: t.trcx,
            residual: t.residual,
            inv_norm: t.inv_norm,
            min_eig: t.min_eig,
        };
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn fipm_sdp_result_free(result: *mut FipmSdpResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}

/// Builds `min cᵀx` s.t. `A x = b`, `x ≥ 0` with `A` given as `m*n` values.
#[no_mangle]
pub unsafe extern "C" fn fipm_lp_problem_new(
    m: usize,
    n: usize,
    a: *const f64,
    b: *const f64,
    c: *const f64,
    out: *mut *mut FipmLpProblem,
) -> FipmStatus {
    guard(|| {
        let size = m
            .checked_mul(n)
            .ok_or_else(|| Failure(FipmStatus::Dimension, "m*n overflows".into()))?;
        let a = DenseMatrix::from_column_slice(m, n, slice_arg(a, size, "a")?);
        let b = slice_arg(b, m, "b")?.to_vec();
        let c = slice_arg(c, n, "c")?.to_vec();
        put(out, FipmLpProblem(LpProblem::new(a, b, c)?))
    })
}

/// Loads a built-in LP by name, for example `"lp_example"`.
#[no_mangle]
pub unsafe extern "C" fn fipm_lp_problem_fixture(
    name: *const c_char,
    out: *mut *mut FipmLpProblem,
) -> FipmStatus {
    guard(|| {
        let name = str_arg(name, "name")?;
        match fixtures::fixture(name).map(|f| f.problem) {
            Some(FixtureProblem::Lp(p)) => put(out, FipmLpProblem(p)),
            Some(FixtureProblem::Sdp(_)) => Err(Failure(
                FipmStatus::Config,
                format!("fixture '{name}' is a semidefinite program"),
            )),
            None => Err(Failure(
                FipmStatus::Config,
                format!("unknown fixture '{name}'"),
            )),
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn fipm_lp_problem_m(problem: *const FipmLpProblem) -> usize {
    problem.as_ref().map_or(0, |p| p.0.m())
}

#[no_mangle]
pub unsafe extern "C" fn fipm_lp_problem_n(problem: *const FipmLpProblem) -> usize {
    problem.as_ref().map_or(0, |p| p.0.n())
}

#[no_mangle]
pub unsafe extern "C" fn fipm_lp_problem_free(problem: *mut FipmLpProblem) {
    if !problem.is_null() {
        drop(Box::from_raw(problem));
    }
}

/// Solves `problem`. `config` may be null for the defaults; `x0` may be null
/// to run the initial feasibility phase, otherwise it holds `n` values.
#[no_mangle]
pub unsafe extern "C" fn fipm_lp_solve(
    problem: *const FipmLpProblem,
    config: *const FipmLpConfig,
    x0: *const f64,
    out: *mut *mut FipmLpResult,
) -> FipmStatus {
    guard(|| {
        let p = &problem.as_ref().ok_or_else(|| null("problem"))?.0;
        let mut cfg = LpConfig::default();
        if let Some(c) = config.as_ref() {
            cfg.tau = c.tau;
            cfg.tol = c.tol;
            cfg.maxit = c.maxit;
            cfg.gamma = c.gamma;
        }
        let start = (!x0.is_null()).then(|| slice::from_raw_parts(x0, p.n()));
        let result = lp_solve(p, &cfg, start)?;
        put(out, FipmLpResult(result))
    })
}

/// Solve outcome; a null handle or an infeasible start reads as `INIT_FAILED`.
#[no_mangle]
pub unsafe extern "C" fn fipm_lp_result_status(result: *const FipmLpResult) -> FipmSolveStatus {
    result
        .as_ref()
        .map_or(FipmSolveStatus::InitFailed, |r| match r.0.status {
            LpStatus::Optimal => FipmSolveStatus::Optimal,
            LpStatus::IterationLimit => FipmSolveStatus::IterationLimit,
            LpStatus::InfeasibleStart => FipmSolveStatus::InitFailed,
        })
}

#[no_mangle]
pub unsafe extern "C" fn fipm_lp_result_objective(result: *const FipmLpResult) -> f64 {
    result.as_ref().map_or(f64::NAN, |r| r.0.objective)
}

#[no_mangle]
pub unsafe extern "C" fn fipm_lp_result_iterations(result: *const FipmLpResult) -> usize {
    result.as_ref().map_or(0, |r| r.0.iterations())
}

#[no_mangle]
pub unsafe extern "C" fn fipm_lp_result_init_iterations(result: *const FipmLpResult) -> usize {
    result.as_ref().map_or(0, |r| r.0.init_iterations())
}

#[no_mangle]
pub unsafe extern "C" fn fipm_lp_result_n(result: *const FipmLpResult) -> usize {
    result.as_ref().map_or(0, |r| r.0.x.len())
}

/// Copies the final iterate into `buf`, which must hold at least `n` values.
#[no_mangle]
pub unsafe extern "C" fn fipm_lp_result_copy_x(
    result: *const FipmLpResult,
    buf: *mut f64,
    len: usize,
) -> FipmStatus {
    guard(|| {
        let r = &result.as_ref().ok_or_else(|| null("result"))?.0;
        copy_out(&r.x, buf, len)
    })
}

#[no_mangle]
pub unsafe extern "C" fn fipm_lp_result_trace_len(result: *const FipmLpResult) -> usize {
    result.as_ref().map_or(0, |r| r.0.trace.len())
}

#[no_mangle]
pub unsafe extern "C" fn fipm_lp_result_trace_row(
    result: *const FipmLpResult,
    index: usize,
    row: *mut FipmLpTraceRow,
) -> FipmStatus {
    guard(|| {
        let r = &result.as_ref().ok_or_else(|| null("result"))?.0;
        let row = row.as_mut().ok_or_else(|| null("row"))?;
        let t = r.trace.get(index).ok_or_else(|| {
            Failure(
                FipmStatus::OutOfRange,
                format!("trace has {} rows, index {index}", r.trace.len()),
            )
        })?;
        *row = FipmLpTraceRow {
            phase: match t.phase {
                LpPhase::Ini => FipmPhase::Ini,
                LpPhase::Cnt => FipmPhase::Cnt,
            },
            iter: t.iter,
            alpha: t.alpha,
            ctdx: t.ctdx,
            ctx: t.ctx,
            residual: t.residual,
            inv_norm: t.inv_norm,
            min_x: t.min_x,
        };
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn fipm_lp_result_free(result: *mut FipmLpResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}
