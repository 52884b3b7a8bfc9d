/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#ifndef FIPM_H
#define FIPM_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum FipmSearch {
  FIPM_SEARCH_STD = 0,
  FIPM_SEARCH_SYM = 1,
  FIPM_SEARCH_ACE = 2,
  FIPM_SEARCH_GCE = 3,
} FipmSearch;

typedef enum FipmStatus {
  FIPM_STATUS_OK = 0,
  FIPM_STATUS_NULL_POINTER = 1,
  FIPM_STATUS_DIMENSION = 2,
  FIPM_STATUS_NOT_POSITIVE_DEFINITE = 3,
  FIPM_STATUS_RANK_DEFICIENT = 4,
  FIPM_STATUS_CONFIG = 5,
  FIPM_STATUS_PARSE = 6,
  FIPM_STATUS_INFEASIBLE_START = 7,
  FIPM_STATUS_UNBOUNDED = 8,
  FIPM_STATUS_ABORTED = 9,
  FIPM_STATUS_IO = 10,
  FIPM_STATUS_OUT_OF_RANGE = 11,
  FIPM_STATUS_OTHER = 12,
  FIPM_STATUS_PANIC = 13,
} FipmStatus;

// Outcome of a successful solve.
typedef enum FipmSolveStatus {
  FIPM_SOLVE_STATUS_OPTIMAL = 0,
  FIPM_SOLVE_STATUS_ITERATION_LIMIT = 1,
  FIPM_SOLVE_STATUS_UNBOUNDED = 2,
  FIPM_SOLVE_STATUS_INIT_FAILED = 3,
} FipmSolveStatus;

typedef enum FipmPhase {
  // Initial feasibility phase.
  FIPM_PHASE_INI = 0,
  // Minimization phase.
  FIPM_PHASE_CNT = 1,
} FipmPhase;

typedef struct FipmLpProblem FipmLpProblem;

typedef struct FipmLpResult FipmLpResult;

typedef struct FipmSdpProblem FipmSdpProblem;

typedef struct FipmSdpResult FipmSdpResult;

typedef struct FipmSdpConfig {
  enum FipmSearch search;
  // Fraction of the maximal steplength taken.
  double tau;
  double tol;
  // Centering blend, 0 centers fully.
  double mu;
  size_t maxit;
  // Normalization `tr(C dX) = -gamma` of the search direction.
  double gamma;
  bool centering;
  double init_mu;
  double init_gamma;
  double decomp_tol;
} FipmSdpConfig;

typedef struct FipmLpConfig {
  double tau;
  double tol;
  size_t maxit;
  double gamma;
} FipmLpConfig;

typedef struct FipmSdpTraceRow {
  enum FipmPhase phase;
  size_t iter;
  double alpha;
  double trcdx;
  double trcx;
  double residual;
  double inv_norm;
  double min_eig;
} FipmSdpTraceRow;

typedef struct FipmLpTraceRow {
  enum FipmPhase phase;
  size_t iter;
  double alpha;
  double ctdx;
  double ctx;
  double residual;
  double inv_norm;
  double min_x;
} FipmLpTraceRow;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Version of the library as a static NUL-terminated string.
const char *fipm_version(void);

// Message of the last failed call on this thread, empty after a successful one.
// The pointer stays valid until the next call into the library on this thread.
const char *fipm_last_error_message(void);

struct FipmSdpConfig fipm_sdp_config_default(enum FipmSearch search);

struct FipmLpConfig fipm_lp_config_default(void);

// Builds `min tr(C X)` s.t. `tr(A_i X) = b_i`, `X ⪰ 0`.
//
// `c` holds `n*n` values, `a` holds the `m` constraint matrices one after
// another (`m*n*n` values) and `b` holds `m` values.
enum FipmStatus fipm_sdp_problem_new(size_t n,
                                     size_t m,
                                     const double *c,
                                     const double *a,
                                     const double *b,
                                     struct FipmSdpProblem **out);

// Parses a problem in SDPA sparse format from a NUL-terminated string.
enum FipmStatus fipm_sdp_problem_from_dats(const char *text, struct FipmSdpProblem **out);

// Loads a built-in SDP by name, for example `"sos_example"`.
enum FipmStatus fipm_sdp_problem_fixture(const char *name, struct FipmSdpProblem **out);

// Order of the matrices, 0 for a null handle.
size_t fipm_sdp_problem_n(const struct FipmSdpProblem *problem);

// Number of constraints, 0 for a null handle.
size_t fipm_sdp_problem_m(const struct FipmSdpProblem *problem);

void fipm_sdp_problem_free(struct FipmSdpProblem *problem);

// Solves `problem`. `config` may be null for the STD defaults; `x0` may be
// null to run the initial feasibility phase, otherwise it holds `n*n` values.
enum FipmStatus fipm_sdp_solve(const struct FipmSdpProblem *problem,
                               const struct FipmSdpConfig *config,
                               const double *x0,
                               struct FipmSdpResult **out);

// Solve outcome; a null handle reads as `INIT_FAILED`.
enum FipmSolveStatus fipm_sdp_result_status(const struct FipmSdpResult *result);

// Final objective value, NaN for a null handle.
double fipm_sdp_result_objective(const struct FipmSdpResult *result);

size_t fipm_sdp_result_iterations(const struct FipmSdpResult *result);

size_t fipm_sdp_result_init_iterations(const struct FipmSdpResult *result);

size_t fipm_sdp_result_n(const struct FipmSdpResult *result);

// Copies the final iterate into `buf`, which must hold at least `n*n` values.
enum FipmStatus fipm_sdp_result_copy_x(const struct FipmSdpResult *result, double *buf, size_t len);

// Number of rows in the iteration trace.
size_t fipm_sdp_result_trace_len(const struct FipmSdpResult *result);

enum FipmStatus fipm_sdp_result_trace_row(const struct FipmSdpResult *result,
                                          size_t index,
                                          struct FipmSdpTraceRow *row);

void fipm_sdp_result_free(struct FipmSdpResult *result);

// Builds `min cᵀx` s.t. `A x = b`, `x ≥ 0` with `A` given as `m*n` values.
enum FipmStatus fipm_lp_problem_new(size_t m,
                                    size_t n,
                                    const double *a,
                                    const double *b,
                                    const double *c,
                                    struct FipmLpProblem **out);

// Loads a built-in LP by name, for example `"lp_example"`.
enum FipmStatus fipm_lp_problem_fixture(const char *name, struct FipmLpProblem **out);

size_t fipm_lp_problem_m(const struct FipmLpProblem *problem);

size_t fipm_lp_problem_n(const struct FipmLpProblem *problem);

void fipm_lp_problem_free(struct FipmLpProblem *problem);

// Solves `problem`. `config` may be null for the defaults; `x0` may be null
// to run the initial feasibility phase, otherwise it holds `n` values.
enum FipmStatus fipm_lp_solve(const struct FipmLpProblem *problem,
                              const struct FipmLpConfig *config,
                              const double *x0,
                              struct FipmLpResult **out);

// Solve outcome; a null handle or an infeasible start reads as `INIT_FAILED`.
enum FipmSolveStatus fipm_lp_result_status(const struct FipmLpResult *result);

double fipm_lp_result_objective(const struct FipmLpResult *result);

size_t fipm_lp_result_iterations(const struct FipmLpResult *result);

size_t fipm_lp_result_init_iterations(const struct FipmLpResult *result);

size_t fipm_lp_result_n(const struct FipmLpResult *result);

// Copies the final iterate into `buf`, which must hold at least `n` values.
enum FipmStatus fipm_lp_result_copy_x(const struct FipmLpResult *result, double *buf, size_t len);

size_t fipm_lp_result_trace_len(const struct FipmLpResult *result);

enum FipmStatus fipm_lp_result_trace_row(const struct FipmLpResult *result,
                                         size_t index,
                                         struct FipmLpTraceRow *row);

void fipm_lp_result_free(struct FipmLpResult *result);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FIPM_H */
