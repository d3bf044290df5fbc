/* Capacity-constrained sequential prediction for linear-Gaussian systems.
 *
 * C interface of libcclqg. Every function returns an error code (CCLQG_OK on
 * success) and reports results through out parameters. Handles are opaque and
 * must be released with the matching *_free function. On failure the handle
 * out parameter is left untouched and cclqg_last_error() describes what went
 * wrong (per thread). Matrix buffers are row-major, caller-allocated, with
 * sizes taken from the dimension getters. Capacities are in nats unless a
 * function says otherwise; infinite capacity is HUGE_VAL.
 */
#ifndef CCLQG_H
#define CCLQG_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define CCLQG_OK 0
#define CCLQG_ERR_INVALID_ARGUMENT 1
#define CCLQG_ERR_NOT_SYMMETRIC 2
#define CCLQG_ERR_NOT_PSD 3
#define CCLQG_ERR_NOT_POSITIVE_DEFINITE 4
#define CCLQG_ERR_UNSTABLE 5
#define CCLQG_ERR_NO_CONVERGENCE 6
#define CCLQG_ERR_SINGULAR_INNOVATION 7
#define CCLQG_ERR_DIMENSION_MISMATCH 8
#define CCLQG_ERR_INCONSISTENT_GROUPS 9
#define CCLQG_ERR_CONDITION_VIOLATED 10
#define CCLQG_ERR_STEP_OUT_OF_RANGE 11
#define CCLQG_ERR_PARSE 12
#define CCLQG_ERR_IO 13
#define CCLQG_ERR_NULL_POINTER 14
#define CCLQG_ERR_INTERNAL 15

/* Matrix selectors for the stationary getters. */
#define CCLQG_MAT_SIGMA 0 /* stationary state covariance            */
#define CCLQG_MAT_P 1     /* one-step prediction error covariance   */
#define CCLQG_MAT_M 2     /* filtering error covariance             */
#define CCLQG_MAT_K 3     /* closed-loop filter transition          */
#define CCLQG_MAT_L 4     /* stationary innovation gain             */

typedef struct cclqg_config cclqg_config;
typedef struct cclqg_system cclqg_system;
typedef struct cclqg_steady cclqg_steady;
typedef struct cclqg_alloc cclqg_alloc;
typedef struct cclqg_predictor cclqg_predictor;
typedef struct cclqg_report cclqg_report;

/* ---- library ---- */

const char* cclqg_version(void);
/* Stable name of an error code, e.g. "condition_violated". */
const char* cclqg_error_name(int code);
/* Message of the last failure on this thread; empty string if none. */
const char* cclqg_last_error(void);

/* ---- configuration ---- */

/* Parses a JSON experiment description (see the project README for the
 * schema). */
int cclqg_config_parse(const char* json, cclqg_config** out);
int cclqg_config_load(const char* path, cclqg_config** out);
void cclqg_config_free(cclqg_config* cfg);

/* Divides every group multiplicity and every grid capacity by factor,
 * keeping per-subsystem budgets invariant. factor >= 1. */
int cclqg_config_scale(cclqg_config* cfg, int factor);
int cclqg_config_set_seed(cclqg_config* cfg, uint64_t seed);
/* unit is "nats" or "bits"; applies to how grid values are read. */
int cclqg_config_set_unit(cclqg_config* cfg, const char* unit);

int cclqg_config_horizon(const cclqg_config* cfg, int* out);
int cclqg_config_sample_count(const cclqg_config* cfg, int* out);
int cclqg_config_seed(const cclqg_config* cfg, uint64_t* out);
/* Configured burn-in; -1 means derive it from the mixing time. */
int cclqg_config_burn_in(const cclqg_config* cfg, int* out);
/* Copies "steady" or "finite" into buf. */
int cclqg_config_mode(const cclqg_config* cfg, char* buf, size_t cap);
int cclqg_config_tol_sigma(const cclqg_config* cfg, double* out);
int cclqg_config_out_dir(const cclqg_config* cfg, char* buf, size_t cap);
int cclqg_config_unit(const cclqg_config* cfg, char* buf, size_t cap);
int cclqg_config_grid_count(const cclqg_config* cfg, int* out);
/* raw is in the configured unit, nats is converted; HUGE_VAL for "inf". */
int cclqg_config_grid_value(const cclqg_config* cfg, int index, double* raw, double* nats);
int cclqg_config_build_system(const cclqg_config* cfg, cclqg_system** out);

/* ---- system ---- */

void cclqg_system_free(cclqg_system* sys);
int cclqg_system_dim(const cclqg_system* sys, int* out);
int cclqg_system_obs_dim(const cclqg_system* sys, int* out);
int cclqg_system_stable(const cclqg_system* sys, int* out);
/* Counts model violations (asymmetric or indefinite covariances). */
int cclqg_system_validate(cclqg_system* sys, int* count);
/* Message and witness value of violation `index` from the last validate. */
int cclqg_system_violation(const cclqg_system* sys, int index, char* buf, size_t cap,
                           double* value);

/* Distinct replicated groups of a structured system; count is 0 when the
 * system was built from raw matrices. */
int cclqg_group_count(const cclqg_system* sys, int* out);
int cclqg_group_info(cclqg_system* sys, int index, char* label, size_t cap, int* dim, int* mult);
/* Traces of the five stationary matrices of one group block, in selector
 * order sigma, p, m, k, l. */
int cclqg_group_traces(cclqg_system* sys, int index, double traces[5]);
/* Eigenvalues of sigma - m for one group block, descending. buf must hold
 * the group dimension. */
int cclqg_group_weights(cclqg_system* sys, int index, double* buf);
/* One stationary matrix of a group block; buf holds dim*dim doubles. */
int cclqg_group_matrix(cclqg_system* sys, int index, int which, double* buf);

/* ---- stationary solution of the full system ---- */

int cclqg_steady_compute(const cclqg_system* sys, cclqg_steady** out);
void cclqg_steady_free(cclqg_steady* ss);
int cclqg_steady_dim(const cclqg_steady* ss, int* out);
/* buf holds dim*dim doubles, row-major; which is a CCLQG_MAT_* selector. */
int cclqg_steady_matrix(const cclqg_steady* ss, int which, double* buf);

/* Closed-form stationary variances of a scalar system. */
int cclqg_scalar_steady(double a, double c, double s2w, double s2v, double* sigma, double* p,
                        double* m);

/* ---- capacity allocation ---- */

/* Reverse water-filling over modes with optional integer multiplicities
 * (counts may be NULL for all-ones). budgets_out may be NULL. */
int cclqg_water_fill(const double* lambdas, const int* counts, int n, double capacity,
                     double* budgets_out, double* eta_out, double* distortion_out,
                     int* infinite_out);

/* Stationary cost tr(m) + sum_i e^{-2 b_i} lambda_i at this capacity. */
int cclqg_steady_cost(const cclqg_steady* ss, double capacity, double* cost);

/* Stationary realizability of the capacity-constrained predictor. */
int cclqg_ss_conditions(const cclqg_steady* ss, double capacity, int* overall, int* active_modes,
                        double* range_residual, double* order_witness);

/* Finite-horizon construction conditions; first_fail is the earliest
 * violating step, 0 when overall holds. */
int cclqg_c3l_conditions(const cclqg_system* sys, double capacity, int horizon, int* overall,
                         int* first_fail);

/* Water-filling across the groups of a structured system with per-group
 * realizability checks. */
int cclqg_allocate(cclqg_system* sys, double capacity, cclqg_alloc** out);
void cclqg_alloc_free(cclqg_alloc* alloc);
int cclqg_alloc_summary(const cclqg_alloc* alloc, double* cost, double* distortion, double* eta,
                        double* capacity_used, int* feasible, int* infinite);
int cclqg_alloc_group_count(const cclqg_alloc* alloc, int* out);
int cclqg_alloc_group(const cclqg_alloc* alloc, int index, char* label, size_t cap,
                      double* block_budget, double* total_budget, int* feasible);
/* Per-mode budgets of one block of group `index`; buf holds the group
 * dimension, n_out receives it. */
int cclqg_alloc_group_budgets(const cclqg_alloc* alloc, int index, double* buf, int* n_out);

/* ---- predictors ---- */

/* Stationary recursion agent; fails with CCLQG_ERR_CONDITION_VIOLATED when
 * the stationary conditions do not hold. */
int cclqg_predictor_steady_agent(const cclqg_system* sys, double capacity, cclqg_predictor** out);
/* Oracle-access stationary predictor (exact filter plus channel gains);
 * needs no conditions. */
int cclqg_predictor_steady_direct(const cclqg_system* sys, double capacity, cclqg_predictor** out);
/* Finite-horizon incremental agent over `horizon` steps. */
int cclqg_predictor_finite_agent(const cclqg_system* sys, double capacity, int horizon,
                                 cclqg_predictor** out);
int cclqg_predictor_finite_direct(const cclqg_system* sys, double capacity, int horizon,
                                  cclqg_predictor** out);
void cclqg_predictor_free(cclqg_predictor* pred);
/* Expected squared error at 1-based step t. */
int cclqg_predictor_loss(const cclqg_predictor* pred, int t, double* out);

/* ---- experiments ---- */

/* Burn-in from the mixing time: max(10 ceil(1/(1-rho)), 200). */
int cclqg_default_burn_in(const cclqg_system* sys, int* out);

/* Monte Carlo estimate of the per-step squared prediction error over n
 * trajectories. Deterministic for a fixed seed, independent of thread
 * count. */
int cclqg_run_experiment(const cclqg_system* sys, const cclqg_predictor* pred, int horizon, int n,
                         uint64_t seed, int burn_in, cclqg_report** out);
void cclqg_report_free(cclqg_report* report);
int cclqg_report_meta(const cclqg_report* report, int* horizon, int* n, int* burn_in);
int cclqg_report_step(const cclqg_report* report, int t, double* analytic, double* empirical,
                      double* se);
int cclqg_report_timeavg(const cclqg_report* report, double* analytic, double* empirical,
                         double* se, double* z);
/* Checks every measured step's z-score against tol_sigma. */
int cclqg_report_compare(const cclqg_report* report, double tol_sigma, int* pass, int* worst_step,
                         double* worst_z);
/* Writes step,analytic,empirical,se,z rows to path. */
int cclqg_report_write_csv(const cclqg_report* report, const char* path);

/* Samples trajectories and writes trajectory,step,kind,index,value rows. */
int cclqg_sample_csv(const cclqg_system* sys, int horizon, int n, uint64_t seed,
                     const char* path);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* CCLQG_H */
