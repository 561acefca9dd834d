/* spduff — slow-fast forced Duffing oscillator toolkit.
 *
 * C API over the C++ core: opaque handles, status codes, and a full CLI
 * entry point (spduff_run). Every function returns SPDUFF_OK on success;
 * on failure spduff_last_error() carries a message for the calling thread.
 */
#ifndef SPDUFF_H
#define SPDUFF_H

#ifdef __cplusplus
extern "C" {
#endif

typedef struct spduff_problem_s spduff_problem;
typedef struct spduff_manifold_s spduff_manifold;
typedef struct spduff_trajectory_s spduff_trajectory;

typedef enum spduff_status {
  SPDUFF_OK = 0,
  SPDUFF_ERR_INVALID_ARGUMENT,
  SPDUFF_ERR_PARSE,
  SPDUFF_ERR_EVALUATION_OVERFLOW,
  SPDUFF_ERR_UNKNOWN_INSTANCE,
  SPDUFF_ERR_ASSUMPTION_A1_VIOLATED,
  SPDUFF_ERR_BRANCH_DOMAIN,
  SPDUFF_ERR_CHART_MARGIN_TOO_LARGE,
  SPDUFF_ERR_NO_TURNING_POINTS,
  SPDUFF_ERR_SEPARATRIX_LEVEL,
  SPDUFF_ERR_INVALID_DELTA,
  SPDUFF_ERR_STIFFNESS_FAILURE,
  SPDUFF_ERR_DIVERGENCE,
  SPDUFF_ERR_POLAR_SINGULARITY,
  SPDUFF_ERR_BRANCH_DERIVATIVE_UNAVAILABLE,
  SPDUFF_ERR_EPSILON_TOO_LARGE,
  SPDUFF_ERR_NEEDS_SWEEP,
  SPDUFF_ERR_USAGE,
  SPDUFF_ERR_IO,
  SPDUFF_ERR_INTERNAL
} spduff_status;

const char* spduff_status_name(spduff_status status);
/* Message of the most recent failure on this thread; empty string if none. */
const char* spduff_last_error(void);

/* ---- problems ---------------------------------------------------------- */

/* name in {"D0", "D1", "D2"} */
spduff_status spduff_problem_builtin(const char* name, spduff_problem** out);
/* JSON document {"a": {...}, "m": {...}, "f": {...}, "t_begin": x, "t_end": y}
 * with each function as {"kind": "...", "coefficients": [...]}. */
spduff_status spduff_problem_from_json(const char* json_text, spduff_problem** out);
spduff_status spduff_problem_from_file(const char* path, spduff_problem** out);
spduff_status spduff_problem_to_json(const spduff_problem* p, char** out_text);
void spduff_problem_free(spduff_problem* p);
void spduff_string_free(char* s);

/* fn in {'a', 'm', 'f'}; order in {0, 1, 2} (exact derivatives). */
spduff_status spduff_problem_eval(const spduff_problem* p, char fn, double x, int order,
                                  double* out);
/* Positivity/interval checks; *out_passed is 1 or 0; the JSON report is
 * optional (pass NULL to skip it). */
spduff_status spduff_problem_validate(const spduff_problem* p, int grid_n, int* out_passed,
                                      char** out_report_json);

/* ---- critical manifold ------------------------------------------------- */

/* Folds when the manifold is S-shaped, or the single-branch fallback when
 * f(y) = m(t) is uniquely solvable at every t. */
spduff_status spduff_manifold_build(const spduff_problem* p, spduff_manifold** out);
void spduff_manifold_free(spduff_manifold* m);
/* 2 for the S-shaped case, 0 for the single-branch fallback. */
int spduff_manifold_fold_count(const spduff_manifold* m);
/* which: 0 = minimum fold, 1 = maximum fold. Any output pointer may be NULL. */
spduff_status spduff_manifold_fold(const spduff_manifold* m, int which, double* y, double* t,
                                   double* phi_second_derivative);
/* u_branch(t); branch in {1,2,3} (use 1 for the single-branch manifold).
 * *u_prime is NaN when the implicit derivative is fold-adjacent. */
spduff_status spduff_manifold_branch(const spduff_manifold* m, const spduff_problem* p, int branch,
                                     double t, double* u, double* u_prime);
/* Ascending real roots of f(y) = m(t); *count receives the total found. */
spduff_status spduff_branch_roots(const spduff_problem* p, double t, double* roots, int capacity,
                                  int* count);

/* ---- energy ------------------------------------------------------------ */

spduff_status spduff_potential(const spduff_problem* p, double t, double y, double* out);
spduff_status spduff_base_level(const spduff_problem* p, const spduff_manifold* m, double t,
                                double* out);
spduff_status spduff_turning_points(const spduff_problem* p, double t, double level,
                                    double* y_left, double* y_right);
spduff_status spduff_chi(const spduff_problem* p, const spduff_manifold* m, double t, double y,
                         double* out);
/* well in {"left", "right", "outer"}; action/omega/period may be NULL. */
spduff_status spduff_action_frequency(const spduff_problem* p, double t, double level,
                                      const char* well, double* action, double* omega,
                                      double* period);

/* ---- simulation -------------------------------------------------------- */

typedef struct spduff_solver_options {
  double rel_tol;       /* default 1e-9 */
  double abs_tol;       /* default 1e-11 */
  double max_step_fast; /* default 0.025, fast-time units */
  int dense_output;     /* default 1 */
} spduff_solver_options;

void spduff_solver_options_default(spduff_solver_options* opts);

spduff_status spduff_integrate(const spduff_problem* p, double epsilon, double y0, double w0,
                               double t0, double t1, const spduff_solver_options* opts,
                               spduff_trajectory** out);
void spduff_trajectory_free(spduff_trajectory* traj);
long spduff_trajectory_sample_count(const spduff_trajectory* traj);
spduff_status spduff_trajectory_sample(const spduff_trajectory* traj, long index, double* t,
                                       double* y, double* w);
/* Dense-output evaluation anywhere inside the integrated span. */
spduff_status spduff_trajectory_eval(const spduff_trajectory* traj, double t, double* y,
                                     double* w);

/* Crossings of y(t) - u_branch(t) on [lo, hi]; t_stars/directions (+1 up,
 * -1 down) are filled up to capacity, *count receives the total. */
spduff_status spduff_detect_crossings(const spduff_trajectory* traj, const spduff_manifold* m,
                                      const spduff_problem* p, int branch, double lo, double hi,
                                      double* t_stars, int* directions, int capacity, int* count);

/* ---- chart constants --------------------------------------------------- */

typedef struct spduff_chart_constants {
  char chart[8]; /* "K1", "K2", "K3" or "full" */
  double r_min;
  double eta;
  double delta1;
  double delta2;
  double c;     /* deflated constant: 0.9 x grid minimum */
  double c_raw; /* grid minimum */
  double epsilon;
} spduff_chart_constants;

spduff_status spduff_compute_constants(const spduff_problem* p, const spduff_manifold* m,
                                       double epsilon, double delta, double margin_fraction,
                                       spduff_chart_constants* out, int capacity, int* count);

/* ---- CLI --------------------------------------------------------------- */

/* Complete command-line interface (check / simulate / energy / constants /
 * sweep / phase-portrait). Returns the process exit code: 0 success,
 * 1 certificate or runtime failure, 2 usage error. */
int spduff_run(int argc, const char* const* argv);

#ifdef __cplusplus
}
#endif

#endif /* SPDUFF_H */
