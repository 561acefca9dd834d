#include "spduff/spduff.h"

#include <cmath>
#include <cstring>
#include <string>

#include <json.hpp>

#include "analysis.hpp"
#include "cli.hpp"
#include "energy.hpp"
#include "error.hpp"
#include "integrate.hpp"
#include "manifold.hpp"
#include "polar.hpp"
#include "problem.hpp"
#include "report.hpp"

using namespace spduff;

struct spduff_problem_s {
  OscillatorProblem p;
};
struct spduff_manifold_s {
  CriticalManifold m;
};
struct spduff_trajectory_s {
  Trajectory traj;
};

namespace {

thread_local std::string g_last_error;

spduff_status status_from(errc c) {
  switch (c) {
    case errc::ok: return SPDUFF_OK;
    case errc::invalid_argument: return SPDUFF_ERR_INVALID_ARGUMENT;
    case errc::parse: return SPDUFF_ERR_PARSE;
    case errc::evaluation_overflow: return SPDUFF_ERR_EVALUATION_OVERFLOW;
    case errc::unknown_instance: return SPDUFF_ERR_UNKNOWN_INSTANCE;
    case errc::assumption_a1_violated: return SPDUFF_ERR_ASSUMPTION_A1_VIOLATED;
    case errc::branch_domain: return SPDUFF_ERR_BRANCH_DOMAIN;
    case errc::chart_margin_too_large: return SPDUFF_ERR_CHART_MARGIN_TOO_LARGE;
    case errc::no_turning_points: return SPDUFF_ERR_NO_TURNING_POINTS;
    case errc::separatrix_level: return SPDUFF_ERR_SEPARATRIX_LEVEL;
    case errc::invalid_delta: return SPDUFF_ERR_INVALID_DELTA;
    case errc::stiffness_failure: return SPDUFF_ERR_STIFFNESS_FAILURE;
    case errc::divergence: return SPDUFF_ERR_DIVERGENCE;
    case errc::polar_singularity: return SPDUFF_ERR_POLAR_SINGULARITY;
    case errc::branch_derivative_unavailable: return SPDUFF_ERR_BRANCH_DERIVATIVE_UNAVAILABLE;
    case errc::epsilon_too_large: return SPDUFF_ERR_EPSILON_TOO_LARGE;
    case errc::needs_sweep: return SPDUFF_ERR_NEEDS_SWEEP;
    case errc::usage: return SPDUFF_ERR_USAGE;
    case errc::io: return SPDUFF_ERR_IO;
    case errc::internal: return SPDUFF_ERR_INTERNAL;
  }
  return SPDUFF_ERR_INTERNAL;
}

template <class F>
spduff_status guarded(F&& fn) {
  try {
    fn();
    g_last_error.clear();
    return SPDUFF_OK;
  } catch (const error& e) {
    g_last_error = e.what();
    return status_from(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SPDUFF_ERR_INTERNAL;
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* spduff_status_name(spduff_status status) {
  switch (status) {
    case SPDUFF_OK: return "Ok";
    case SPDUFF_ERR_INVALID_ARGUMENT: return errc_name(errc::invalid_argument);
    case SPDUFF_ERR_PARSE: return errc_name(errc::parse);
    case SPDUFF_ERR_EVALUATION_OVERFLOW: return errc_name(errc::evaluation_overflow);
    case SPDUFF_ERR_UNKNOWN_INSTANCE: return errc_name(errc::unknown_instance);
    case SPDUFF_ERR_ASSUMPTION_A1_VIOLATED: return errc_name(errc::assumption_a1_violated);
    case SPDUFF_ERR_BRANCH_DOMAIN: return errc_name(errc::branch_domain);
    case SPDUFF_ERR_CHART_MARGIN_TOO_LARGE: return errc_name(errc::chart_margin_too_large);
    case SPDUFF_ERR_NO_TURNING_POINTS: return errc_name(errc::no_turning_points);
    case SPDUFF_ERR_SEPARATRIX_LEVEL: return errc_name(errc::separatrix_level);
    case SPDUFF_ERR_INVALID_DELTA: return errc_name(errc::invalid_delta);
    case SPDUFF_ERR_STIFFNESS_FAILURE: return errc_name(errc::stiffness_failure);
    case SPDUFF_ERR_DIVERGENCE: return errc_name(errc::divergence);
    case SPDUFF_ERR_POLAR_SINGULARITY: return errc_name(errc::polar_singularity);
    case SPDUFF_ERR_BRANCH_DERIVATIVE_UNAVAILABLE:
      return errc_name(errc::branch_derivative_unavailable);
    case SPDUFF_ERR_EPSILON_TOO_LARGE: return errc_name(errc::epsilon_too_large);
    case SPDUFF_ERR_NEEDS_SWEEP: return errc_name(errc::needs_sweep);
    case SPDUFF_ERR_USAGE: return errc_name(errc::usage);
    case SPDUFF_ERR_IO: return errc_name(errc::io);
    case SPDUFF_ERR_INTERNAL: return errc_name(errc::internal);
  }
  return "InternalError";
}

const char* spduff_last_error(void) { return g_last_error.c_str(); }

spduff_status spduff_problem_builtin(const char* name, spduff_problem** out) {
  if (!name || !out) return SPDUFF_ERR_INVALID_ARGUMENT;
  return guarded([&] { *out = new spduff_problem_s{builtin(name)}; });
}

spduff_status spduff_problem_from_json(const char* json_text, spduff_problem** out) {
  if (!json_text || !out) return SPDUFF_ERR_INVALID_ARGUMENT;
  return guarded([&] { *out = new spduff_problem_s{problem_from_json_text(json_text)}; });
}

spduff_status spduff_problem_from_file(const char* path, spduff_problem** out) {
  if (!path || !out) return SPDUFF_ERR_INVALID_ARGUMENT;
  return guarded([&] { *out = new spduff_problem_s{problem_from_file(path)}; });
}

spduff_status spduff_problem_to_json(const spduff_problem* p, char** out_text) {
  if (!p || !out_text) return SPDUFF_ERR_INVALID_ARGUMENT;
  return guarded([&] { *out_text = dup_string(problem_to_json_text(p->p)); });
}

void spduff_problem_free(spduff_problem* p) { delete p; }
void spduff_string_free(char* s) { std::free(s); }

spduff_status spduff_problem_eval(const spduff_problem* p, char fn, double x, int order,
                                  double* out) {
  if (!p || !out) return SPDUFF_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    const FunctionSpec* spec = nullptr;
    switch (fn) {
      case 'a': spec = &p->p.a; break;
      case 'm': spec = &p->p.m; break;
      case 'f': spec = &p->p.f; break;
      default: throw error(errc::invalid_argument, "fn must be 'a', 'm' or 'f'");
    }
    *out = spec->eval(x, order);
  });
}

spduff_status spduff_problem_validate(const spduff_problem* p, int grid_n, int* out_passed,
                                      char** out_report_json) {
  if (!p || !out_passed) return SPDUFF_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    const ValidationReport rep = validate(p->p, grid_n);
    *out_passed = rep.passed ? 1 : 0;
    if (out_report_json) {
      nlohmann::json v = nlohmann::json::array();
      for (const auto& viol : rep.violations)
        v.push_back({{"check", viol.check}, {"location", viol.location}, {"detail", viol.detail}});
      nlohmann::json j{{"schema_version", 1}, {"passed", rep.passed}, {"violations", v}};
      *out_report_json = dup_string(dump_json_17(j));
    }
  });
}

spduff_status spduff_manifold_build(const spduff_problem* p, spduff_manifold** out) {
  if (!p || !out) return SPDUFF_ERR_INVALID_ARGUMENT;
  return guarded([&] { *out = new spduff_manifold_s{build_manifold(p->p)}; });
}

void spduff_manifold_free(spduff_manifold* m) { delete m; }

int spduff_manifold_fold_count(const spduff_manifold* m) {
  return m && m->m.s_shaped ? 2 : 0;
}

spduff_status spduff_manifold_fold(const spduff_manifold* m, int which, double* y, double* t,
                                   double* phi_second_derivative) {
  if (!m) return SPDUFF_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    if (!m->m.s_shaped) throw error(errc::invalid_argument, "single-branch manifold has no folds");
    if (which != 0 && which != 1)
      throw error(errc::invalid_argument, "which must be 0 (minimum) or 1 (maximum)");
    const Fold& f = which == 0 ? m->m.fold_min : m->m.fold_max;
    if (y) *y = f.y;
    if (t) *t = f.t;
    if (phi_second_derivative) *phi_second_derivative = f.second_derivative;
  });
}

spduff_status spduff_manifold_branch(const spduff_manifold* m, const spduff_problem* p, int branch_i,
                                     double t, double* u, double* u_prime) {
  if (!m || !p || !u) return SPDUFF_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    const BranchPoint bp = branch(m->m, p->p, branch_i, t);
    *u = bp.u;
    if (u_prime) *u_prime = bp.du ? *bp.du : std::nan("");
  });
}

spduff_status spduff_branch_roots(const spduff_problem* p, double t, double* roots, int capacity,
                                  int* count) {
  if (!p || !count || (capacity > 0 && !roots)) return SPDUFF_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    const BranchRoots br = branch_roots(p->p, t);
    *count = static_cast<int>(br.roots.size());
    for (int i = 0; i < capacity && i < *count; ++i) roots[i] = br.roots[i];
  });
}

spduff_status spduff_potential(const spduff_problem* p, double t, double y, double* out) {
  if (!p || !out) return SPDUFF_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    *out = p->p.f.integral_from_zero(y) - p->p.m.eval(t) * y;
  });
}

spduff_status spduff_base_level(const spduff_problem* p, const spduff_manifold* m, double t,
                                double* out) {
  if (!p || !m || !out) return SPDUFF_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    PotentialContext ctx(p->p, 1.0);  // Delta unused by base_level
    *out = base_level(ctx, m->m, t);
  });
}

spduff_status spduff_turning_points(const spduff_problem* p, double t, double level,
                                    double* y_left, double* y_right) {
  if (!p || !y_left || !y_right) return SPDUFF_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    PotentialContext ctx(p->p, 1.0);
    const TurningPoints tp = turning_points(ctx, t, level);
    *y_left = tp.y_left;
    *y_right = tp.y_right;
  });
}

spduff_status spduff_chi(const spduff_problem* p, const spduff_manifold* m, double t, double y,
                         double* out) {
  if (!p || !m || !out) return SPDUFF_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    PotentialContext ctx(p->p, 1.0);
    *out = chi(ctx, m->m, t, y);
  });
}

spduff_status spduff_action_frequency(const spduff_problem* p, double t, double level,
                                      const char* well, double* action, double* omega,
                                      double* period) {
  if (!p || !well) return SPDUFF_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    Well w;
    const std::string ws = well;
    if (ws == "left")
      w = Well::left;
    else if (ws == "right")
      w = Well::right;
    else if (ws == "outer")
      w = Well::outer;
    else
      throw error(errc::invalid_argument, "well must be left, right or outer");
    PotentialContext ctx(p->p, 1.0);
    const ActionFrequency af = action_frequency(ctx, t, level, w);
    if (action) *action = af.action;
    if (omega) *omega = af.omega;
    if (period) *period = af.period;
  });
}

void spduff_solver_options_default(spduff_solver_options* opts) {
  if (!opts) return;
  const SolverOptions d;
  opts->rel_tol = d.rel_tol;
  opts->abs_tol = d.abs_tol;
  opts->max_step_fast = d.max_step_fast;
  opts->dense_output = d.dense_output ? 1 : 0;
}

spduff_status spduff_integrate(const spduff_problem* p, double epsilon, double y0, double w0,
                               double t0, double t1, const spduff_solver_options* opts,
                               spduff_trajectory** out) {
  if (!p || !out) return SPDUFF_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    SolverOptions so;
    if (opts) {
      so.rel_tol = opts->rel_tol;
      so.abs_tol = opts->abs_tol;
      so.max_step_fast = opts->max_step_fast;
      so.dense_output = opts->dense_output != 0;
    }
    *out = new spduff_trajectory_s{integrate(p->p, epsilon, y0, w0, t0, t1, so)};
  });
}

void spduff_trajectory_free(spduff_trajectory* traj) { delete traj; }

long spduff_trajectory_sample_count(const spduff_trajectory* traj) {
  return traj ? static_cast<long>(traj->traj.samples().size()) : 0;
}

spduff_status spduff_trajectory_sample(const spduff_trajectory* traj, long index, double* t,
                                       double* y, double* w) {
  if (!traj) return SPDUFF_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    const auto& samples = traj->traj.samples();
    if (index < 0 || index >= static_cast<long>(samples.size()))
      throw error(errc::invalid_argument, "sample index out of range");
    if (t) *t = samples[index].t;
    if (y) *y = samples[index].y;
    if (w) *w = samples[index].w;
  });
}

spduff_status spduff_trajectory_eval(const spduff_trajectory* traj, double t, double* y,
                                     double* w) {
  if (!traj) return SPDUFF_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    const State s = traj->traj.eval(t);
    if (y) *y = s.y;
    if (w) *w = s.w;
  });
}

spduff_status spduff_detect_crossings(const spduff_trajectory* traj, const spduff_manifold* m,
                                      const spduff_problem* p, int branch, double lo, double hi,
                                      double* t_stars, int* directions, int capacity, int* count) {
  if (!traj || !m || !p || !count) return SPDUFF_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    const CrossingScan scan = detect_crossings(traj->traj, m->m, p->p, branch, lo, hi);
    *count = static_cast<int>(scan.events.size());
    for (int i = 0; i < capacity && i < *count; ++i) {
      if (t_stars) t_stars[i] = scan.events[i].t_star;
      if (directions) directions[i] = scan.events[i].upward ? 1 : -1;
    }
  });
}

spduff_status spduff_compute_constants(const spduff_problem* p, const spduff_manifold* m,
                                       double epsilon, double delta, double margin_fraction,
                                       spduff_chart_constants* out, int capacity, int* count) {
  if (!p || !m || !count) return SPDUFF_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    const ChartPartition charts = build_charts(m->m, p->p, margin_fraction);
    const std::vector<ChartConstants> cs = compute_constants(p->p, m->m, charts, epsilon, delta);
    *count = static_cast<int>(cs.size());
    for (int i = 0; i < capacity && i < *count; ++i) {
      spduff_chart_constants& c = out[i];
      std::snprintf(c.chart, sizeof c.chart, "%s", chart_name(cs[i].chart_id));
      c.r_min = cs[i].r_min;
      c.eta = cs[i].eta;
      c.delta1 = cs[i].delta1;
      c.delta2 = cs[i].delta2;
      c.c = cs[i].c;
      c.c_raw = cs[i].c_raw;
      c.epsilon = cs[i].epsilon;
    }
  });
}

int spduff_run(int argc, const char* const* argv) { return run_main(argc, argv); }

}  // extern "C"
