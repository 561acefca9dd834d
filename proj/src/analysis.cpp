#include "analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "error.hpp"
#include "parallel.hpp"

namespace spduff {

Trajectory chart_trajectory(const OscillatorProblem& p, const CriticalManifold& mani,
                            const ChartPartition::Chart& chart, double epsilon, double delta,
                            const SolverOptions& solver) {
  PotentialContext ctx(p, delta);
  const double level = base_level(ctx, mani, chart.lo) + delta;
  const TurningPoints tp = turning_points(ctx, chart.lo, level);
  return integrate(p, epsilon, tp.y_right, 0.0, chart.lo, chart.hi, solver);
}

namespace {

// Locate w = 0 inside (lo, hi) via dense-output bisection; empty if w does
// not change sign at the probe points.
std::optional<double> locate_extremum(const Trajectory& traj, double lo, double hi) {
  const int probes = 24;
  double prev_t = lo, prev_w = traj.eval(lo).w;
  for (int i = 1; i <= probes; ++i) {
    const double t = lo + (hi - lo) * i / probes;
    const double w = traj.eval(t).w;
    if (prev_w == 0.0) return prev_t;
    if (prev_w * w < 0.0) {
      double a = prev_t, b = t, fa = prev_w;
      for (int it = 0; it < 120; ++it) {
        const double mid = 0.5 * (a + b);
        if (mid == a || mid == b) break;
        const double fm = traj.eval(mid).w;
        if (fm == 0.0) return mid;
        if (fa * fm < 0.0)
          b = mid;
        else {
          a = mid;
          fa = fm;
        }
      }
      return 0.5 * (a + b);
    }
    prev_t = t;
    prev_w = w;
  }
  return std::nullopt;
}

}  // namespace

ChartOscillationReport oscillation_report(const OscillatorProblem& p, const CriticalManifold& mani,
                                          const ChartPartition::Chart& chart,
                                          const ChartConstants& constants, double epsilon,
                                          double delta, const AnalysisOptions& opts) {
  const int bi = chart_branch(chart.id);
  PotentialContext ctx(p, delta);
  const Trajectory traj = chart_trajectory(p, mani, chart, epsilon, delta, opts.solver);
  const CrossingScan scan = detect_crossings(traj, mani, p, bi, chart.lo, chart.hi);

  ChartOscillationReport rep;
  rep.chart_id = chart.id;
  rep.epsilon = epsilon;
  rep.c = constants.c;
  rep.r_min = constants.r_min;
  rep.zero_count = static_cast<int>(scan.events.size());
  rep.tangency_count = scan.tangential_near_zeros;
  rep.bound = epsilon * M_PI / constants.c;

  for (std::size_t i = 1; i < scan.events.size(); ++i)
    rep.max_spacing = std::max(rep.max_spacing, scan.events[i].t_star - scan.events[i - 1].t_star);
  rep.spacing_ok = rep.zero_count >= 2 && rep.max_spacing <= rep.bound;

  // Envelope: each inter-crossing window carries one extremum; compare it to
  // the turning point of V(t, .) at the trajectory's own energy there.
  for (std::size_t i = 1; i < scan.events.size(); ++i) {
    const double lo = scan.events[i - 1].t_star, hi = scan.events[i].t_star;
    const bool upper = scan.events[i - 1].upward;  // y > u on an (up, down) window
    const std::optional<double> te = locate_extremum(traj, lo, hi);
    if (!te) continue;
    const State s = traj.eval(*te);
    const double level = 0.5 * s.w * s.w + potential(ctx, *te, s.y);
    TurningPoints tp;
    try {
      tp = turning_points(ctx, *te, level);
    } catch (const error& e) {
      if (e.code() == errc::no_turning_points) continue;
      throw;
    }
    const double err = upper ? std::abs(s.y - tp.y_right) : std::abs(s.y - tp.y_left);
    rep.envelope_sup_error = std::max(rep.envelope_sup_error, err);
  }

  // Converged envelope error and the post-hoc radius/energy diagnostics.
  double conv = 0;
  double r_obs = std::numeric_limits<double>::infinity();
  double h_rel_min = std::numeric_limits<double>::infinity(), h_rel_max = -h_rel_min;
  const int n = std::max(2, opts.envelope_samples);
  for (int i = 0; i < n; ++i) {
    const double t = chart.lo + (chart.hi - chart.lo) * i / (n - 1);
    const State s = traj.eval(t);
    const double H = 0.5 * s.w * s.w + potential(ctx, t, s.y);
    const double level0 = base_level(ctx, mani, t) + delta;
    h_rel_min = std::min(h_rel_min, H - level0);
    h_rel_max = std::max(h_rel_max, H - level0);
    try {
      const TurningPoints te = turning_points(ctx, t, H);
      const TurningPoints t0 = turning_points(ctx, t, level0);
      conv = std::max({conv, std::abs(te.y_right - t0.y_right), std::abs(te.y_left - t0.y_left)});
    } catch (const error& e) {
      if (e.code() != errc::no_turning_points) throw;
    }
    const double a = p.a.eval(t);
    const double d = s.y - branch(mani, p, bi, t).u;
    r_obs = std::min(r_obs, std::hypot(d, a * s.w));
  }
  rep.converged_envelope_error = conv;
  rep.r_observed_min = r_obs;
  rep.h_rel_min = h_rel_min;
  rep.h_rel_max = h_rel_max;
  return rep;
}

SweepResult run_sweep(const OscillatorProblem& p, const std::vector<double>& eps_list, double delta,
                      const AnalysisOptions& opts, const std::string& problem_id) {
  for (std::size_t i = 1; i < eps_list.size(); ++i)
    if (!(eps_list[i] < eps_list[i - 1]))
      throw error(errc::invalid_argument, "epsilon list must be strictly decreasing");
  if (eps_list.empty()) throw error(errc::invalid_argument, "epsilon list must not be empty");

  const CriticalManifold mani = build_manifold(p);
  const ChartPartition charts = build_charts(mani, p, opts.margin_fraction);

  SweepResult sweep;
  sweep.problem_id = problem_id;
  sweep.delta = delta;
  sweep.entries.resize(eps_list.size());

  parallel_for(static_cast<int>(eps_list.size()), [&](int i) {
    SweepEntry entry;
    entry.epsilon = eps_list[i];
    try {
      const std::vector<ChartConstants> consts =
          compute_constants(p, mani, charts, entry.epsilon, delta, opts.grid);
      for (std::size_t c = 0; c < charts.charts.size(); ++c)
        entry.charts.push_back(oscillation_report(p, mani, charts.charts[c], consts[c],
                                                  entry.epsilon, delta, opts));
    } catch (const error& e) {
      entry.error = e.what();
      entry.charts.clear();
    }
    sweep.entries[i] = std::move(entry);
  });

  // z(eps)/z(2 eps) for consecutive halvings
  for (std::size_t i = 1; i < sweep.entries.size(); ++i) {
    const SweepEntry& coarse = sweep.entries[i - 1];
    const SweepEntry& fine = sweep.entries[i];
    if (!coarse.error.empty() || !fine.error.empty()) continue;
    if (std::abs(coarse.epsilon / fine.epsilon - 2.0) > 1e-9) continue;
    for (const ChartOscillationReport& fr : fine.charts) {
      for (const ChartOscillationReport& cr : coarse.charts) {
        if (cr.chart_id != fr.chart_id || cr.zero_count == 0) continue;
        sweep.ratios.push_back({fr.chart_id, fr.epsilon, cr.epsilon,
                                static_cast<double>(fr.zero_count) / cr.zero_count});
      }
    }
  }
  return sweep;
}

std::vector<std::pair<double, double>> envelope_convergence(const SweepResult& sweep,
                                                            ChartId chart) {
  std::vector<std::pair<double, double>> out;
  for (const SweepEntry& e : sweep.entries) {
    if (!e.error.empty()) continue;
    for (const ChartOscillationReport& r : e.charts)
      if (r.chart_id == chart) out.emplace_back(r.epsilon, r.converged_envelope_error);
  }
  if (out.size() < 2)
    throw error(errc::needs_sweep, "envelope convergence needs at least two sweep entries");
  return out;
}

}  // namespace spduff
