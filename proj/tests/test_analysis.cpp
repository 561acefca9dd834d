#include <doctest.h>

#include <cmath>

#include "analysis.hpp"
#include "error.hpp"

using namespace spduff;

namespace {

const ChartOscillationReport& chart_of(const SweepEntry& e, ChartId id) {
  for (const auto& r : e.charts)
    if (r.chart_id == id) return r;
  throw std::runtime_error("chart missing from sweep entry");
}

}  // namespace

TEST_CASE("harmonic oscillation report: counts, spacing, envelope") {
  const OscillatorProblem d0 = builtin("D0");
  const CriticalManifold m = build_manifold(d0);
  const ChartPartition charts = build_charts(m, d0, 0.05);
  const double eps = 0.01, delta = 0.05;
  const auto cs = compute_constants(d0, m, charts, eps, delta);
  AnalysisOptions opts;
  const ChartOscillationReport rep =
      oscillation_report(d0, m, charts.charts[0], cs[0], eps, delta, opts);

  CHECK(rep.zero_count >= 31);
  CHECK(rep.zero_count <= 32);
  CHECK(rep.max_spacing == doctest::Approx(M_PI * eps).epsilon(1e-9));
  CHECK(rep.bound == doctest::Approx(eps * M_PI / 0.9).epsilon(1e-12));
  CHECK(rep.spacing_ok);
  CHECK(rep.envelope_sup_error <= 1e-6);
  CHECK(rep.converged_envelope_error <= 1e-6);
  CHECK(rep.tangency_count == 0);
  // conserved level: the orbit radius never leaves the certified disk
  CHECK(rep.r_observed_min >= rep.r_min * (1.0 - 1e-6));
  // window amplitude equals sqrt(2 Delta) for the conserved harmonic level
  const Trajectory traj = chart_trajectory(d0, m, charts.charts[0], eps, delta, opts.solver);
  double amp = 0;
  for (const auto& s : traj.samples()) amp = std::max(amp, std::abs(s.y));
  CHECK(amp == doctest::Approx(std::sqrt(2 * delta)).epsilon(1e-6));
}

TEST_CASE("D1 middle chart satisfies the spacing certificate") {
  const OscillatorProblem d1 = builtin("D1");
  const CriticalManifold m = find_folds(d1);
  const ChartPartition charts = build_charts(m, d1, 0.05);
  const double eps = 0.01, delta = 0.05;
  const auto cs = compute_constants(d1, m, charts, eps, delta);
  AnalysisOptions opts;
  const ChartOscillationReport rep =
      oscillation_report(d1, m, charts.charts[1], cs[1], eps, delta, opts);
  CHECK(rep.zero_count >= 1);
  CHECK(rep.max_spacing <= eps * M_PI / cs[1].c);
  CHECK(rep.spacing_ok);
}

TEST_CASE("default sweep of the builtins") {
  AnalysisOptions opts;
  const std::vector<double> eps{0.02, 0.01, 0.005};

  const SweepResult s0 = run_sweep(builtin("D0"), eps, 0.05, opts, "D0");
  REQUIRE(s0.entries.size() == 3);
  for (const auto& e : s0.entries) {
    REQUIRE(e.error.empty());
    REQUIRE(e.charts.size() == 1);
    CHECK(e.charts[0].spacing_ok);
  }
  // ratios 2.0 exactly up to a one-count phase effect
  REQUIRE(s0.ratios.size() == 2);
  for (const auto& r : s0.ratios) {
    CHECK(r.ratio >= 1.9);
    CHECK(r.ratio <= 2.1);
  }

  const SweepResult s1 = run_sweep(builtin("D1"), eps, 0.05, opts, "D1");
  for (const auto& e : s1.entries) {
    REQUIRE(e.error.empty());
    REQUIRE(e.charts.size() == 3);
    for (const auto& r : e.charts) CHECK(r.spacing_ok);
  }
  for (const auto& r : s1.ratios) {
    if (r.chart_id == ChartId::K2) {
      CHECK(r.ratio >= 1.8);
      CHECK(r.ratio <= 2.2 + 1e-12);
    }
  }

  const SweepResult s2 = run_sweep(builtin("D2"), eps, 0.05, opts, "D2");
  for (const auto& e : s2.entries)
    for (const auto& r : e.charts) CHECK(r.spacing_ok);

  // zero counts grow by at least 1.5x per halving on every chart
  for (const SweepResult* s : {&s0, &s1, &s2}) {
    for (const auto& r : s->ratios) CHECK(r.ratio >= 1.5);
    for (std::size_t i = 1; i < s->entries.size(); ++i)
      for (const auto& fine : s->entries[i].charts)
        CHECK(fine.zero_count > chart_of(s->entries[i - 1], fine.chart_id).zero_count);
  }

  // envelope convergence on the middle chart
  const auto conv = envelope_convergence(s1, ChartId::K2);
  REQUIRE(conv.size() == 3);
  CHECK(conv.back().second < conv.front().second);  // eps 0.005 vs 0.02
  // K1 and K3 error curves agree within 10% at the finest epsilon
  const auto c1 = envelope_convergence(s1, ChartId::K1);
  const auto c3 = envelope_convergence(s1, ChartId::K3);
  const double e1 = c1.back().second, e3 = c3.back().second;
  CHECK(std::abs(e1 - e3) <= 0.10 * std::max(e1, e3));
}

TEST_CASE("sweep edge cases") {
  AnalysisOptions opts;
  // singleton list: no ratios, no error
  const SweepResult s = run_sweep(builtin("D0"), {0.01}, 0.05, opts, "D0");
  CHECK(s.ratios.empty());
  CHECK(s.entries.size() == 1);
  CHECK(s.entries[0].error.empty());

  // a failing epsilon yields a partial result with an error entry
  const SweepResult p = run_sweep(builtin("D1"), {0.2, 0.01}, 0.05, opts, "D1");
  REQUIRE(p.entries.size() == 2);
  CHECK_FALSE(p.entries[0].error.empty());
  CHECK(p.entries[0].error.find("EpsilonTooLarge") != std::string::npos);
  CHECK(p.entries[1].error.empty());
  CHECK(p.entries[1].charts.size() == 3);
  CHECK(p.ratios.empty());  // 0.2 -> 0.01 is not a halving

  CHECK_THROWS_AS(run_sweep(builtin("D0"), {0.01, 0.02}, 0.05, opts), error);  // not decreasing
  CHECK_THROWS_AS(envelope_convergence(s, ChartId::Full), error);              // needs >= 2
  try {
    envelope_convergence(s, ChartId::Full);
    CHECK(false);
  } catch (const error& e) {
    CHECK(e.code() == errc::needs_sweep);
  }
}

TEST_CASE("turning-point sign tracks the energy offset sign") {
  // sign(y_R^eps - y_R^0) = sign(H - (H0 + Delta)) wherever H is measurable
  const OscillatorProblem d1 = builtin("D1");
  const CriticalManifold m = find_folds(d1);
  const ChartPartition charts = build_charts(m, d1, 0.05);
  const double eps = 0.01, delta = 0.05;
  PotentialContext ctx(d1, delta);
  const ChartPartition::Chart& k2 = charts.charts[1];
  const Trajectory traj = chart_trajectory(d1, m, k2, eps, delta, {});
  int checked = 0;
  for (int i = 0; i <= 100; ++i) {
    const double t = k2.lo + (k2.hi - k2.lo) * i / 100;
    const State s = traj.eval(t);
    const double H = 0.5 * s.w * s.w + potential(ctx, t, s.y);
    const double level0 = base_level(ctx, m, t) + delta;
    if (std::abs(H - level0) < 1e-6) continue;
    TurningPoints te, t0;
    try {
      te = turning_points(ctx, t, H);
      t0 = turning_points(ctx, t, level0);
    } catch (const error&) {
      continue;
    }
    CHECK(((te.y_right > t0.y_right) == (H > level0)));
    CHECK(((te.y_left < t0.y_left) == (H > level0)));
    ++checked;
  }
  CHECK(checked > 50);
}

TEST_CASE("crossing alternation holds on analyzed trajectories") {
  const OscillatorProblem d1 = builtin("D1");
  const CriticalManifold m = find_folds(d1);
  const ChartPartition charts = build_charts(m, d1, 0.05);
  for (const auto& chart : charts.charts) {
    const Trajectory traj = chart_trajectory(d1, m, chart, 0.01, 0.05, {});
    const CrossingScan scan =
        detect_crossings(traj, m, d1, chart_branch(chart.id), chart.lo, chart.hi);
    for (std::size_t i = 1; i < scan.events.size(); ++i)
      CHECK(scan.events[i].upward != scan.events[i - 1].upward);
  }
}
