#include <doctest.h>

#include <cmath>

#include "energy.hpp"
#include "error.hpp"
#include "integrate.hpp"
#include "oracles.hpp"

using namespace spduff;

namespace {

OscillatorProblem conservative_d1() {  // D1 with m forced to zero
  OscillatorProblem p = builtin("D1");
  p.m = FunctionSpec::polynomial({0.0});
  p.t_begin = 0.0;
  p.t_end = 1.0;
  return p;
}

double energy_of(const OscillatorProblem& p, double t, double y, double w) {
  return 0.5 * w * w + p.f.integral_from_zero(y) - p.m.eval(t) * y;
}

}  // namespace

TEST_CASE("harmonic solution matches cos(t/eps)") {
  const OscillatorProblem d0 = builtin("D0");
  const double eps = 0.01;
  const Trajectory traj = integrate(d0, eps, 1.0, 0.0, 0.0, 1.0);
  CHECK(traj.eval(M_PI * eps).y == doctest::Approx(-1.0).epsilon(1e-6));
  double sup = 0;
  for (int i = 0; i <= 4000; ++i) {
    const double t = i / 4000.0;
    sup = std::max(sup, std::abs(traj.eval(t).y - std::cos(t / eps)));
  }
  CHECK(sup <= 1e-6);
  // strictly increasing sample times
  for (std::size_t i = 1; i < traj.samples().size(); ++i)
    CHECK(traj.samples()[i].t > traj.samples()[i - 1].t);
}

TEST_CASE("conservative case keeps H constant to 1e-8 over a slow unit") {
  const OscillatorProblem p = conservative_d1();
  for (double eps : {0.02, 0.01}) {
    const Trajectory traj = integrate(p, eps, 1.5, 0.0, 0.0, 1.0);
    const double H0 = energy_of(p, 0.0, 1.5, 0.0);
    double drift = 0;
    for (int i = 0; i <= 3000; ++i) {
      const State s = traj.eval(i / 3000.0);
      drift = std::max(drift, std::abs(energy_of(p, i / 3000.0, s.y, s.w) - H0));
    }
    CHECK(drift <= 1e-8);
  }
}

TEST_CASE("brute-force fixed-step reference over tau in [0, 50]") {
  const OscillatorProblem d1 = builtin("D1");
  const double eps = 0.02;
  // standard family start at t_begin
  PotentialContext ctx(d1, 0.05);
  const CriticalManifold m = find_folds(d1);
  const TurningPoints tp = turning_points(ctx, d1.t_begin, base_level(ctx, m, d1.t_begin) + 0.05);
  const double t0 = d1.t_begin, t1 = t0 + eps * 50.0;
  const Trajectory traj = integrate(d1, eps, tp.y_right, 0.0, t0, t1);

  auto rhs = [&](double tau, const double* s, double* d) {
    const double t = t0 + eps * tau;
    const double a = d1.a.eval(t);
    d[0] = s[1] / a;
    d[1] = (d1.m.eval(t) - d1.f.eval(s[0])) / a - eps * d1.a.eval(t, 1) / a * s[1];
  };
  const oracles::Rk4Result ref = oracles::rk4(rhs, 0.0, 50.0, tp.y_right, 0.0, 1e-4);
  double sup = 0;
  for (std::size_t i = 0; i < ref.ts.size(); i += 1000) {
    const State s = traj.eval(t0 + eps * ref.ts[i]);
    sup = std::max({sup, std::abs(s.y - ref.y1[i]), std::abs(s.w - ref.y2[i])});
  }
  CHECK(sup <= 1e-6);
}

TEST_CASE("fast-time integration equals the slow-time (y, v) system") {
  // y' = v/(eps a^2), v' = (m - f)/eps; exact map w = v/a
  const OscillatorProblem d2 = builtin("D2");
  const double eps = 0.05, t0 = -0.5, t1 = -0.4;
  const Trajectory traj = integrate(d2, eps, 1.2, 0.0, t0, t1);
  auto rhs = [&](double t, const double* s, double* d) {
    const double a = d2.a.eval(t);
    d[0] = s[1] / (eps * a * a);
    d[1] = (d2.m.eval(t) - d2.f.eval(s[0])) / eps;
  };
  const double a0 = d2.a.eval(t0);
  const oracles::Rk4Result ref = oracles::rk4(rhs, t0, t1, 1.2, 0.0 * a0, 2e-6);
  const State end = traj.eval(t1);
  const double a1 = d2.a.eval(t1);
  CHECK(end.y == doctest::Approx(ref.y1.back()).epsilon(1e-8));
  CHECK(end.w == doctest::Approx(ref.y2.back() / a1).epsilon(1e-8));
}

TEST_CASE("dense output agrees with half-step re-integration") {
  const OscillatorProblem d1 = builtin("D1");
  SolverOptions opts;
  const double eps = 0.02;
  const Trajectory traj = integrate(d1, eps, 1.4, 0.0, -1.0, -0.9, opts);
  const auto& samples = traj.samples();
  REQUIRE(samples.size() > 4);
  for (std::size_t i = 0; i + 1 < samples.size(); i += 3) {
    const double tm = 0.5 * (samples[i].t + samples[i + 1].t);
    SolverOptions tight;
    tight.rel_tol = 1e-12;
    tight.abs_tol = 1e-14;
    const Trajectory half = integrate(d1, eps, samples[i].y, samples[i].w, samples[i].t, tm, tight);
    const State a = traj.eval(tm);
    const State b = half.eval(tm);
    const double scale = std::max({1.0, std::abs(b.y), std::abs(b.w)});
    CHECK(std::abs(a.y - b.y) <= 10 * opts.rel_tol * scale);
    CHECK(std::abs(a.w - b.w) <= 10 * opts.rel_tol * scale);
  }
}

TEST_CASE("energy series and the dH/dt identity") {
  const OscillatorProblem d0 = builtin("D0");
  const double y0 = std::sqrt(0.1);  // standard family level Delta = 0.05
  const Trajectory t0 = integrate(d0, 0.01, y0, 0.0, 0.0, 1.0);
  double h0 = -1;
  for (const EnergySample& es : energy_along(t0, d0, 512)) {
    if (h0 < 0) h0 = es.H;
    CHECK(std::abs(es.H - h0) <= 1e-8);
    CHECK(std::abs(es.residual) <= 1e-8);
  }

  // D1: dH/dt = y, so the identity residual stays small relative to |y|
  const OscillatorProblem d1 = builtin("D1");
  const Trajectory t1 = integrate(d1, 0.02, 1.4, 0.0, -1.0, 0.0);
  double ymax = 0, rmax = 0;
  for (const EnergySample& es : energy_along(t1, d1, 2048)) {
    rmax = std::max(rmax, std::abs(es.residual));
  }
  for (const auto& s : t1.samples()) ymax = std::max(ymax, std::abs(s.y));
  CHECK(rmax <= 1e-6 * std::max(1.0, ymax));

  // D2 with m = 0: dH/dt = -(a'/a) w^2 <= 0, so H decays monotonically
  OscillatorProblem damp = builtin("D2");
  damp.m = FunctionSpec::polynomial({0.0});
  const Trajectory t2 = integrate(damp, 0.02, 1.5, 0.0, -1.0, 0.0);
  const auto series = energy_along(t2, damp, 512);
  for (std::size_t i = 1; i < series.size(); ++i)
    CHECK(series[i].H <= series[i - 1].H + 1e-10);
}

TEST_CASE("crossing detection on the harmonic instance") {
  const OscillatorProblem d0 = builtin("D0");
  const CriticalManifold m = build_manifold(d0);
  const double eps = 0.01;

  // span [0, 2 pi eps]: exactly two crossings of u = 0, at eps pi/2 and 3 eps pi/2
  const Trajectory traj = integrate(d0, eps, 1.0, 0.0, 0.0, 2.0 * M_PI * eps);
  const CrossingScan scan = detect_crossings(traj, m, d0, 1, 0.0, 2.0 * M_PI * eps);
  REQUIRE(scan.events.size() == 2);
  CHECK(scan.events[0].t_star == doctest::Approx(eps * M_PI / 2).epsilon(1e-7));
  CHECK(scan.events[1].t_star == doctest::Approx(eps * 3 * M_PI / 2).epsilon(1e-7));
  CHECK(scan.events[0].upward != scan.events[1].upward);

  // full interval: count lands on floor(1/(pi eps)) up to phase
  const Trajectory full = integrate(d0, eps, 1.0, 0.0, 0.0, 1.0);
  const CrossingScan all = detect_crossings(full, m, d0, 1, 0.0, 1.0);
  CHECK(all.events.size() >= 31);
  CHECK(all.events.size() <= 32);
  for (std::size_t i = 0; i < all.events.size(); ++i) {
    CHECK(all.events[i].residual <= 1e-10);
    if (i) CHECK(all.events[i].upward != all.events[i - 1].upward);  // alternation
  }
}

TEST_CASE("integration error paths") {
  const OscillatorProblem d1 = builtin("D1");
  CHECK_THROWS_AS(integrate(d1, 0.3, 1.0, 0.0, -1.0, 1.0), error);   // eps > 0.25
  CHECK_THROWS_AS(integrate(d1, 0.01, 1.0, 0.0, -2.0, 1.0), error);  // span outside
  SolverOptions bad;
  bad.rel_tol = 0.5;
  CHECK_THROWS_AS(integrate(d1, 0.01, 1.0, 0.0, -1.0, 1.0, bad), error);

  // repulsive f = -y grows like cosh(tau) and overflows the state bound
  const OscillatorProblem rep{FunctionSpec::polynomial({1.0}), FunctionSpec::polynomial({0.0}),
                              FunctionSpec::polynomial({0.0, -1.0}), 0.0, 10.0};
  try {
    integrate(rep, 0.1, 1.0, 0.0, 0.0, 10.0);
    CHECK(false);
  } catch (const error& e) {
    CHECK(e.code() == errc::divergence);
  }
}
