#include "energy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "error.hpp"
#include "rootfind.hpp"
#include "util.hpp"

namespace spduff {

PotentialContext::PotentialContext(OscillatorProblem problem, double delta_offset)
    : p(std::move(problem)), delta(delta_offset) {
  if (!(delta > 0.0)) throw error(errc::invalid_delta, "Delta must be > 0");
  std::tie(y_scan_lo, y_scan_hi) = state_hull(p);
}

double potential(const PotentialContext& ctx, double t, double y) {
  return ctx.p.f.integral_from_zero(y) - ctx.p.m.eval(t) * y;
}

double base_level(const PotentialContext& ctx, const CriticalManifold& mani, double t) {
  int idx = 1;
  if (mani.s_shaped) {
    if (t < mani.t_min)
      idx = 1;
    else if (t <= mani.t_max)
      idx = 2;
    else
      idx = 3;
  }
  const double u = branch(mani, ctx.p, idx, t).u;
  return potential(ctx, t, u);
}

TurningPoints turning_points(const PotentialContext& ctx, double t, double level) {
  auto g = [&](double y) { return potential(ctx, t, y) - level; };
  ScanResult res = scan_roots(g, ctx.y_scan_lo, ctx.y_scan_hi, 4096, 0.0,
                              [&](double y) { return ctx.p.f.eval(y) - ctx.p.m.eval(t); });
  if (res.roots.size() < 2) {
    std::ostringstream os;
    os << "V(t, .) = " << level << " has " << res.roots.size()
       << " roots in the scan window at t = " << t;
    throw error(errc::no_turning_points, os.str());
  }
  return {res.roots.front(), res.roots.back(), level, t};
}

double chi(const PotentialContext& ctx, const CriticalManifold& mani, double t, double y) {
  const double u2 = branch(mani, ctx.p, 2, t).u;
  const double d = y - u2;
  if (std::abs(d) < 1e-6) return 0.0;  // removable limit at u2
  const double mt = ctx.p.m.eval(t);
  const double I = ctx.p.f.integral_from_zero(y) - ctx.p.f.integral_from_zero(u2) - mt * d;
  return 2.0 * (ctx.p.f.eval(y) - mt) / d - 4.0 * I / (d * d);
}

ValidationReport check_A4(const PotentialContext& ctx, const CriticalManifold& mani,
                          const ChartPartition& charts, const A4Grid& grid) {
  if (!mani.s_shaped)
    throw error(errc::invalid_argument, "(A4) concerns the middle chart of an S-shaped manifold");
  const ChartPartition::Chart* k2 = nullptr;
  for (const auto& c : charts.charts)
    if (c.id == ChartId::K2) k2 = &c;
  if (!k2) throw error(errc::invalid_argument, "chart partition has no K2");

  ValidationReport rep;
  SplitMix64 rng(grid.seed);
  for (int i = 0; i <= grid.n_t; ++i) {
    double t = k2->lo + (k2->hi - k2->lo) * i / grid.n_t;
    if (grid.jitter && i > 0 && i < grid.n_t)
      t += rng.uniform(-0.3, 0.3) * (k2->hi - k2->lo) / grid.n_t;
    const double u1 = branch(mani, ctx.p, 1, t).u;
    const double u2 = branch(mani, ctx.p, 2, t).u;
    const double u3 = branch(mani, ctx.p, 3, t).u;
    for (int j = 0; j <= grid.n_y; ++j) {
      double y = u3 + (u1 - u3) * j / grid.n_y;
      if (grid.jitter && j > 0 && j < grid.n_y) y += rng.uniform(-0.3, 0.3) * (u1 - u3) / grid.n_y;
      const double d = y - u2;
      if (std::abs(d) < 1e-6) continue;  // puncture at u2
      const double margin = chi(ctx, mani, t, y) * d * d + 4.0 * ctx.delta;
      if (!(margin > 0.0)) {
        std::ostringstream os;
        os << "chi = " << chi(ctx, mani, t, y) << " <= -4 Delta / (y - u2)^2 = "
           << -4.0 * ctx.delta / (d * d) << " (margin " << margin << ")";
        rep.add("A4", t, os.str() + " at y = " + std::to_string(y));
      }
    }
  }
  return rep;
}

namespace {

// 8-point Gauss-Legendre rule on [-1, 1].
constexpr double kGlX[8] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                            -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                            0.7966664774136267,  0.9602898564975363};
constexpr double kGlW[8] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                            0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                            0.2223810344533745, 0.1012285362903763};

template <class F>
double composite_gl(const F& g, double a, double b, int panels) {
  double total = 0;
  for (int k = 0; k < panels; ++k) {
    const double lo = a + (b - a) * k / panels;
    const double hi = a + (b - a) * (k + 1) / panels;
    double s = 0;
    for (int j = 0; j < 8; ++j) s += kGlW[j] * g(0.5 * (hi - lo) * kGlX[j] + 0.5 * (hi + lo));
    total += 0.5 * (hi - lo) * s;
  }
  return total;
}

}  // namespace

ActionFrequency action_frequency(const PotentialContext& ctx, double t, double level, Well well) {
  auto Vt = [&](double y) { return potential(ctx, t, y); };
  auto g = [&](double y) { return Vt(y) - level; };
  ScanResult res = scan_roots(g, ctx.y_scan_lo, ctx.y_scan_hi, 4096, 0.0,
                              [&](double y) { return ctx.p.f.eval(y) - ctx.p.m.eval(t); });
  const std::vector<double>& roots = res.roots;
  if (roots.size() < 2)
    throw error(errc::no_turning_points, "level set has fewer than two turning points");

  // Critical points of V(t, .): equilibria of the associated system.
  BranchRoots eq = branch_roots(ctx.p, t);
  std::vector<double> minima, maxima;
  for (double y : eq.roots) {
    if (ctx.p.f.eval(y, 1) > 0)
      minima.push_back(y);
    else
      maxima.push_back(y);
  }
  const double lvl_scale = std::max(1.0, std::abs(level));
  for (double yb : maxima)
    if (std::abs(level - Vt(yb)) <= 1e-10 * lvl_scale)
      throw error(errc::separatrix_level, "level sits on a barrier top");

  double yl = 0, yr = 0;
  if (well == Well::outer) {
    yl = roots.front();
    yr = roots.back();
  } else {
    if (minima.empty()) throw error(errc::no_turning_points, "no potential well at this time");
    const double yw = well == Well::left ? minima.front() : minima.back();
    // Adjacent level-set roots around the chosen well bottom.
    auto it = std::upper_bound(roots.begin(), roots.end(), yw);
    if (it == roots.begin() || it == roots.end())
      throw error(errc::no_turning_points, "well bottom above the requested level");
    yr = *it;
    yl = *(it - 1);
  }
  // The segment must be a closed orbit: V < level strictly inside.
  for (int i = 1; i < 64; ++i) {
    const double y = yl + (yr - yl) * i / 64.0;
    if (Vt(y) >= level)
      throw error(errc::no_turning_points, "V reaches the level inside the segment; not a closed orbit");
  }

  const double a = ctx.p.a.eval(t);
  const double mid = 0.5 * (yl + yr);
  const double sL = std::sqrt(mid - yl), sR = std::sqrt(yr - mid);
  auto wfun = [&](double y) { return std::sqrt(std::max(2.0 * (level - Vt(y)), 0.0)); };
  // y = yl + s^2 (left half) and y = yr - s^2 (right half) kill the
  // inverse-square-root endpoint singularities.
  const double Tleft = composite_gl([&](double s) { return 2.0 * s / wfun(yl + s * s); }, 0, sL, 8);
  const double Tright = composite_gl([&](double s) { return 2.0 * s / wfun(yr - s * s); }, 0, sR, 8);
  const double Ileft = composite_gl([&](double s) { return 2.0 * s * wfun(yl + s * s); }, 0, sL, 8);
  const double Iright = composite_gl([&](double s) { return 2.0 * s * wfun(yr - s * s); }, 0, sR, 8);

  ActionFrequency out;
  out.period = 2.0 * a * (Tleft + Tright);
  out.action = (Ileft + Iright) / M_PI;
  out.omega = 2.0 * M_PI / out.period;
  return out;
}

}  // namespace spduff
