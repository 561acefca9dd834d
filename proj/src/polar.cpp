#include "polar.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <sstream>

#include "error.hpp"
#include "parallel.hpp"

namespace spduff {

PolarState to_polar(const CriticalManifold& mani, const OscillatorProblem& p, int branch_index,
                    double epsilon, double t, double y, double y_prime) {
  const double a = p.a.eval(t);
  const double v = epsilon * a * a * y_prime;
  const double d = y - branch(mani, p, branch_index, t).u;
  const double r = std::hypot(d, v);
  if (r == 0.0) throw error(errc::polar_singularity, "state coincides with the branch point");
  return {r, std::atan2(-v, d)};
}

std::pair<double, double> from_polar(const CriticalManifold& mani, const OscillatorProblem& p,
                                     int branch_index, double t, const PolarState& s) {
  const double u = branch(mani, p, branch_index, t).u;
  return {u + s.r * std::cos(s.gamma), -s.r * std::sin(s.gamma)};
}

double fbar(const OscillatorProblem& p, const CriticalManifold& mani, int branch_index, double t,
            double y) {
  const double u = branch(mani, p, branch_index, t).u;
  const double d = y - u;
  if (std::abs(d) < 1e-8) return p.f.eval(u, 1);  // removable singularity
  return (p.f.eval(y) - p.m.eval(t)) / d;
}

double gamma_rate(const OscillatorProblem& p, const CriticalManifold& mani, int branch_index,
                  double epsilon, double t, const PolarState& s) {
  if (!(s.r >= 1e-12)) throw error(errc::invalid_argument, "radius below the 1e-12 floor");
  const BranchPoint bp = branch(mani, p, branch_index, t);
  if (!bp.du)
    throw error(errc::branch_derivative_unavailable,
                "u_i' unavailable next to a fold; charts must exclude folds");
  const double a = p.a.eval(t);
  const double ia2 = 1.0 / (a * a);
  const double cg = std::cos(s.gamma), sg = std::sin(s.gamma);
  const double y = bp.u + s.r * cg;
  const double d = y - bp.u;
  double fb;
  if (std::abs(d) < 1e-8)
    fb = p.f.eval(bp.u, 1);
  else
    fb = (p.f.eval(y) - p.m.eval(t)) / d;
  return (ia2 + cg * cg * (fb - ia2) + epsilon * (*bp.du) * sg / s.r) / epsilon;
}

GammaSeries unwrap_gamma(const Trajectory& traj, const CriticalManifold& mani,
                         const OscillatorProblem& p, int branch_index, double lo, double hi) {
  lo = std::max(lo, traj.t_front());
  hi = std::min(hi, traj.t_back());
  if (!(lo < hi)) throw error(errc::invalid_argument, "empty unwrap window");
  // Dense sampling: |gamma step| stays far below pi and finite-difference
  // slopes of the series resolve gamma' to better than 1e-4 relative even
  // where the rate swings hardest.
  const double dt = traj.epsilon() * 0.005;
  const int n = std::max(16, static_cast<int>(std::ceil((hi - lo) / dt)));
  GammaSeries series;
  series.t.reserve(n + 1);
  series.gamma.reserve(n + 1);
  double prev = 0;
  for (int i = 0; i <= n; ++i) {
    const double t = lo + (hi - lo) * i / n;
    const State s = traj.eval(t);
    const double a = p.a.eval(t);
    const double d = s.y - branch(mani, p, branch_index, t).u;
    const double v = a * s.w;  // v = eps a^2 y' = a w
    double g = std::atan2(-v, d);
    if (i > 0) g += 2.0 * M_PI * std::round((prev - g) / (2.0 * M_PI));
    series.t.push_back(t);
    series.gamma.push_back(g);
    prev = g;
  }
  return series;
}

namespace {

struct ChartSlice {  // cached per-t quantities on the constants grid
  double t, a, ia2, u, du, y_left, y_right, level;
  double u1, u3;  // outer branches (K2 only)
};

struct MinTrack {
  double value = std::numeric_limits<double>::infinity();
  double t = 0, y = 0, gamma = 0;
  const char* term = "";
  void update(double v, double t_, double y_, double g_, const char* term_) {
    if (v < value) {
      value = v;
      t = t_;
      y = y_;
      gamma = g_;
      term = term_;
    }
  }
  void merge(const MinTrack& o) {
    if (o.value < value) *this = o;
  }
};

}  // namespace

std::vector<ChartConstants> compute_constants(const OscillatorProblem& p,
                                              const CriticalManifold& mani,
                                              const ChartPartition& charts, double epsilon,
                                              double delta, const GridSpec& grid) {
  if (!(epsilon > 0)) throw error(errc::invalid_argument, "epsilon must be positive");
  if (grid.n_t < 2 || grid.n_y < 4 || grid.n_gamma < 2)
    throw error(errc::invalid_argument, "constants grid too small");
  PotentialContext ctx(p, delta);
  std::vector<double> gammas(grid.n_gamma), sin2(grid.n_gamma), cos2(grid.n_gamma);
  for (int i = 0; i < grid.n_gamma; ++i) {
    gammas[i] = M_PI * i / grid.n_gamma;
    sin2[i] = std::sin(gammas[i]) * std::sin(gammas[i]);
    cos2[i] = std::cos(gammas[i]) * std::cos(gammas[i]);
  }
  auto fbar_at = [&](const ChartSlice& s, double y) {
    const double d = y - s.u;
    if (std::abs(d) < 1e-8) return p.f.eval(s.u, 1);
    return (p.f.eval(y) - p.m.eval(s.t)) / d;
  };

  std::vector<ChartConstants> out;
  for (const auto& chart : charts.charts) {
    const int bi = chart_branch(chart.id);
    std::vector<ChartSlice> slices(grid.n_t);
    parallel_for(grid.n_t, [&](int i) {
      ChartSlice s;
      s.t = chart.lo + (chart.hi - chart.lo) * i / (grid.n_t - 1);
      s.a = p.a.eval(s.t);
      s.ia2 = 1.0 / (s.a * s.a);
      const BranchPoint bp = branch(mani, p, bi, s.t);
      if (!bp.du)
        throw error(errc::branch_derivative_unavailable,
                    "branch derivative unavailable inside a chart");
      s.u = bp.u;
      s.du = *bp.du;
      s.level = base_level(ctx, mani, s.t) + delta;
      const TurningPoints tp = turning_points(ctx, s.t, s.level);
      s.y_left = tp.y_left;
      s.y_right = tp.y_right;
      if (chart.id == ChartId::K2) {
        s.u1 = branch(mani, p, 1, s.t).u;
        s.u3 = branch(mani, p, 3, s.t).u;
      } else {
        s.u1 = s.u3 = s.u;
      }
      slices[i] = s;
    });

    ChartConstants cc;
    cc.chart_id = chart.id;
    cc.grid = grid;
    cc.epsilon = epsilon;

    double r_min = std::numeric_limits<double>::infinity();
    double eta = std::numeric_limits<double>::infinity();
    for (const ChartSlice& s : slices) {
      const double vb = s.level - potential(ctx, s.t, s.u);  // = delta along H0 + delta
      r_min = std::min({r_min, s.u - s.y_left, s.y_right - s.u,
                        std::sqrt(2.0) * s.a * std::sqrt(std::max(vb, 0.0))});
      eta = std::min(eta, 0.5 * s.ia2);
    }
    if (!(r_min > 0)) throw error(errc::epsilon_too_large, "r_min not positive on the chart");
    cc.r_min = r_min;
    cc.eta = eta;

    std::vector<MinTrack> mins(grid.n_t);
    if (chart.id != ChartId::K2) {
      parallel_for(grid.n_t, [&](int i) {
        const ChartSlice& s = slices[i];
        const double eterm = epsilon * std::abs(s.du) / r_min;
        MinTrack mt;
        for (int j = 0; j < grid.n_y; ++j) {
          const double y = s.y_left + (s.y_right - s.y_left) * j / (grid.n_y - 1);
          const double fb = fbar_at(s, y);
          for (int k = 0; k < grid.n_gamma; ++k)
            mt.update(s.ia2 * sin2[k] + fb * cos2[k] - eterm, s.t, y, gammas[k], "c_K");
        }
        mins[i] = mt;
      });
    } else {
      // delta1: largest radius around u2 on which the level-set-constrained
      // cos^2 factor keeps |cos^2 (fbar - 1/a^2)| <= 1/a^2 - eta.
      auto Ifun = [&](const ChartSlice& s, double y) {
        return p.f.integral_from_zero(y) - p.f.integral_from_zero(s.u) -
               p.m.eval(s.t) * (y - s.u);
      };
      double d1_hi = std::numeric_limits<double>::infinity();
      double d2_hi = std::numeric_limits<double>::infinity();
      for (const ChartSlice& s : slices) {
        d1_hi = std::min({d1_hi, s.u - s.u3, s.u1 - s.u});
        d2_hi = std::min({d2_hi, s.u3 - s.y_left, s.y_right - s.u1});
      }
      auto delta1_ok = [&](double d) {
        for (const ChartSlice& s : slices) {
          for (int j = 0; j <= 40; ++j) {
            const double y = s.u - d + 2.0 * d * j / 40;
            const double dy = y - s.u;
            if (std::abs(dy) < 1e-9) continue;
            const double denom = dy * dy + 2.0 * s.a * s.a * (delta - Ifun(s, y));
            const double lhs = dy * dy * std::abs(fbar_at(s, y) - s.ia2) / denom;
            if (lhs > s.ia2 - eta) return false;
          }
        }
        return true;
      };
      auto bracket = [&](const ChartSlice& s, double y) {
        const double dy = y - s.u;
        const double num = s.ia2 - fbar_at(s, y);
        const double den = s.ia2 + (delta - Ifun(s, y)) / (0.5 * dy * dy);
        return num / den;
      };
      auto delta2_ok = [&](double d2, double d1) {
        for (const ChartSlice& s : slices) {
          for (int side = 0; side < 2; ++side) {
            const double lo = side == 0 ? s.u3 - d2 : s.u + d1;
            const double hi = side == 0 ? s.u - d1 : s.u1 + d2;
            if (!(lo < hi)) continue;
            for (int j = 0; j <= 60; ++j) {
              const double y = lo + (hi - lo) * j / 60;
              if (std::abs(y - s.u) < 1e-9) continue;
              if (bracket(s, y) >= 1.0) return false;
            }
          }
        }
        return true;
      };
      double delta1 = 0, delta2 = 0;
      for (int k = 100; k >= 1; --k) {  // largest passing candidate
        const double cand = d1_hi * k / 100.0;
        if (delta1_ok(cand)) {
          delta1 = cand;
          break;
        }
      }
      for (int k = 100; k >= 1; --k) {
        const double cand = d2_hi * k / 100.0;
        if (delta2_ok(cand, delta1)) {
          delta2 = cand;
          break;
        }
      }
      cc.delta1 = delta1;
      cc.delta2 = delta2;

      parallel_for(grid.n_t, [&](int i) {
        const ChartSlice& s = slices[i];
        const double eterm = epsilon * std::abs(s.du) / r_min;
        MinTrack mt;
        mt.update(eta - eterm, s.t, s.u, 0.0, "c_K2_1");
        const int half = std::max(2, grid.n_y / 2);
        for (int side = 0; side < 2; ++side) {  // interval1: bracket estimate
          const double lo = side == 0 ? s.u3 - delta2 : s.u + delta1;
          const double hi = side == 0 ? s.u - delta1 : s.u1 + delta2;
          if (!(lo < hi)) continue;
          for (int j = 0; j <= half; ++j) {
            const double y = lo + (hi - lo) * j / half;
            if (std::abs(y - s.u) < 1e-9) continue;
            mt.update(s.ia2 - s.ia2 * bracket(s, y) - eterm, s.t, y, 0.0, "c_K2_2");
          }
        }
        const int quarter = std::max(2, grid.n_y / 4);
        for (int side = 0; side < 2; ++side) {  // outer shells: fbar_2 > 0
          const double lo = side == 0 ? s.y_left : s.u1 + delta2;
          const double hi = side == 0 ? s.u3 - delta2 : s.y_right;
          if (!(lo < hi)) continue;
          for (int j = 0; j <= quarter; ++j) {
            const double y = lo + (hi - lo) * j / quarter;
            const double fb = fbar_at(s, y);
            for (int k = 0; k < grid.n_gamma; ++k)
              mt.update(s.ia2 * sin2[k] + fb * cos2[k] - eterm, s.t, y, gammas[k], "c_K2_3");
          }
        }
        mins[i] = mt;
      });
    }

    MinTrack overall;
    for (const MinTrack& mt : mins) overall.merge(mt);
    cc.c_raw = overall.value;
    cc.argmin_t = overall.t;
    cc.argmin_y = overall.y;
    cc.argmin_gamma = overall.gamma;
    cc.argmin_term = overall.term;
    if (!(cc.c_raw > 0.0)) {
      std::ostringstream os;
      os << "grid minimum " << cc.c_raw << " <= 0 on chart " << chart_name(chart.id) << " ("
         << overall.term << " at t = " << overall.t << ", y = " << overall.y << ")";
      throw error(errc::epsilon_too_large, os.str());
    }
    cc.c = 0.9 * cc.c_raw;  // deflation absorbs grid error
    out.push_back(std::move(cc));
  }
  return out;
}

}  // namespace spduff
