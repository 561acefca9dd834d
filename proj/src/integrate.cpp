#include "integrate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "error.hpp"

namespace spduff {

namespace {

// Dormand-Prince 5(4) pair, FSAL, with the standard quartic dense output.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// b - bhat (error estimate weights)
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

using V2 = std::array<double, 2>;

}  // namespace

const Trajectory::StepRecord& Trajectory::locate(double tau) const {
  // binary search for the step containing tau
  std::size_t lo = 0, hi = steps_.size();
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    if (steps_[mid].tau <= tau)
      lo = mid;
    else
      hi = mid;
  }
  return steps_[lo];
}

State Trajectory::eval(double t) const {
  if (steps_.empty())
    throw error(errc::invalid_argument, "trajectory was integrated without dense output");
  const double tau = (t - t0_) / epsilon_;
  if (tau < -1e-9 || tau > tau_end_ * (1 + 1e-12) + 1e-9)
    throw error(errc::invalid_argument, "evaluation time outside the trajectory span");
  const StepRecord& s = locate(std::clamp(tau, 0.0, tau_end_));
  const double th = std::clamp((tau - s.tau) / s.h, 0.0, 1.0);
  const double th1 = 1.0 - th;
  State out;
  out.y = s.c1[0] + th * (s.c2[0] + th1 * (s.c3[0] + th * (s.c4[0] + th1 * s.c5[0])));
  out.w = s.c1[1] + th * (s.c2[1] + th1 * (s.c3[1] + th * (s.c4[1] + th1 * s.c5[1])));
  return out;
}

State Trajectory::eval_derivative(double t) const {
  if (steps_.empty())
    throw error(errc::invalid_argument, "trajectory was integrated without dense output");
  const double tau = (t - t0_) / epsilon_;
  const StepRecord& s = locate(std::clamp(tau, 0.0, tau_end_));
  const double th = std::clamp((tau - s.tau) / s.h, 0.0, 1.0);
  const double th1 = 1.0 - th;
  State out;  // dP/dtheta / (h eps) = d/dt
  for (int k = 0; k < 2; ++k) {
    const double d = s.c2[k] + s.c3[k] * (1 - 2 * th) + s.c4[k] * th * (2 - 3 * th) +
                     s.c5[k] * 2 * th * th1 * (1 - 2 * th);
    (k == 0 ? out.y : out.w) = d / (s.h * epsilon_);
  }
  return out;
}

Trajectory integrate(const OscillatorProblem& p, double epsilon, double y0, double w0, double t0,
                     double t1, const SolverOptions& opts) {
  if (!(epsilon > 0.0 && epsilon <= 0.25))
    throw error(errc::invalid_argument, "epsilon must lie in (0, 0.25]");
  const double span_tol = 1e-12 * (p.t_end - p.t_begin);
  if (t0 < p.t_begin - span_tol || t1 > p.t_end + span_tol || !(t0 < t1))
    throw error(errc::invalid_argument, "span must be inside [t_begin, t_end]");
  if (!(opts.rel_tol > 0 && opts.rel_tol <= 1e-2) || !(opts.abs_tol > 0 && opts.abs_tol <= 1e-2))
    throw error(errc::invalid_argument, "tolerances must lie in (0, 1e-2]");
  if (!(opts.max_step_fast > 0)) throw error(errc::invalid_argument, "max_step_fast must be > 0");

  auto rhs = [&](double tau, const V2& s, V2& out) {
    const double t = t0 + epsilon * tau;
    const double a = p.a.eval(t);
    out[0] = s[1] / a;
    out[1] = (p.m.eval(t) - p.f.eval(s[0])) / a - epsilon * p.a.eval(t, 1) / a * s[1];
  };

  Trajectory traj;
  traj.epsilon_ = epsilon;
  traj.t0_ = t0;
  traj.tau_end_ = (t1 - t0) / epsilon;

  V2 y{y0, w0};
  double tau = 0;
  double h = std::min(opts.max_step_fast, traj.tau_end_);
  const double state_scale = std::max({1.0, std::abs(y0), std::abs(w0)});
  const double blowup = 1e10 * state_scale;

  V2 k1, k2, k3, k4, k5, k6, k7, tmp;
  rhs(tau, y, k1);
  traj.samples_.push_back({t0, y0, w0});

  while (tau < traj.tau_end_) {
    const double remaining = traj.tau_end_ - tau;
    if (remaining <= 4e-15 * std::max(1.0, traj.tau_end_)) break;  // reached up to rounding
    bool final_step = false;
    if (h >= remaining) {
      h = remaining;
      final_step = true;
    }
    if (h < 1e-14) throw error(errc::stiffness_failure, "step size underflow in fast time");

    for (int k = 0; k < 2; ++k) tmp[k] = y[k] + h * a21 * k1[k];
    rhs(tau + c2 * h, tmp, k2);
    for (int k = 0; k < 2; ++k) tmp[k] = y[k] + h * (a31 * k1[k] + a32 * k2[k]);
    rhs(tau + c3 * h, tmp, k3);
    for (int k = 0; k < 2; ++k) tmp[k] = y[k] + h * (a41 * k1[k] + a42 * k2[k] + a43 * k3[k]);
    rhs(tau + c4 * h, tmp, k4);
    for (int k = 0; k < 2; ++k)
      tmp[k] = y[k] + h * (a51 * k1[k] + a52 * k2[k] + a53 * k3[k] + a54 * k4[k]);
    rhs(tau + c5 * h, tmp, k5);
    for (int k = 0; k < 2; ++k)
      tmp[k] = y[k] + h * (a61 * k1[k] + a62 * k2[k] + a63 * k3[k] + a64 * k4[k] + a65 * k5[k]);
    rhs(tau + h, tmp, k6);
    V2 ynew;
    for (int k = 0; k < 2; ++k)
      ynew[k] = y[k] + h * (b1 * k1[k] + b3 * k3[k] + b4 * k4[k] + b5 * k5[k] + b6 * k6[k]);
    rhs(tau + h, ynew, k7);

    double err = 0;
    for (int k = 0; k < 2; ++k) {
      const double est =
          h * (e1 * k1[k] + e3 * k3[k] + e4 * k4[k] + e5 * k5[k] + e6 * k6[k] + e7 * k7[k]);
      const double sc = opts.abs_tol + opts.rel_tol * std::max(std::abs(y[k]), std::abs(ynew[k]));
      err += (est / sc) * (est / sc);
    }
    err = std::sqrt(0.5 * err);

    if (!std::isfinite(err) || !std::isfinite(ynew[0]) || !std::isfinite(ynew[1]) ||
        std::abs(ynew[0]) > blowup || std::abs(ynew[1]) > blowup) {
      if (!std::isfinite(err) && h > 1e-13) {  // retry smaller before giving up
        h *= 0.1;
        continue;
      }
      throw error(errc::divergence, "state overflow during integration");
    }

    if (err <= 1.0) {  // accept
      if (opts.dense_output) {
        Trajectory::StepRecord rec;
        rec.tau = tau;
        rec.h = h;
        for (int k = 0; k < 2; ++k) {
          const double dy = ynew[k] - y[k];
          rec.c1[k] = y[k];
          rec.c2[k] = dy;
          rec.c3[k] = h * k1[k] - dy;
          rec.c4[k] = dy - h * k7[k] - rec.c3[k];
          rec.c5[k] = h * (d1 * k1[k] + d3 * k3[k] + d4 * k4[k] + d5 * k5[k] + d6 * k6[k] +
                           d7 * k7[k]);
        }
        traj.steps_.push_back(rec);
      }
      tau = final_step ? traj.tau_end_ : tau + h;
      y = ynew;
      k1 = k7;  // FSAL
      traj.samples_.push_back({t0 + epsilon * tau, y[0], y[1]});
    }
    const double fac = std::clamp(0.9 * std::pow(std::max(err, 1e-10), -0.2), 0.2, 5.0);
    h = std::min(h * fac, opts.max_step_fast);
  }
  return traj;
}

std::vector<EnergySample> energy_along(const Trajectory& traj, const OscillatorProblem& p,
                                       int n_samples) {
  if (n_samples < 2) throw error(errc::invalid_argument, "need at least 2 energy samples");
  std::vector<EnergySample> out;
  out.reserve(n_samples);
  const double t0 = traj.t_front(), t1 = traj.t_back();
  for (int i = 0; i < n_samples; ++i) {
    const double t = t0 + (t1 - t0) * i / (n_samples - 1);
    const State s = traj.eval(t);
    const State ds = traj.eval_derivative(t);
    const double a = p.a.eval(t), ap = p.a.eval(t, 1);
    const double mt = p.m.eval(t), mp = p.m.eval(t, 1);
    EnergySample es;
    es.t = t;
    es.H = 0.5 * s.w * s.w + p.f.integral_from_zero(s.y) - mt * s.y;
    // dH/dt via the interpolant derivative; the exact-path identity makes
    // this cancel against (a'/a) w^2 + m' y.
    const double dH = s.w * ds.w + (p.f.eval(s.y) - mt) * ds.y - mp * s.y;
    es.residual = dH + ap / a * s.w * s.w + mp * s.y;
    out.push_back(es);
  }
  return out;
}

CrossingScan detect_crossings(const Trajectory& traj, const CriticalManifold& mani,
                              const OscillatorProblem& p, int branch_index, double chart_lo,
                              double chart_hi) {
  if (!branch_domain_contains(mani, p, branch_index, chart_lo) ||
      !branch_domain_contains(mani, p, branch_index, chart_hi))
    throw error(errc::branch_domain, "chart must lie inside the branch domain");
  const double lo = std::max(chart_lo, traj.t_front());
  const double hi = std::min(chart_hi, traj.t_back());
  CrossingScan scan;
  if (!(lo < hi)) return scan;

  auto g = [&](double t) { return traj.eval(t).y - branch(mani, p, branch_index, t).u; };

  // Sample density: several points per fast-time unit; u_i moves slowly, so
  // zeros of g are separated by O(eps) in t and this cannot skip a pair.
  const double dt = traj.epsilon() * 0.5;
  const int n = std::max(8, static_cast<int>(std::ceil((hi - lo) / dt)));
  double prev_t = lo, prev_g = g(lo);
  double scale = 1.0;
  for (int i = 1; i <= n; ++i) {
    const double t = lo + (hi - lo) * i / n;
    const double gt = g(t);
    scale = std::max({scale, std::abs(traj.eval(t).y)});
    if (prev_g == 0.0) {
      // grid point exactly on the branch: count once, direction from the next sample
      scan.events.push_back({prev_t, branch_index, gt > 0, 0.0});
    } else if (prev_g * gt < 0.0) {
      double a = prev_t, b = t, fa = prev_g;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (a + b);
        if (mid == a || mid == b) break;
        const double fm = g(mid);
        if (fm == 0.0) {
          a = b = mid;
          break;
        }
        if (fa * fm < 0.0)
          b = mid;
        else {
          a = mid;
          fa = fm;
        }
      }
      const double tstar = 0.5 * (a + b);
      scan.events.push_back({tstar, branch_index, gt > 0, std::abs(g(tstar))});
    } else if (std::abs(gt) < 1e-10 * scale && i < n) {
      // tangential near-zero candidate: local |g| dip without sign change
      const double tnext = lo + (hi - lo) * (i + 1) / n;
      if (std::abs(gt) <= std::abs(prev_g) && std::abs(gt) <= std::abs(g(tnext)))
        ++scan.tangential_near_zeros;
    }
    prev_t = t;
    prev_g = gt;
  }
  return scan;
}

}  // namespace spduff
