#pragma once
// Test-only oracles, independent of the library's solver paths.
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace oracles {

/// Central finite difference of a scalar function.
inline double central_diff(const std::function<double(double)>& f, double x, double h = 1e-6) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

/// Brute-force root finder: dense scan + plain bisection. Slow on purpose.
inline std::vector<double> scan_bisect(const std::function<double(double)>& f, double lo,
                                       double hi, int n = 20000) {
  std::vector<double> roots;
  double xp = lo, fp = f(lo);
  for (int i = 1; i <= n; ++i) {
    const double x = lo + (hi - lo) * i / n;
    const double fx = f(x);
    if (fp == 0.0) roots.push_back(xp);
    if (fp * fx < 0.0) {
      double a = xp, b = x, fa = fp;
      for (int it = 0; it < 200; ++it) {
        const double m = 0.5 * (a + b);
        if (m == a || m == b) break;
        const double fm = f(m);
        if (fm == 0.0) {
          a = b = m;
          break;
        }
        (fa * fm < 0.0 ? b : a) = m;
        if (!(fa * fm < 0.0)) fa = fm;
      }
      roots.push_back(0.5 * (a + b));
    }
    xp = x;
    fp = fx;
  }
  return roots;
}

/// Classical fixed-step RK4 on an autonomous-in-time 2D system.
struct Rk4Result {
  std::vector<double> ts;  // integration variable
  std::vector<double> y1, y2;
};

inline Rk4Result rk4(const std::function<void(double, const double*, double*)>& rhs, double t0,
                     double t1, double y1_0, double y2_0, double h) {
  Rk4Result out;
  const long n = static_cast<long>(std::ceil((t1 - t0) / h));
  double y[2] = {y1_0, y2_0};
  out.ts.push_back(t0);
  out.y1.push_back(y[0]);
  out.y2.push_back(y[1]);
  double t = t0;
  for (long i = 0; i < n; ++i) {
    const double step = std::min(h, t1 - t);
    double k1[2], k2[2], k3[2], k4[2], tmp[2];
    rhs(t, y, k1);
    for (int k = 0; k < 2; ++k) tmp[k] = y[k] + 0.5 * step * k1[k];
    rhs(t + 0.5 * step, tmp, k2);
    for (int k = 0; k < 2; ++k) tmp[k] = y[k] + 0.5 * step * k2[k];
    rhs(t + 0.5 * step, tmp, k3);
    for (int k = 0; k < 2; ++k) tmp[k] = y[k] + step * k3[k];
    rhs(t + step, tmp, k4);
    for (int k = 0; k < 2; ++k)
      y[k] += step / 6.0 * (k1[k] + 2 * k2[k] + 2 * k3[k] + k4[k]);
    t += step;
    out.ts.push_back(t);
    out.y1.push_back(y[0]);
    out.y2.push_back(y[1]);
  }
  return out;
}

/// Period of the frozen-t associated system measured from a brute-force RK4
/// run: time between successive downward w = 0 crossings.
inline double frozen_period(const std::function<double(double)>& f_of_y, double a, double y_start,
                            double h = 2e-5, double tau_max = 400.0) {
  auto rhs = [&](double, const double* s, double* d) {
    d[0] = s[1] / a;
    d[1] = -f_of_y(s[0]) / a;
  };
  double y[2] = {y_start, 0.0};
  double tau = 0.0, prev_w = 0.0, first = -1.0;
  bool armed = false;
  while (tau < tau_max) {
    double k1[2], k2[2], k3[2], k4[2], tmp[2];
    rhs(tau, y, k1);
    for (int k = 0; k < 2; ++k) tmp[k] = y[k] + 0.5 * h * k1[k];
    rhs(tau, tmp, k2);
    for (int k = 0; k < 2; ++k) tmp[k] = y[k] + 0.5 * h * k2[k];
    rhs(tau, tmp, k3);
    for (int k = 0; k < 2; ++k) tmp[k] = y[k] + h * k3[k];
    rhs(tau, tmp, k4);
    for (int k = 0; k < 2; ++k) y[k] += h / 6.0 * (k1[k] + 2 * k2[k] + 2 * k3[k] + k4[k]);
    tau += h;
    if (armed && prev_w > 0.0 && y[1] <= 0.0) {
      // linear interpolation of the crossing instant
      const double frac = prev_w / (prev_w - y[1]);
      const double tc = tau - h + frac * h;
      if (first < 0)
        first = tc;
      else
        return tc - first;
    }
    if (tau > 0.2) armed = true;  // skip the departure from the start point
    prev_w = y[1];
  }
  throw std::runtime_error("frozen_period: no full revolution found");
}

}  // namespace oracles
