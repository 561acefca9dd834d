#include "rootfind.hpp"

#include <cmath>

#include "error.hpp"

namespace spduff {

double solve_bracketed(const std::function<double(double)>& g, double lo, double hi,
                       const std::function<double(double)>& dg) {
  double flo = g(lo), fhi = g(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (flo * fhi > 0.0) throw error(errc::invalid_argument, "root bracket does not change sign");
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;  // bracket at machine resolution
    const double fm = g(mid);
    if (fm == 0.0) return mid;
    if (flo * fm < 0.0) {
      hi = mid;
      fhi = fm;
    } else {
      lo = mid;
      flo = fm;
    }
  }
  double x = 0.5 * (lo + hi);
  if (dg) {
    double fx = g(x);
    for (int it = 0; it < 4; ++it) {
      const double d = dg(x);
      if (d == 0.0 || !std::isfinite(d)) break;
      const double xn = x - fx / d;
      if (!(xn >= lo && xn <= hi)) break;
      const double fn = g(xn);
      if (std::abs(fn) >= std::abs(fx)) break;
      x = xn;
      fx = fn;
      if (fx == 0.0) break;
    }
  }
  return x;
}

ScanResult scan_roots(const std::function<double(double)>& g, double lo, double hi, int n,
                      double tangent_tol, const std::function<double(double)>& dg) {
  if (n < 2) throw error(errc::invalid_argument, "scan grid needs at least 2 points");
  ScanResult out;
  std::vector<double> xs(n), fs(n);
  for (int i = 0; i < n; ++i) {
    xs[i] = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
    fs[i] = g(xs[i]);
  }
  for (int i = 0; i + 1 < n; ++i) {
    if (fs[i] == 0.0) {
      if (out.roots.empty() || std::abs(out.roots.back() - xs[i]) > 0) out.roots.push_back(xs[i]);
      continue;
    }
    if (fs[i] * fs[i + 1] < 0.0) out.roots.push_back(solve_bracketed(g, xs[i], xs[i + 1], dg));
  }
  if (fs[n - 1] == 0.0) out.roots.push_back(xs[n - 1]);
  // interior |g| dips below tangent_tol that are not sign changes
  for (int i = 1; i + 1 < n; ++i) {
    const double a = std::abs(fs[i]);
    if (a <= tangent_tol && a <= std::abs(fs[i - 1]) && a <= std::abs(fs[i + 1]) &&
        fs[i - 1] * fs[i] > 0.0 && fs[i] * fs[i + 1] > 0.0) {
      bool near_root = false;
      for (double r : out.roots)
        if (std::abs(r - xs[i]) <= 2.0 * (hi - lo) / (n - 1)) near_root = true;
      if (!near_root) out.tangents.push_back(xs[i]);
    }
  }
  return out;
}

}  // namespace spduff
