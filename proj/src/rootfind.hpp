#pragma once
#include <functional>
#include <vector>

namespace spduff {

/// Bisection on a bracketing interval [lo, hi] with g(lo)*g(hi) <= 0,
/// followed by a few Newton polish steps when a derivative is supplied.
/// Returns the root; |g(root)| is driven to rounding level.
double solve_bracketed(const std::function<double(double)>& g, double lo, double hi,
                       const std::function<double(double)>& dg = nullptr);

struct ScanResult {
  std::vector<double> roots;     // simple (sign-change) roots, ascending
  std::vector<double> tangents;  // grid dips |g| <= tol without a sign change
};

/// Scan [lo, hi] on n points for sign changes of g; bisect each bracket.
/// tangent_tol flags near-tangencies (local |g| minima below the tolerance).
ScanResult scan_roots(const std::function<double(double)>& g, double lo, double hi, int n,
                      double tangent_tol, const std::function<double(double)>& dg = nullptr);

}  // namespace spduff
