#pragma once
#include <optional>
#include <vector>

#include "problem.hpp"

namespace spduff {

struct Fold {
  double y = 0;                  // state value at the fold
  double t = 0;                  // time phi(y) at the fold
  double second_derivative = 0;  // phi'' there; |phi''| > nondegeneracy tol
  bool is_minimum = false;       // minimum of phi (vs maximum)
};

inline constexpr double kFoldNondegeneracyTol = 1e-8;

/// Geometry of S = {f(y) = m(t), w = 0}. Either S-shaped with two folds and
/// three branches u1 >= y_max, y_min <= u2 <= y_max, u3 <= y_min, or (when f
/// is monotone and f(y) = m(t) has a unique root for every t) a single branch
/// covering the whole interval.
struct CriticalManifold {
  bool s_shaped = false;
  Fold fold_min, fold_max;  // valid iff s_shaped; fold_min.y < fold_max.y
  double t_min = 0, t_max = 0;
  double y_lo = 0, y_hi = 0;  // root-search hull
};

struct BranchRoots {
  std::vector<double> roots;     // ascending, multiplicity-1
  std::vector<double> tangents;  // fold-tangency locations (flag, not error)
};

struct BranchPoint {
  double u = 0;
  std::optional<double> du;  // m'/f'(u); empty when fold-adjacent (|f'(u)| < 1e-6)
};

enum class ChartId { K1, K2, K3, Full };
const char* chart_name(ChartId id);
/// Branch index paired with a chart (K1 -> u1, K2 -> u2, K3 -> u3, Full -> 1).
int chart_branch(ChartId id);

struct ChartPartition {
  struct Chart {
    ChartId id;
    double lo = 0, hi = 0;
  };
  std::vector<Chart> charts;
  double margin = 0;
};

/// Root-search hull: all roots of f(y) = m(t) at t in {t_begin, t_end},
/// extended by 50 percent of the spanned width.
std::pair<double, double> state_hull(const OscillatorProblem& p);

/// All real roots of f(y) = m(t) on the hull.
BranchRoots branch_roots(const OscillatorProblem& p, double t);

/// Locates the two non-degenerate critical points of phi = m^{-1} o f inside
/// the data window; throws AssumptionA1Violated otherwise.
CriticalManifold find_folds(const OscillatorProblem& p);

/// find_folds, falling back to the single-branch manifold when f(y) = m(t)
/// has exactly one root for every t (the fold search finds nothing).
CriticalManifold build_manifold(const OscillatorProblem& p);

bool branch_domain_contains(const CriticalManifold& mani, const OscillatorProblem& p, int branch,
                            double t);

/// u_i(t) with the implicit-differentiation derivative m'(t)/f'(u_i).
BranchPoint branch(const CriticalManifold& mani, const OscillatorProblem& p, int branch, double t);

/// Grid verification of (A2) phi' != 0 away from the folds and (A3)
/// df/dy < 0 on S_m, > 0 on S_a and S_b. Failures go into the report.
ValidationReport check_A1_A3(const OscillatorProblem& p, const CriticalManifold& mani, int grid_n,
                             unsigned long long seed = 0x5eed5eedULL);

/// margin = margin_fraction * (t_end - t_begin); K1 = [t_B, t_min - margin],
/// K2 = [t_min + margin, t_max - margin], K3 = [t_max + margin, t_E].
ChartPartition build_charts(const CriticalManifold& mani, const OscillatorProblem& p,
                            double margin_fraction);

}  // namespace spduff
