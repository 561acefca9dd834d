#pragma once
#include <string>
#include <vector>

#include "energy.hpp"
#include "integrate.hpp"
#include "manifold.hpp"

namespace spduff {

/// State in the moving polar frame around branch u_i:
/// y = u_i + r cos(gamma), v = -r sin(gamma) with v = eps a^2 y' = a w.
struct PolarState {
  double r = 0;
  double gamma = 0;  // unbounded (unwrapped along trajectories)
};

PolarState to_polar(const CriticalManifold& mani, const OscillatorProblem& p, int branch_index,
                    double epsilon, double t, double y, double y_prime);
/// Returns (y, v).
std::pair<double, double> from_polar(const CriticalManifold& mani, const OscillatorProblem& p,
                                     int branch_index, double t, const PolarState& s);

/// Divided difference (f(y) - m(t)) / (y - u_i(t)); df/dy(u_i) at the branch.
double fbar(const OscillatorProblem& p, const CriticalManifold& mani, int branch_index, double t,
            double y);

/// gamma' = (1/eps)[1/a^2 + cos^2(gamma) (fbar - 1/a^2) + eps u_i' sin(gamma)/r].
double gamma_rate(const OscillatorProblem& p, const CriticalManifold& mani, int branch_index,
                  double epsilon, double t, const PolarState& s);

/// Continuously unwrapped gamma(t) along a trajectory, sampled densely.
struct GammaSeries {
  std::vector<double> t;
  std::vector<double> gamma;
};
GammaSeries unwrap_gamma(const Trajectory& traj, const CriticalManifold& mani,
                         const OscillatorProblem& p, int branch_index, double lo, double hi);

struct GridSpec {
  int n_t = 64;
  int n_y = 256;
  int n_gamma = 64;
};

struct ChartConstants {
  ChartId chart_id = ChartId::Full;
  double r_min = 0;
  double eta = 0;     // 0.5 min 1/a^2
  double delta1 = 0;  // K2 only
  double delta2 = 0;  // K2 only
  double c = 0;       // deflated: 0.9 x grid minimum
  double c_raw = 0;   // grid minimum before deflation
  GridSpec grid;
  double epsilon = 0;
  // arg-min of the deciding expression
  double argmin_t = 0, argmin_y = 0, argmin_gamma = 0;
  std::string argmin_term;  // which of the minimized expressions decided c
};

/// Chart constants r_min, eta, delta1, delta2 and c_{K_i}; throws
/// EpsilonTooLarge (carrying the offending grid point) when the raw grid
/// minimum is not positive.
std::vector<ChartConstants> compute_constants(const OscillatorProblem& p,
                                              const CriticalManifold& mani,
                                              const ChartPartition& charts, double epsilon,
                                              double delta, const GridSpec& grid = {});

}  // namespace spduff
