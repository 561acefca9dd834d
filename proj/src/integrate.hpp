#pragma once
#include <array>
#include <vector>

#include "manifold.hpp"
#include "problem.hpp"

namespace spduff {

struct SolverOptions {
  double rel_tol = 1e-9;
  double abs_tol = 1e-11;
  double max_step_fast = 0.025;  // in fast time tau
  bool dense_output = true;
};

struct State {
  double y = 0;
  double w = 0;  // w = eps * a * y'
};

/// Dense-output solution of the fast-time system
///   dy/dtau = w/a(t),  dw/dtau = (m(t) - f(y))/a(t) - eps (a'/a) w,
/// with the slow variable advanced exactly as t = t0 + eps * tau.
class Trajectory {
public:
  struct Sample {
    double t, y, w;
  };
  struct StepRecord {  // quartic dense interpolant of one accepted step
    double tau, h;
    std::array<double, 2> c1, c2, c3, c4, c5;
  };

  double epsilon() const { return epsilon_; }
  double t_front() const { return t0_; }
  double t_back() const { return t0_ + epsilon_ * tau_end_; }
  const std::vector<Sample>& samples() const { return samples_; }

  State eval(double t) const;
  /// (dy/dt, dw/dt) from the interpolant polynomial.
  State eval_derivative(double t) const;

private:
  friend Trajectory integrate(const OscillatorProblem&, double, double, double, double, double,
                              const SolverOptions&);
  double epsilon_ = 0, t0_ = 0, tau_end_ = 0;
  std::vector<StepRecord> steps_;
  std::vector<Sample> samples_;
  const StepRecord& locate(double tau) const;
};

Trajectory integrate(const OscillatorProblem& p, double epsilon, double y0, double w0, double t0,
                     double t1, const SolverOptions& opts = {});

struct EnergySample {
  double t = 0;
  double H = 0;         // w^2/2 + V(t, y)
  double residual = 0;  // dH/dt + (a'/a) w^2 + m'(t) y, zero along exact paths
};

std::vector<EnergySample> energy_along(const Trajectory& traj, const OscillatorProblem& p,
                                       int n_samples = 2048);

struct CrossingEvent {
  double t_star = 0;
  int branch_index = 1;
  bool upward = false;  // y - u_i passes from negative to positive
  double residual = 0;  // |y(t*) - u_i(t*)|
};

struct CrossingScan {
  std::vector<CrossingEvent> events;
  int tangential_near_zeros = 0;  // |g| dips below tolerance without sign change
};

/// Sign changes of y(t) - u_i(t) on the chart, located on the dense output.
CrossingScan detect_crossings(const Trajectory& traj, const CriticalManifold& mani,
                              const OscillatorProblem& p, int branch_index, double chart_lo,
                              double chart_hi);

}  // namespace spduff
