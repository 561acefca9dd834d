#pragma once
#include "manifold.hpp"
#include "problem.hpp"

namespace spduff {

/// Potential machinery around V(t,y) = int_0^y f - m(t) y. Holds the energy
/// offset Delta (> 0) and the state scan window used for turning points.
struct PotentialContext {
  PotentialContext(OscillatorProblem problem, double delta_offset);
  OscillatorProblem p;
  double delta = 0;
  double y_scan_lo = 0, y_scan_hi = 0;
};

struct TurningPoints {
  double y_left = 0, y_right = 0;
  double level = 0, t = 0;
};

double potential(const PotentialContext& ctx, double t, double y);

/// H^0(t): V along u1 on [t_B, t_min), u2 on [t_min, t_max], u3 past t_max.
double base_level(const PotentialContext& ctx, const CriticalManifold& mani, double t);

/// Outermost roots of V(t, y) = level on the scan window.
TurningPoints turning_points(const PotentialContext& ctx, double t, double level);

/// chi(t,y) via the exact expansion 2 fbar_2 - 4 I / (y-u2)^2 with
/// I = int_{u2}^y (f - m); returns the limit 0 within 1e-6 of u2.
double chi(const PotentialContext& ctx, const CriticalManifold& mani, double t, double y);

struct A4Grid {
  int n_t = 48;
  int n_y = 240;
  unsigned long long seed = 0x5eed5eedULL;
  bool jitter = false;
};

/// Verifies chi(t,y) > -4 Delta), i.e. chi*(y-u2)^2 + 4 Delta > 0, on a grid
/// spanning the region between the outer branches for t in K2.
ValidationReport check_A4(const PotentialContext& ctx, const CriticalManifold& mani,
                          const ChartPartition& charts, const A4Grid& grid);

enum class Well { left, right, outer };

struct ActionFrequency {
  double action = 0;  // (1/2pi) closed integral of w dy
  double omega = 0;   // 2 pi / period, fast-time units
  double period = 0;
};

/// Frozen-t closed orbit of the associated system at the given energy level.
/// Quadrature removes the turning-point singularities with y = y_t -+ s^2.
ActionFrequency action_frequency(const PotentialContext& ctx, double t, double level, Well well);

}  // namespace spduff
