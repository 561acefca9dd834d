#pragma once
#include <optional>
#include <string>
#include <vector>

#include "energy.hpp"
#include "integrate.hpp"
#include "polar.hpp"

namespace spduff {

struct AnalysisOptions {
  SolverOptions solver;
  GridSpec grid;
  double margin_fraction = 0.05;
  int envelope_samples = 101;  // chart sample times for the converged error
};

struct ChartOscillationReport {
  ChartId chart_id = ChartId::Full;
  double epsilon = 0;
  int zero_count = 0;
  double max_spacing = 0;            // max gap between successive crossings
  double bound = 0;                  // eps * pi / c with the deflated c
  bool spacing_ok = true;            // max_spacing <= bound (and >= 2 crossings)
  double envelope_sup_error = 0;     // window extremum vs y_{R/L} at measured H
  double converged_envelope_error = 0;  // sup |y^eps - y^0| turning points
  int tangency_count = 0;
  double c = 0, r_min = 0;           // from the chart constants
  double r_observed_min = 0;         // post-hoc min radius along the run
  double h_rel_min = 0, h_rel_max = 0;  // range of H - (H0 + Delta) on the run
};

struct SweepEntry {
  double epsilon = 0;
  std::vector<ChartOscillationReport> charts;
  std::string error;  // non-empty when this epsilon failed (partial result)
};

struct SweepResult {
  std::string problem_id;
  double delta = 0;
  std::vector<SweepEntry> entries;  // epsilon strictly decreasing
  struct Ratio {
    ChartId chart_id;
    double eps_fine = 0, eps_coarse = 0;
    double ratio = 0;  // z(eps) / z(2 eps)
  };
  std::vector<Ratio> ratios;
};

/// Integrates the standard family member of one chart (start at the chart's
/// left edge on the level H0 + Delta with w0 = 0, y0 = y_R) and certifies the
/// spacing bound and the envelope errors against the chart constants.
ChartOscillationReport oscillation_report(const OscillatorProblem& p, const CriticalManifold& mani,
                                          const ChartPartition::Chart& chart,
                                          const ChartConstants& constants, double epsilon,
                                          double delta, const AnalysisOptions& opts);

/// Trajectory of the standard initial-condition family on one chart.
Trajectory chart_trajectory(const OscillatorProblem& p, const CriticalManifold& mani,
                            const ChartPartition::Chart& chart, double epsilon, double delta,
                            const SolverOptions& solver);

SweepResult run_sweep(const OscillatorProblem& p, const std::vector<double>& eps_list, double delta,
                      const AnalysisOptions& opts, const std::string& problem_id = "problem");

/// Per-epsilon converged envelope error of one chart, finest epsilon last...
/// ordered as the sweep (decreasing epsilon). Needs >= 2 entries.
std::vector<std::pair<double, double>> envelope_convergence(const SweepResult& sweep,
                                                            ChartId chart);

}  // namespace spduff
