#pragma once
#include <string>
#include <string_view>
#include <vector>

#include "function_spec.hpp"

namespace spduff {

/// The oscillator instance: coefficient a(t), forcing m(t), restoring
/// force f(y) and the time interval. Immutable value type.
struct OscillatorProblem {
  FunctionSpec a;  // time domain, must stay positive
  FunctionSpec m;  // time domain
  FunctionSpec f;  // state domain
  double t_begin = 0;
  double t_end = 0;
};

struct ValidationReport {
  struct Violation {
    std::string check;
    double location = 0;  // t or y, whichever the check samples
    std::string detail;
  };
  bool passed = true;
  std::vector<Violation> violations;

  void add(std::string check, double location, std::string detail) {
    passed = false;
    violations.push_back({std::move(check), location, std::move(detail)});
  }
};

/// Grid positivity check for a with a |a'| Lipschitz margin, plus interval
/// ordering. Failures land in the report; nothing throws.
ValidationReport validate(const OscillatorProblem& p, int grid_n);

/// Builtin instances: D0 harmonic, D1 double-well ramp, D2 = D1 with a=1+t/4.
OscillatorProblem builtin(std::string_view name);

OscillatorProblem problem_from_json_text(const std::string& text);
std::string problem_to_json_text(const OscillatorProblem& p);
OscillatorProblem problem_from_file(const std::string& path);

}  // namespace spduff
