#pragma once
#include <stdexcept>
#include <string>

namespace spduff {

enum class errc {
  ok = 0,
  invalid_argument,
  parse,
  evaluation_overflow,
  unknown_instance,
  assumption_a1_violated,
  branch_domain,
  chart_margin_too_large,
  no_turning_points,
  separatrix_level,
  invalid_delta,
  stiffness_failure,
  divergence,
  polar_singularity,
  branch_derivative_unavailable,
  epsilon_too_large,
  needs_sweep,
  usage,
  io,
  internal,
};

const char* errc_name(errc c);

class error : public std::runtime_error {
public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  errc code() const { return code_; }

private:
  errc code_;
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::ok: return "Ok";
    case errc::invalid_argument: return "InvalidArgument";
    case errc::parse: return "ParseError";
    case errc::evaluation_overflow: return "EvaluationOverflow";
    case errc::unknown_instance: return "UnknownInstance";
    case errc::assumption_a1_violated: return "AssumptionA1Violated";
    case errc::branch_domain: return "BranchDomainError";
    case errc::chart_margin_too_large: return "ChartMarginTooLarge";
    case errc::no_turning_points: return "NoTurningPoints";
    case errc::separatrix_level: return "SeparatrixLevel";
    case errc::invalid_delta: return "InvalidDelta";
    case errc::stiffness_failure: return "StiffnessFailure";
    case errc::divergence: return "Divergence";
    case errc::polar_singularity: return "PolarSingularity";
    case errc::branch_derivative_unavailable: return "BranchDerivativeUnavailable";
    case errc::epsilon_too_large: return "EpsilonTooLarge";
    case errc::needs_sweep: return "NeedsSweep";
    case errc::usage: return "UsageError";
    case errc::io: return "IoError";
    case errc::internal: return "InternalError";
  }
  return "InternalError";
}

}  // namespace spduff
