#include "problem.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "error.hpp"

namespace spduff {

ValidationReport validate(const OscillatorProblem& p, int grid_n) {
  if (grid_n < 16) throw error(errc::invalid_argument, "validation grid needs at least 16 points");
  ValidationReport rep;
  if (!(p.t_begin < p.t_end)) {
    rep.add("interval", p.t_begin, "empty interval: t_begin must be < t_end");
    return rep;  // nothing sensible to sample
  }
  const double L = p.a.derivative_bound(p.t_begin, p.t_end);
  const double h = (p.t_end - p.t_begin) / (grid_n - 1);
  // a(t_i) > L*h/2 certifies a > 0 between neighbouring grid points
  const double margin = 0.5 * L * h;
  for (int i = 0; i < grid_n; ++i) {
    const double t = p.t_begin + h * i;
    const double at = p.a.eval(t);
    if (!(at > margin)) {
      std::ostringstream os;
      os << "a non-positive at t = " << t << " (a = " << at << ", required margin " << margin << ")";
      rep.add("a_positivity", t, os.str());
    }
  }
  return rep;
}

OscillatorProblem builtin(std::string_view name) {
  using FS = FunctionSpec;
  if (name == "D0")
    return {FS::polynomial({1.0}), FS::polynomial({0.0}), FS::polynomial({0.0, 1.0}), 0.0, 1.0};
  if (name == "D1")
    return {FS::polynomial({1.0}), FS::polynomial({0.0, -1.0}),
            FS::polynomial({0.0, -1.0, 0.0, 1.0}), -1.0, 1.0};
  if (name == "D2")
    return {FS::polynomial({1.0, 0.25}), FS::polynomial({0.0, -1.0}),
            FS::polynomial({0.0, -1.0, 0.0, 1.0}), -1.0, 1.0};
  throw error(errc::unknown_instance, "unknown builtin instance '" + std::string(name) + "'");
}

namespace {

const char* kind_name(FunctionKind k) {
  switch (k) {
    case FunctionKind::polynomial: return "polynomial";
    case FunctionKind::trig_sum: return "trig-sum";
    case FunctionKind::sum_of_both: return "sum-of-both";
  }
  return "polynomial";
}

FunctionKind kind_from_name(const std::string& s) {
  if (s == "polynomial") return FunctionKind::polynomial;
  if (s == "trig-sum") return FunctionKind::trig_sum;
  if (s == "sum-of-both") return FunctionKind::sum_of_both;
  throw error(errc::parse, "unknown function kind '" + s + "'");
}

FunctionSpec spec_from_json(const nlohmann::json& j, const char* which) {
  if (!j.is_object() || !j.contains("kind") || !j.contains("coefficients"))
    throw error(errc::parse, std::string(which) + ": expected {\"kind\": ..., \"coefficients\": [...]}");
  const FunctionKind kind = kind_from_name(j.at("kind").get<std::string>());
  std::vector<double> coeffs;
  for (const auto& c : j.at("coefficients")) {
    if (!c.is_number()) throw error(errc::parse, std::string(which) + ": coefficients must be numbers");
    coeffs.push_back(c.get<double>());
  }
  return FunctionSpec::from_flat(kind, coeffs);
}

nlohmann::json spec_to_json(const FunctionSpec& s) {
  return {{"kind", kind_name(s.kind())}, {"coefficients", s.flat_coefficients()}};
}

}  // namespace

OscillatorProblem problem_from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw error(errc::parse, std::string("problem JSON: ") + e.what());
  }
  for (const char* key : {"a", "m", "f", "t_begin", "t_end"})
    if (!j.contains(key)) throw error(errc::parse, std::string("problem JSON missing key '") + key + "'");
  OscillatorProblem p{spec_from_json(j["a"], "a"), spec_from_json(j["m"], "m"),
                      spec_from_json(j["f"], "f"), j["t_begin"].get<double>(),
                      j["t_end"].get<double>()};
  if (!std::isfinite(p.t_begin) || !std::isfinite(p.t_end))
    throw error(errc::parse, "problem JSON: non-finite interval bounds");
  if (!(p.t_begin < p.t_end)) throw error(errc::parse, "problem JSON: t_begin must be < t_end");
  return p;
}

std::string problem_to_json_text(const OscillatorProblem& p) {
  nlohmann::json j{{"a", spec_to_json(p.a)},
                   {"m", spec_to_json(p.m)},
                   {"f", spec_to_json(p.f)},
                   {"t_begin", p.t_begin},
                   {"t_end", p.t_end}};
  return j.dump(2);
}

OscillatorProblem problem_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw error(errc::io, "cannot open problem file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return problem_from_json_text(ss.str());
}

}  // namespace spduff
