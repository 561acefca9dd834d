#include "report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "error.hpp"

namespace spduff {

const char* command_name(Command c) {
  switch (c) {
    case Command::check: return "check";
    case Command::simulate: return "simulate";
    case Command::energy: return "energy";
    case Command::constants: return "constants";
    case Command::sweep: return "sweep";
    case Command::phase_portrait: return "phase-portrait";
  }
  return "check";
}

Command command_from_name(const std::string& s) {
  for (Command c : {Command::check, Command::simulate, Command::energy, Command::constants,
                    Command::sweep, Command::phase_portrait})
    if (s == command_name(c)) return c;
  throw error(errc::usage, "unknown command '" + s + "'");
}

void check_config(const RunConfig& cfg) {
  auto fail = [](const std::string& what) { throw error(errc::usage, what); };
  if (cfg.problem_path.empty() == cfg.builtin_name.empty())
    fail("give exactly one of a problem file or --builtin");
  if (cfg.eps.empty()) fail("need at least one epsilon");
  for (std::size_t i = 0; i < cfg.eps.size(); ++i) {
    if (!(cfg.eps[i] > 0 && cfg.eps[i] <= 0.25)) fail("epsilon must lie in (0, 0.25]");
    if (i && !(cfg.eps[i] < cfg.eps[i - 1])) fail("epsilon list must be strictly decreasing");
  }
  if (!(cfg.delta > 0)) fail("delta must be > 0");
  if (!(cfg.rel_tol > 0 && cfg.rel_tol <= 1e-2)) fail("rel_tol must lie in (0, 1e-2]");
  if (!(cfg.abs_tol > 0 && cfg.abs_tol <= 1e-2)) fail("abs_tol must lie in (0, 1e-2]");
  if (!(cfg.max_step_fast > 0)) fail("max_step_fast must be > 0");
  if (!(cfg.margin_fraction > 0 && cfg.margin_fraction < 0.25))
    fail("margin_fraction must lie in (0, 0.25)");
  if (cfg.grid_n < 16) fail("grid_n must be >= 16");
  if (cfg.n_t < 2 || cfg.n_y < 4 || cfg.n_gamma < 2) fail("constants grid too small");
}

namespace {

const char* const kConfigKeys[] = {"command",   "problem",        "builtin", "eps",
                                   "delta",     "rel_tol",        "abs_tol", "max_step_fast",
                                   "margin_fraction", "out",      "seed",    "t0",
                                   "t1",        "y0",             "w0",      "t",
                                   "level",     "grid_n",         "n_t",     "n_y",
                                   "n_gamma",   "well",           "schema_version"};

}  // namespace

RunConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw error(errc::usage, "config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* k : kConfigKeys) known = known || key == k;
    if (!known) throw error(errc::usage, "unknown config key '" + key + "'");
  }
  RunConfig cfg;
  auto get_num = [&](const char* key, double& into) {
    if (j.contains(key)) into = j.at(key).get<double>();
  };
  if (j.contains("command")) cfg.command = command_from_name(j.at("command").get<std::string>());
  if (j.contains("problem")) cfg.problem_path = j.at("problem").get<std::string>();
  if (j.contains("builtin")) cfg.builtin_name = j.at("builtin").get<std::string>();
  if (j.contains("eps")) cfg.eps = j.at("eps").get<std::vector<double>>();
  get_num("delta", cfg.delta);
  get_num("rel_tol", cfg.rel_tol);
  get_num("abs_tol", cfg.abs_tol);
  get_num("max_step_fast", cfg.max_step_fast);
  get_num("margin_fraction", cfg.margin_fraction);
  if (j.contains("out")) cfg.out_dir = j.at("out").get<std::string>();
  if (j.contains("seed")) cfg.seed = j.at("seed").get<unsigned long long>();
  for (auto [key, slot] : {std::pair{"t0", &cfg.t0}, {"t1", &cfg.t1}, {"y0", &cfg.y0},
                           {"w0", &cfg.w0}, {"level", &cfg.level}})
    if (j.contains(key)) *slot = j.at(key).get<double>();
  get_num("t", cfg.t_star);
  if (j.contains("well")) cfg.well = j.at("well").get<std::string>();
  if (j.contains("grid_n")) cfg.grid_n = j.at("grid_n").get<int>();
  if (j.contains("n_t")) cfg.n_t = j.at("n_t").get<int>();
  if (j.contains("n_y")) cfg.n_y = j.at("n_y").get<int>();
  if (j.contains("n_gamma")) cfg.n_gamma = j.at("n_gamma").get<int>();
  return cfg;
}

nlohmann::json config_to_json(const RunConfig& cfg) {
  nlohmann::json j{{"schema_version", 1},
                   {"command", command_name(cfg.command)},
                   {"eps", cfg.eps},
                   {"delta", cfg.delta},
                   {"rel_tol", cfg.rel_tol},
                   {"abs_tol", cfg.abs_tol},
                   {"max_step_fast", cfg.max_step_fast},
                   {"margin_fraction", cfg.margin_fraction},
                   {"out", cfg.out_dir},
                   {"seed", cfg.seed},
                   {"t", cfg.t_star},
                   {"well", cfg.well},
                   {"grid_n", cfg.grid_n},
                   {"n_t", cfg.n_t},
                   {"n_y", cfg.n_y},
                   {"n_gamma", cfg.n_gamma}};
  if (!cfg.problem_path.empty()) j["problem"] = cfg.problem_path;
  if (!cfg.builtin_name.empty()) j["builtin"] = cfg.builtin_name;
  for (auto [key, slot] : {std::pair{"t0", &cfg.t0}, {"t1", &cfg.t1}, {"y0", &cfg.y0},
                           {"w0", &cfg.w0}, {"level", &cfg.level}})
    if (slot->has_value()) j[key] = slot->value();
  return j;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

void dump_rec(const nlohmann::json& j, std::ostringstream& os, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent) * depth, ' ');
  const std::string pad1(static_cast<std::size_t>(indent) * (depth + 1), ' ');
  switch (j.type()) {
    case nlohmann::json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      std::size_t i = 0;
      for (const auto& [key, value] : j.items()) {
        os << pad1 << '"' << key << "\": ";
        dump_rec(value, os, indent, depth + 1);
        if (++i < j.size()) os << ',';
        os << '\n';
      }
      os << pad << '}';
      return;
    }
    case nlohmann::json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      os << "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        os << pad1;
        dump_rec(j[i], os, indent, depth + 1);
        if (i + 1 < j.size()) os << ',';
        os << '\n';
      }
      os << pad << ']';
      return;
    }
    case nlohmann::json::value_t::number_float: {
      const double v = j.get<double>();
      if (std::isfinite(v))
        os << fmt17(v);
      else
        os << "null";
      return;
    }
    default:
      os << j.dump();
      return;
  }
}

}  // namespace

std::string dump_json_17(const nlohmann::json& j, int indent) {
  std::ostringstream os;
  dump_rec(j, os, indent, 0);
  os << '\n';
  return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw error(errc::io, "cannot write '" + path + "'");
  out << content;
  if (!out) throw error(errc::io, "short write to '" + path + "'");
}

std::string to_csv(const std::vector<std::string>& header,
                   const std::vector<std::vector<std::string>>& rows) {
  std::ostringstream os;
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << '\n';
  }
  return os.str();
}

}  // namespace spduff
