#pragma once
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace spduff {

enum class Command { check, simulate, energy, constants, sweep, phase_portrait };
const char* command_name(Command c);
Command command_from_name(const std::string& s);

/// Resolved run configuration: config-file values overridden by flags, all
/// numeric fields range-checked against the owning module contracts.
struct RunConfig {
  Command command = Command::check;
  std::string problem_path;   // one of problem_path / builtin_name
  std::string builtin_name;
  std::vector<double> eps{0.02, 0.01, 0.005};
  double delta = 0.05;
  double rel_tol = 1e-9;
  double abs_tol = 1e-11;
  double max_step_fast = 0.025;
  double margin_fraction = 0.05;
  std::string out_dir = ".";
  unsigned long long seed = 12345;
  std::optional<double> t0, t1, y0, w0;  // simulate window / initial state
  double t_star = 0;                     // energy, phase-portrait
  std::optional<double> level;           // energy
  std::string well = "outer";            // energy orbit selector
  int grid_n = 64;                       // validation / assumption grids
  int n_t = 64, n_y = 256, n_gamma = 64;

  bool operator==(const RunConfig&) const = default;
};

/// Range checks; throws UsageError naming the offending field.
void check_config(const RunConfig& cfg);

RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& cfg);

/// %.17g rendering used for every floating-point value we emit.
std::string fmt17(double v);

/// JSON serialization with floats at 17 significant digits.
std::string dump_json_17(const nlohmann::json& j, int indent = 2);

void write_text_file(const std::string& path, const std::string& content);

/// Rows of already-formatted cells; the header goes first.
std::string to_csv(const std::vector<std::string>& header,
                   const std::vector<std::vector<std::string>>& rows);

}  // namespace spduff
