#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cli.hpp"
#include "error.hpp"
#include "parallel.hpp"
#include "report.hpp"

using namespace spduff;
namespace fs = std::filesystem;

namespace {

struct CoutCapture {
  std::ostringstream buffer;
  std::streambuf* old;
  CoutCapture() : old(std::cout.rdbuf(buffer.rdbuf())) {}
  ~CoutCapture() { std::cout.rdbuf(old); }
};

int run(std::vector<std::string> args, std::string* out = nullptr) {
  std::vector<const char*> argv{"spduff"};
  for (const auto& a : args) argv.push_back(a.c_str());
  CoutCapture cap;
  const int rc = run_main(static_cast<int>(argv.size()), argv.data());
  if (out) *out = cap.buffer.str();
  return rc;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("spduff_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("config round trip and key validation") {
  RunConfig cfg;
  cfg.command = Command::sweep;
  cfg.builtin_name = "D1";
  cfg.eps = {0.02, 0.01};
  cfg.delta = 0.03;
  cfg.seed = 99;
  cfg.t0 = -0.5;
  cfg.level = 0.125;
  const RunConfig back = config_from_json(config_to_json(cfg));
  CHECK(back == cfg);

  try {
    config_from_json({{"command", "sweep"}, {"no_such_key", 1}});
    CHECK(false);
  } catch (const error& e) {
    CHECK(e.code() == errc::usage);
    CHECK(std::string(e.what()).find("no_such_key") != std::string::npos);
  }

  RunConfig bad = cfg;
  bad.delta = -1.0;
  try {
    check_config(bad);
    CHECK(false);
  } catch (const error& e) {
    CHECK(e.code() == errc::usage);
    CHECK(std::string(e.what()).find("delta") != std::string::npos);
  }
  RunConfig nonmono = cfg;
  nonmono.eps = {0.01, 0.02};
  CHECK_THROWS_AS(check_config(nonmono), error);
}

TEST_CASE("exit codes: success, certificate failure, usage error") {
  const fs::path dir = fresh_dir("codes");
  std::string out;
  CHECK(run({"check", "--builtin", "D1", "--out", (dir / "a").string()}, &out) == 0);
  CHECK(out.find("\"passed\": true") != std::string::npos);

  // D0 has no folds: A1 violation lands in the report and the exit code is 1
  CHECK(run({"check", "--builtin", "D0", "--out", (dir / "b").string()}, &out) == 1);
  CHECK(out.find("no folds in range") != std::string::npos);
  CHECK(out.find("\"passed\": false") != std::string::npos);

  CHECK(run({"simulate", "--builtin", "D1", "--eps", "0.02,0.01"}) == 2);  // conflicting eps
  CHECK(run({"check", "--builtin", "D1", "--delta", "-1"}) == 2);
  CHECK(run({"frobnicate"}) == 2);
  CHECK(run({"check"}) == 2);  // no problem given
  CHECK(run({"sweep", "--builtin", "D1", "--eps", "0.2,0.1", "--out", (dir / "c").string()},
            &out) == 1);  // EpsilonTooLarge entries fail the certificate
}

TEST_CASE("sweep emits one row per epsilon and chart") {
  const fs::path dir = fresh_dir("rows");
  std::string out;
  const int rc = run({"sweep", "--builtin", "D0", "--eps", "0.02,0.01,0.005", "--out",
                      dir.string(), "--nt", "16", "--ny", "32", "--ngamma", "16"},
                     &out);
  CHECK(rc == 0);
  const std::string csv = slurp(dir / "sweep.csv");
  CHECK(csv.rfind("epsilon,chart,z,s_max,bound,envelope_sup_error,converged_envelope_error\n",
                  0) == 0);
  int lines = 0;
  for (char ch : csv)
    if (ch == '\n') ++lines;
  CHECK(lines == 1 + 3);  // header + 3 rows for the single chart-equivalent
  for (const char* name :
       {"ratios.csv", "sweep.json", "resolved_config.json", "manifold.svg", "oscillations.svg"})
    CHECK(fs::exists(dir / name));
  // resolved config re-parses to the same RunConfig
  const RunConfig cfg = config_from_json(nlohmann::json::parse(slurp(dir / "resolved_config.json")));
  CHECK(config_from_json(config_to_json(cfg)) == cfg);
}

TEST_CASE("identical config and seed give byte-identical outputs") {
  const fs::path d1 = fresh_dir("det1"), d2 = fresh_dir("det2");
  std::vector<std::string> base{"sweep",  "--builtin", "D1",   "--eps", "0.02,0.01",
                                "--seed", "4242",      "--nt", "24",    "--ny",
                                "48",     "--ngamma",  "16"};
  auto args = [&](const fs::path& d) {
    auto a = base;
    a.push_back("--out");
    a.push_back(d.string());
    return a;
  };
  setenv("SPDUFF_THREADS", "1", 1);
  CHECK(run(args(d1)) == 0);
  setenv("SPDUFF_THREADS", "4", 1);
  CHECK(run(args(d2)) == 0);
  unsetenv("SPDUFF_THREADS");
  int compared = 0;
  for (const auto& entry : fs::directory_iterator(d1)) {
    const fs::path other = d2 / entry.path().filename();
    REQUIRE(fs::exists(other));
    if (entry.path().filename() == "resolved_config.json") {
      // differs by the output directory only
      ++compared;
      continue;
    }
    CHECK(slurp(entry.path()) == slurp(other));
    ++compared;
  }
  CHECK(compared >= 10);  // csvs, jsons and the svg set
}

TEST_CASE("phase portrait SVG carries the three panels") {
  const fs::path dir = fresh_dir("phase");
  std::string out;
  CHECK(run({"phase-portrait", "--builtin", "D1", "--t", "0", "--out", dir.string()}, &out) == 0);
  const std::string svg = slurp(dir / "phase.svg");
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("restoring force") != std::string::npos);
  CHECK(svg.find("potential and level") != std::string::npos);
  CHECK(svg.find("frozen-t orbit") != std::string::npos);
}

TEST_CASE("config file values are overridden by flags") {
  const fs::path dir = fresh_dir("cfgfile");
  const fs::path cfgfile = dir / "run.json";
  {
    std::ofstream out(cfgfile);
    out << R"({"builtin": "D0", "eps": [0.02], "delta": 0.05, "seed": 7})";
  }
  std::string out;
  // flag --eps overrides the file's list
  const int rc = run({"simulate", "--config", cfgfile.string(), "--eps", "0.01", "--out",
                      (dir / "sim").string()},
                     &out);
  CHECK(rc == 0);
  CHECK(out.find("\"epsilon\": 0.01") != std::string::npos);
  CHECK(fs::exists(dir / "sim" / "trajectory.csv"));
  CHECK(fs::exists(dir / "sim" / "events.csv"));

  const fs::path badfile = dir / "bad.json";
  {
    std::ofstream o(badfile);
    o << R"({"builtin": "D0", "frobnicate": 1})";
  }
  CHECK(run({"check", "--config", badfile.string()}) == 2);
}

TEST_CASE("problem files drive the CLI like builtins do") {
  const fs::path dir = fresh_dir("pfile");
  const fs::path pfile = dir / "problem.json";
  {
    std::ofstream o(pfile);
    o << R"({"a":{"kind":"polynomial","coefficients":[1]},
             "m":{"kind":"polynomial","coefficients":[0,-1]},
             "f":{"kind":"polynomial","coefficients":[0,-1,0,1]},
             "t_begin":-1,"t_end":1})";
  }
  std::string out;
  CHECK(run({"check", pfile.string(), "--out", (dir / "o").string()}, &out) == 0);
  CHECK(out.find("\"passed\": true") != std::string::npos);
  CHECK(run({"simulate", pfile.string(), "--eps", "0.02", "--t0", "-1", "--t1", "-0.8",
             "--out", (dir / "s").string()}) == 0);
  CHECK(fs::exists(dir / "s" / "trajectory.csv"));
  CHECK(run({"check", (dir / "missing.json").string()}) == 1);  // IoError path
}

TEST_CASE("worker cap follows SPDUFF_THREADS") {
  setenv("SPDUFF_THREADS", "3", 1);
  CHECK(worker_count() == 3);
  setenv("SPDUFF_THREADS", "junk", 1);
  CHECK(worker_count() >= 1);
  unsetenv("SPDUFF_THREADS");
  CHECK(worker_count() >= 1);
}

TEST_CASE("energy command reports turning points and action-angle data") {
  std::string out;
  CHECK(run({"energy", "--builtin", "D1", "--t", "0", "--level", "0.05"}, &out) == 0);
  CHECK(out.find("\"omega\": 0.5526569211902") != std::string::npos);
  CHECK(out.find("\"y_right\": 1.447565236875") != std::string::npos);
  CHECK(out.find("schema_version") != std::string::npos);
}
