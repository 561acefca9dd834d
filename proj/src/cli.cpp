#include "cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "analysis.hpp"
#include "energy.hpp"
#include "error.hpp"
#include "integrate.hpp"
#include "manifold.hpp"
#include "polar.hpp"
#include "problem.hpp"
#include "report.hpp"
#include "svg.hpp"

namespace spduff {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string fmt_short(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

OscillatorProblem load_problem(const RunConfig& cfg) {
  if (!cfg.builtin_name.empty()) return builtin(cfg.builtin_name);
  return problem_from_file(cfg.problem_path);
}

std::string problem_id(const RunConfig& cfg) {
  if (!cfg.builtin_name.empty()) return cfg.builtin_name;
  return fs::path(cfg.problem_path).stem().string();
}

void ensure_out_dir(const RunConfig& cfg) {
  std::error_code ec;
  fs::create_directories(cfg.out_dir, ec);
  if (ec) throw error(errc::io, "cannot create output directory '" + cfg.out_dir + "'");
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
  return (fs::path(cfg.out_dir) / name).string();
}

json report_to_json(const ValidationReport& rep) {
  json v = json::array();
  for (const auto& viol : rep.violations)
    v.push_back({{"check", viol.check}, {"location", viol.location}, {"detail", viol.detail}});
  return {{"passed", rep.passed}, {"violations", v}};
}

SolverOptions solver_options(const RunConfig& cfg) {
  SolverOptions s;
  s.rel_tol = cfg.rel_tol;
  s.abs_tol = cfg.abs_tol;
  s.max_step_fast = cfg.max_step_fast;
  return s;
}

AnalysisOptions analysis_options(const RunConfig& cfg) {
  AnalysisOptions a;
  a.solver = solver_options(cfg);
  a.grid = {cfg.n_t, cfg.n_y, cfg.n_gamma};
  a.margin_fraction = cfg.margin_fraction;
  return a;
}

std::string manifold_csv(const OscillatorProblem& p, const CriticalManifold& mani, int n) {
  std::vector<std::vector<std::string>> rows;
  for (int i = 0; i <= n; ++i) {
    const double t = p.t_begin + (p.t_end - p.t_begin) * i / n;
    std::vector<std::string> row{fmt17(t)};
    for (int b : {1, 2, 3}) {
      if ((mani.s_shaped || b == 1) && branch_domain_contains(mani, p, b, t))
        row.push_back(fmt17(branch(mani, p, b, t).u));
      else
        row.push_back("");
    }
    rows.push_back(std::move(row));
  }
  return to_csv({"t", "u1", "u2", "u3"}, rows);
}

int cmd_check(const RunConfig& cfg) {
  const OscillatorProblem p = load_problem(cfg);
  json out{{"schema_version", 1}, {"problem", problem_id(cfg)}};
  bool passed = true;

  const ValidationReport vrep = validate(p, cfg.grid_n);
  out["validate"] = report_to_json(vrep);
  passed = passed && vrep.passed;

  std::optional<CriticalManifold> mani;
  try {
    mani = find_folds(p);
    out["A1"] = {{"passed", true},
                 {"fold_min", {{"y", mani->fold_min.y},
                               {"t", mani->fold_min.t},
                               {"phi_second_derivative", mani->fold_min.second_derivative}}},
                 {"fold_max", {{"y", mani->fold_max.y},
                               {"t", mani->fold_max.t},
                               {"phi_second_derivative", mani->fold_max.second_derivative}}}};
  } catch (const error& e) {
    if (e.code() != errc::assumption_a1_violated && e.code() != errc::invalid_argument) throw;
    out["A1"] = {{"passed", false}, {"detail", e.what()}};
    passed = false;
  }

  if (mani) {
    const ValidationReport a23 = check_A1_A3(p, *mani, cfg.grid_n, cfg.seed);
    out["A2_A3"] = report_to_json(a23);
    passed = passed && a23.passed;
    try {
      const ChartPartition charts = build_charts(*mani, p, cfg.margin_fraction);
      PotentialContext ctx(p, cfg.delta);
      A4Grid grid;
      grid.n_t = cfg.n_t;
      grid.n_y = cfg.n_y;
      grid.seed = cfg.seed;
      grid.jitter = true;
      const ValidationReport a4 = check_A4(ctx, *mani, charts, grid);
      out["A4"] = report_to_json(a4);
      out["A4"]["delta"] = cfg.delta;
      passed = passed && a4.passed;
    } catch (const error& e) {
      out["A4"] = {{"passed", false}, {"detail", e.what()}};
      passed = false;
    }
  }

  // manifold sampling CSV; the fallback single branch still exports u1
  try {
    const CriticalManifold any_mani = mani ? *mani : build_manifold(p);
    ensure_out_dir(cfg);
    write_text_file(out_path(cfg, "manifold.csv"), manifold_csv(p, any_mani, 128));
    out["manifold_csv"] = out_path(cfg, "manifold.csv");
  } catch (const error&) {
    // no manifold structure at all; the JSON report already says why
  }

  out["passed"] = passed;
  std::cout << dump_json_17(out);
  return passed ? 0 : 1;
}

int cmd_simulate(const RunConfig& cfg) {
  const OscillatorProblem p = load_problem(cfg);
  if (cfg.eps.size() != 1) throw error(errc::usage, "simulate takes a single --eps value");
  const double eps = cfg.eps[0];
  const double t0 = cfg.t0.value_or(p.t_begin);
  const double t1 = cfg.t1.value_or(p.t_end);
  if (cfg.y0.has_value() != cfg.w0.has_value())
    throw error(errc::usage, "give both --y0 and --w0 or neither");

  double y0, w0;
  if (cfg.y0) {
    y0 = *cfg.y0;
    w0 = *cfg.w0;
  } else {
    // standard family: w0 = 0 on the level H0(t0) + Delta, y0 = y_R
    const CriticalManifold mani = build_manifold(p);
    PotentialContext ctx(p, cfg.delta);
    const TurningPoints tp = turning_points(ctx, t0, base_level(ctx, mani, t0) + cfg.delta);
    y0 = tp.y_right;
    w0 = 0.0;
  }

  const Trajectory traj = integrate(p, eps, y0, w0, t0, t1, solver_options(cfg));
  ensure_out_dir(cfg);

  std::vector<std::vector<std::string>> rows;
  for (const auto& s : traj.samples()) {
    const double H = 0.5 * s.w * s.w + p.f.integral_from_zero(s.y) - p.m.eval(s.t) * s.y;
    rows.push_back({fmt17(s.t), fmt17(s.y), fmt17(s.w), fmt17(H)});
  }
  write_text_file(out_path(cfg, "trajectory.csv"), to_csv({"t", "y", "w", "H"}, rows));

  std::vector<std::vector<std::string>> erows;
  int tangencies = 0;
  try {
    const CriticalManifold mani = build_manifold(p);
    for (int b : {1, 2, 3}) {
      if (!mani.s_shaped && b > 1) break;
      double lo = p.t_begin, hi = p.t_end;
      if (mani.s_shaped) {
        lo = b == 1 ? p.t_begin : mani.t_min;
        hi = b == 3 ? p.t_end : mani.t_max;
      }
      lo = std::max(lo, t0);
      hi = std::min(hi, t1);
      if (!(lo < hi)) continue;
      const CrossingScan scan = detect_crossings(traj, mani, p, b, lo, hi);
      tangencies += scan.tangential_near_zeros;
      for (const CrossingEvent& ev : scan.events)
        erows.push_back({std::to_string(ev.branch_index), fmt17(ev.t_star),
                         ev.upward ? "up" : "down", fmt17(ev.residual)});
    }
  } catch (const error&) {
    // no manifold: trajectory still emitted, events empty
  }
  write_text_file(out_path(cfg, "events.csv"),
                  to_csv({"branch", "t_star", "direction", "residual"}, erows));

  json out{{"schema_version", 1},
           {"epsilon", eps},
           {"t0", t0},
           {"t1", t1},
           {"y0", y0},
           {"w0", w0},
           {"samples", traj.samples().size()},
           {"events", erows.size()},
           {"tangential_near_zeros", tangencies},
           {"trajectory_csv", out_path(cfg, "trajectory.csv")},
           {"events_csv", out_path(cfg, "events.csv")}};
  std::cout << dump_json_17(out);
  return 0;
}

int cmd_energy(const RunConfig& cfg) {
  const OscillatorProblem p = load_problem(cfg);
  PotentialContext ctx(p, cfg.delta);
  const double t = cfg.t_star;
  double level;
  if (cfg.level) {
    level = *cfg.level;
  } else {
    const CriticalManifold mani = build_manifold(p);
    level = base_level(ctx, mani, t) + cfg.delta;
  }
  const TurningPoints tp = turning_points(ctx, t, level);
  json out{{"schema_version", 1},
           {"t", t},
           {"level", level},
           {"turning_points", {{"y_left", tp.y_left}, {"y_right", tp.y_right}}}};
  Well well = Well::outer;
  if (cfg.well == "left")
    well = Well::left;
  else if (cfg.well == "right")
    well = Well::right;
  else if (cfg.well != "outer")
    throw error(errc::usage, "well must be left, right or outer");
  try {
    const ActionFrequency af = action_frequency(ctx, t, level, well);
    out["action"] = af.action;
    out["omega"] = af.omega;
    out["period"] = af.period;
  } catch (const error& e) {
    out["action_frequency_error"] = e.what();
  }
  std::cout << dump_json_17(out);
  return 0;
}

json constants_to_json(const ChartConstants& c) {
  return {{"chart", chart_name(c.chart_id)},
          {"epsilon", c.epsilon},
          {"r_min", c.r_min},
          {"eta", c.eta},
          {"delta1", c.delta1},
          {"delta2", c.delta2},
          {"c", c.c},
          {"c_raw", c.c_raw},
          {"grid", {{"n_t", c.grid.n_t}, {"n_y", c.grid.n_y}, {"n_gamma", c.grid.n_gamma}}},
          {"argmin",
           {{"t", c.argmin_t}, {"y", c.argmin_y}, {"gamma", c.argmin_gamma},
            {"term", c.argmin_term}}}};
}

int cmd_constants(const RunConfig& cfg) {
  const OscillatorProblem p = load_problem(cfg);
  if (cfg.eps.size() != 1) throw error(errc::usage, "constants takes a single --eps value");
  const CriticalManifold mani = build_manifold(p);
  const ChartPartition charts = build_charts(mani, p, cfg.margin_fraction);
  const std::vector<ChartConstants> cs =
      compute_constants(p, mani, charts, cfg.eps[0], cfg.delta, {cfg.n_t, cfg.n_y, cfg.n_gamma});
  json out{{"schema_version", 1}, {"delta", cfg.delta}, {"charts", json::array()}};
  for (const ChartConstants& c : cs) out["charts"].push_back(constants_to_json(c));
  std::cout << dump_json_17(out);
  return 0;
}

void emit_phase_portrait(const RunConfig& cfg, const OscillatorProblem& p,
                         const CriticalManifold& mani, double t_star, const std::string& path,
                         const std::string& caption) {
  PotentialContext ctx(p, cfg.delta);
  const double level = base_level(ctx, mani, t_star) + cfg.delta;
  const TurningPoints tp = turning_points(ctx, t_star, level);
  const double pad = 0.15 * (tp.y_right - tp.y_left);
  const double ylo = tp.y_left - pad, yhi = tp.y_right + pad;

  SvgPlot plot(840, 300, caption);
  SvgPlot::Series fm, vc, lvl, orbit_up, orbit_dn;
  for (int i = 0; i <= 400; ++i) {
    const double y = ylo + (yhi - ylo) * i / 400;
    fm.points.emplace_back(y, p.f.eval(y) - p.m.eval(t_star));
    vc.points.emplace_back(y, potential(ctx, t_star, y));
  }
  lvl.points = {{ylo, level}, {yhi, level}};
  lvl.dashed = true;
  lvl.color = "#d62728";
  for (int i = 0; i <= 400; ++i) {
    const double y = tp.y_left + (tp.y_right - tp.y_left) * i / 400;
    const double w2 = 2.0 * (level - potential(ctx, t_star, y));
    const double w = std::sqrt(std::max(w2, 0.0));
    orbit_up.points.emplace_back(y, w);
    orbit_dn.points.emplace_back(y, -w);
  }
  orbit_dn.color = orbit_up.color;
  plot.add_panel("y", "f - m", {fm}, "restoring force");
  plot.add_panel("y", "V", {vc, lvl}, "potential and level");
  plot.add_panel("y", "w", {orbit_up, orbit_dn}, "frozen-t orbit");
  plot.write(path);
}

int cmd_phase_portrait(const RunConfig& cfg) {
  const OscillatorProblem p = load_problem(cfg);
  const CriticalManifold mani = build_manifold(p);
  ensure_out_dir(cfg);
  std::ostringstream cap;
  cap << problem_id(cfg) << " at t = " << fmt_short(cfg.t_star);
  emit_phase_portrait(cfg, p, mani, cfg.t_star, out_path(cfg, "phase.svg"), cap.str());
  json out{{"schema_version", 1}, {"t", cfg.t_star}, {"svg", out_path(cfg, "phase.svg")}};
  std::cout << dump_json_17(out);
  return 0;
}

void emit_manifold_svg(const OscillatorProblem& p, const CriticalManifold& mani,
                       const std::string& path) {
  SvgPlot plot(520, 360, "critical manifold S");
  std::vector<SvgPlot::Series> series;
  const char* colors[3] = {"#1f77b4", "#d62728", "#2ca02c"};
  for (int b : {1, 2, 3}) {
    if (!mani.s_shaped && b > 1) break;
    SvgPlot::Series s;
    s.color = colors[b - 1];
    for (int i = 0; i <= 256; ++i) {
      const double t = p.t_begin + (p.t_end - p.t_begin) * i / 256;
      if (branch_domain_contains(mani, p, b, t))
        s.points.emplace_back(t, branch(mani, p, b, t).u);
    }
    series.push_back(std::move(s));
  }
  plot.add_panel("t", "y", std::move(series));
  plot.write(path);
}

void emit_oscillations_svg(const RunConfig& cfg, const OscillatorProblem& p,
                           const CriticalManifold& mani, const ChartPartition& charts,
                           double epsilon, const std::string& path) {
  PotentialContext ctx(p, cfg.delta);
  std::ostringstream title;
  title << "oscillations at eps = " << fmt_short(epsilon);
  SvgPlot plot(760, 420, title.str());
  std::vector<SvgPlot::Series> series;
  for (int b : {1, 2, 3}) {  // branches, dashed
    if (!mani.s_shaped && b > 1) break;
    SvgPlot::Series s;
    s.dashed = true;
    s.color = "#999999";
    for (int i = 0; i <= 256; ++i) {
      const double t = p.t_begin + (p.t_end - p.t_begin) * i / 256;
      if (branch_domain_contains(mani, p, b, t)) s.points.emplace_back(t, branch(mani, p, b, t).u);
    }
    series.push_back(std::move(s));
  }
  for (const auto& chart : charts.charts) {
    SvgPlot::Series env_l, env_r;
    env_l.dashed = env_r.dashed = true;
    env_l.color = env_r.color = "#d62728";
    for (int i = 0; i <= 128; ++i) {
      const double t = chart.lo + (chart.hi - chart.lo) * i / 128;
      try {
        const TurningPoints tp = turning_points(ctx, t, base_level(ctx, mani, t) + cfg.delta);
        env_l.points.emplace_back(t, tp.y_left);
        env_r.points.emplace_back(t, tp.y_right);
      } catch (const error&) {
      }
    }
    SvgPlot::Series y_of_t;
    y_of_t.color = "#1f77b4";
    const Trajectory traj =
        chart_trajectory(p, mani, chart, epsilon, cfg.delta, solver_options(cfg));
    const int n = 4000;
    for (int i = 0; i <= n; ++i) {
      const double t = chart.lo + (chart.hi - chart.lo) * i / n;
      y_of_t.points.emplace_back(t, traj.eval(t).y);
    }
    series.push_back(std::move(env_l));
    series.push_back(std::move(env_r));
    series.push_back(std::move(y_of_t));
  }
  plot.add_panel("t", "y", std::move(series));
  plot.write(path);
}

int cmd_sweep(const RunConfig& cfg) {
  const OscillatorProblem p = load_problem(cfg);
  const SweepResult sweep = run_sweep(p, cfg.eps, cfg.delta, analysis_options(cfg), problem_id(cfg));
  ensure_out_dir(cfg);

  std::vector<std::vector<std::string>> rows;
  bool certificate_ok = true;
  json jentries = json::array();
  for (const SweepEntry& e : sweep.entries) {
    json je{{"epsilon", e.epsilon}};
    if (!e.error.empty()) {
      certificate_ok = false;
      je["error"] = e.error;
      jentries.push_back(je);
      continue;
    }
    je["charts"] = json::array();
    for (const ChartOscillationReport& r : e.charts) {
      rows.push_back({fmt17(r.epsilon), chart_name(r.chart_id), std::to_string(r.zero_count),
                      fmt17(r.max_spacing), fmt17(r.bound), fmt17(r.envelope_sup_error),
                      fmt17(r.converged_envelope_error)});
      certificate_ok = certificate_ok && r.spacing_ok;
      je["charts"].push_back({{"chart", chart_name(r.chart_id)},
                              {"z", r.zero_count},
                              {"s_max", r.max_spacing},
                              {"bound", r.bound},
                              {"spacing_ok", r.spacing_ok},
                              {"envelope_sup_error", r.envelope_sup_error},
                              {"converged_envelope_error", r.converged_envelope_error},
                              {"tangency_count", r.tangency_count},
                              {"c", r.c},
                              {"r_min", r.r_min},
                              {"r_observed_min", r.r_observed_min},
                              {"h_rel_min", r.h_rel_min},
                              {"h_rel_max", r.h_rel_max}});
    }
    jentries.push_back(je);
  }
  write_text_file(out_path(cfg, "sweep.csv"),
                  to_csv({"epsilon", "chart", "z", "s_max", "bound", "envelope_sup_error",
                          "converged_envelope_error"},
                         rows));

  std::vector<std::vector<std::string>> rrows;
  for (const auto& r : sweep.ratios)
    rrows.push_back(
        {chart_name(r.chart_id), fmt17(r.eps_fine), fmt17(r.eps_coarse), fmt17(r.ratio)});
  write_text_file(out_path(cfg, "ratios.csv"),
                  to_csv({"chart", "eps_fine", "eps_coarse", "ratio"}, rrows));

  json jsweep{{"schema_version", 1},
              {"problem", sweep.problem_id},
              {"delta", sweep.delta},
              {"certificate_ok", certificate_ok},
              {"entries", jentries}};
  write_text_file(out_path(cfg, "sweep.json"), dump_json_17(jsweep));
  write_text_file(out_path(cfg, "resolved_config.json"), dump_json_17(config_to_json(cfg)));

  const CriticalManifold mani = build_manifold(p);
  const ChartPartition charts = build_charts(mani, p, cfg.margin_fraction);
  emit_manifold_svg(p, mani, out_path(cfg, "manifold.svg"));
  std::vector<double> tstars;
  if (mani.s_shaped) {
    for (const auto& chart : charts.charts) tstars.push_back(0.5 * (chart.lo + chart.hi));
    tstars.insert(tstars.begin() + 1, mani.t_min);
    tstars.insert(tstars.begin() + 3, mani.t_max);
  } else {
    const double L = p.t_end - p.t_begin;
    tstars = {p.t_begin + 0.25 * L, p.t_begin + 0.5 * L, p.t_begin + 0.75 * L};
  }
  for (std::size_t i = 0; i < tstars.size(); ++i) {
    std::ostringstream name, cap;
    name << "phase_t" << i << ".svg";
    cap << problem_id(cfg) << " at t = " << fmt_short(tstars[i]);
    emit_phase_portrait(cfg, p, mani, tstars[i], out_path(cfg, name.str()), cap.str());
  }
  emit_oscillations_svg(cfg, p, mani, charts, cfg.eps.back(), out_path(cfg, "oscillations.svg"));

  std::cout << dump_json_17(jsweep);
  return certificate_ok ? 0 : 1;
}

}  // namespace

int run_main(int argc, const char* const* argv) {
  RunConfig cfg;
  // --config file first; explicit flags then override its values.
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--config") {
      std::ifstream in(argv[i + 1]);
      if (!in) {
        std::cerr << "error: cannot open config file '" << argv[i + 1] << "'\n";
        return 2;
      }
      try {
        json j = json::parse(in, nullptr, true);
        cfg = config_from_json(j);
      } catch (const error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
      } catch (const json::exception& e) {
        std::cerr << "error: UsageError: config file: " << e.what() << "\n";
        return 2;
      }
    }
  }

  CLI::App app{"spduff: simulation and verification toolkit for the singularly perturbed "
               "forced Duffing oscillator eps^2 (a^2 y')' + f(y) = m(t)"};
  app.require_subcommand(1);

  std::string eps_spec, config_path, problem_arg, builtin_arg;
  double t0 = 0, t1 = 0, y0 = 0, w0 = 0, level = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("problem", problem_arg, "problem JSON file");
    sub->add_option("--builtin", builtin_arg, "builtin instance (D0, D1, D2)");
    sub->add_option("--config", config_path, "JSON config file; flags override its values");
    sub->add_option("--eps", eps_spec, "epsilon or comma-separated decreasing list");
    sub->add_option("--delta", cfg.delta, "energy offset Delta (> 0)");
    sub->add_option("--out", cfg.out_dir, "output directory");
    sub->add_option("--seed", cfg.seed, "seed for sampled property checks");
    sub->add_option("--margin-fraction", cfg.margin_fraction, "chart margin fraction in (0, 0.25)");
    sub->add_option("--rel-tol", cfg.rel_tol, "integrator relative tolerance");
    sub->add_option("--abs-tol", cfg.abs_tol, "integrator absolute tolerance");
    sub->add_option("--max-step", cfg.max_step_fast, "max fast-time step");
    sub->add_option("--grid-n", cfg.grid_n, "validation / assumption grid size");
    sub->add_option("--nt", cfg.n_t, "constants grid: time points");
    sub->add_option("--ny", cfg.n_y, "constants grid: state points");
    sub->add_option("--ngamma", cfg.n_gamma, "constants grid: angle points");
    return sub;
  };

  CLI::App* c_check = add_common(app.add_subcommand("check", "validate a problem and the assumptions"));
  CLI::App* c_sim = add_common(app.add_subcommand("simulate", "integrate and export the trajectory"));
  auto* o_t0 = c_sim->add_option("--t0", t0, "start time (default t_begin)");
  auto* o_t1 = c_sim->add_option("--t1", t1, "end time (default t_end)");
  auto* o_y0 = c_sim->add_option("--y0", y0, "initial y (default: standard family)");
  auto* o_w0 = c_sim->add_option("--w0", w0, "initial w");
  CLI::App* c_energy = add_common(app.add_subcommand("energy", "turning points and action-angle data"));
  c_energy->add_option("--t", cfg.t_star, "frozen time t*");
  auto* o_level = c_energy->add_option("--level", level, "energy level (default H0 + Delta)");
  c_energy->add_option("--well", cfg.well, "orbit well: left | right | outer");
  CLI::App* c_const = add_common(app.add_subcommand("constants", "chart constants of the gamma' bound"));
  CLI::App* c_sweep = add_common(app.add_subcommand("sweep", "epsilon sweep with certificates"));
  CLI::App* c_phase = add_common(app.add_subcommand("phase-portrait", "three-panel frozen-t portrait"));
  c_phase->add_option("--t", cfg.t_star, "frozen time t*");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (!problem_arg.empty()) {
      cfg.problem_path = problem_arg;
      cfg.builtin_name.clear();
    }
    if (!builtin_arg.empty()) {
      cfg.builtin_name = builtin_arg;
      if (!problem_arg.empty())
        throw error(errc::usage, "give either a problem file or --builtin, not both");
      cfg.problem_path.clear();
    }
    if (!eps_spec.empty()) {
      cfg.eps.clear();
      std::stringstream ss(eps_spec);
      std::string tok;
      while (std::getline(ss, tok, ',')) {
        try {
          cfg.eps.push_back(std::stod(tok));
        } catch (const std::exception&) {
          throw error(errc::usage, "bad epsilon value '" + tok + "'");
        }
      }
    }
    if (o_t0->count()) cfg.t0 = t0;
    if (o_t1->count()) cfg.t1 = t1;
    if (o_y0->count()) cfg.y0 = y0;
    if (o_w0->count()) cfg.w0 = w0;
    if (o_level->count()) cfg.level = level;

    if (c_check->parsed()) cfg.command = Command::check;
    if (c_sim->parsed()) cfg.command = Command::simulate;
    if (c_energy->parsed()) cfg.command = Command::energy;
    if (c_const->parsed()) cfg.command = Command::constants;
    if (c_sweep->parsed()) cfg.command = Command::sweep;
    if (c_phase->parsed()) cfg.command = Command::phase_portrait;

    // single-epsilon commands default to 0.01 when --eps is absent
    if (eps_spec.empty() &&
        (cfg.command == Command::simulate || cfg.command == Command::constants))
      if (cfg.eps.size() != 1) cfg.eps = {0.01};

    check_config(cfg);

    switch (cfg.command) {
      case Command::check: return cmd_check(cfg);
      case Command::simulate: return cmd_simulate(cfg);
      case Command::energy: return cmd_energy(cfg);
      case Command::constants: return cmd_constants(cfg);
      case Command::sweep: return cmd_sweep(cfg);
      case Command::phase_portrait: return cmd_phase_portrait(cfg);
    }
    return 0;
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == errc::usage ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace spduff
