#include "semiflow/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include "json.hpp"

#include "semiflow/fixedpoint.hpp"

namespace semiflow {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void atomic_write(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp.string());
    f << content;
    if (!f) throw std::runtime_error("write failed: " + tmp.string());
  }
  fs::rename(tmp, path);
}

// ---- config accessors ----------------------------------------------------

const json& req(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) {
    throw ConfigError(std::string("missing config key: ") + key);
  }
  return *it;
}

double num_or(const json& j, const char* key, double def) {
  auto it = j.find(key);
  return it == j.end() ? def : it->get<double>();
}

int int_or(const json& j, const char* key, int def) {
  auto it = j.find(key);
  return it == j.end() ? def : it->get<int>();
}

std::string str_or(const json& j, const char* key, const std::string& def) {
  auto it = j.find(key);
  return it == j.end() ? def : it->get<std::string>();
}

// ---- catalogs -------------------------------------------------------------

GridPtr build_grid(const json& j) {
  const std::string kind = req(j, "kind").get<std::string>();
  if (kind == "interval") {
    return Grid::interval(req(j, "length").get<double>(),
                          req(j, "nodes").get<int>());
  }
  if (kind == "rectangle") {
    return Grid::rectangle(req(j, "lx").get<double>(),
                           req(j, "ly").get<double>(),
                           req(j, "nx").get<int>(), req(j, "ny").get<int>());
  }
  throw ConfigError("unknown grid kind: " + kind);
}

GraphSpec build_graph(const json& j) {
  const std::string kind = str_or(j, "kind", "none");
  if (kind == "none") return GraphSpec::none();
  if (kind == "absolute_value") return GraphSpec::absolute_value();
  if (kind == "indicator_interval") {
    return GraphSpec::indicator_interval(req(j, "lower").get<double>(),
                                         req(j, "upper").get<double>());
  }
  if (kind == "power") return GraphSpec::power(req(j, "exponent").get<double>());
  if (kind == "positive_part") return GraphSpec::positive_part();
  throw ConfigError("unknown graph kind: " + kind);
}

LowerOrder build_lower_order(const json& j) {
  const std::string kind = str_or(j, "kind", "none");
  if (kind == "none") return LowerOrder::none();
  const double c = req(j, "coefficient").get<double>();
  if (kind == "linear") return LowerOrder::linear(c);
  if (kind == "sine") return LowerOrder::sine(c);
  throw ConfigError("unknown lower-order kind: " + kind);
}

EnergyFunctional build_energy(const GridPtr& grid, const json& j) {
  SmoothPart smooth;
  smooth.p = num_or(j, "p", 2.0);
  smooth.p_weight = num_or(j, "p_weight", 1.0);
  const std::string bc = str_or(j, "bc", "dirichlet");
  if (bc == "dirichlet") {
    smooth.bc = Bc::dirichlet;
  } else if (bc == "neumann") {
    smooth.bc = Bc::neumann;
  } else {
    throw ConfigError("unknown boundary condition: " + bc);
  }
  smooth.eps = num_or(j, "eps", smooth.p < 2.0 ? 1e-8 : 0.0);
  if (j.contains("lower_order")) {
    smooth.lower = build_lower_order(j.at("lower_order"));
  }
  GraphSpec graph =
      j.contains("graph") ? build_graph(j.at("graph")) : GraphSpec::none();
  const double extra = num_or(j, "extra_shift", 0.0);
  try {
    return EnergyFunctional(grid, std::move(smooth), std::move(graph), extra);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

GridFunction build_initial(const GridPtr& grid, const json& j,
                           unsigned default_seed) {
  const std::string kind = str_or(j, "kind", "zero");
  GridFunction u(grid);
  const double pi = std::acos(-1.0);
  if (kind == "zero") return u;
  if (kind == "constant") {
    const double c = req(j, "value").get<double>();
    for (auto& x : u.v) x = c;
    return u;
  }
  if (kind == "sine") {
    const double k = num_or(j, "frequency", 1.0);
    const double a = num_or(j, "amplitude", 1.0);
    for (int i = 0; i < u.size(); ++i) {
      const auto xy = grid->coord(i);
      double val = std::sin(k * pi * xy[0] / grid->extent(0));
      if (grid->dimension() == 2) {
        val *= std::sin(k * pi * xy[1] / grid->extent(1));
      }
      u.v[i] = a * val;
    }
    return u;
  }
  if (kind == "step") {
    const double x0 = req(j, "threshold").get<double>();
    const double a = num_or(j, "amplitude", 1.0);
    for (int i = 0; i < u.size(); ++i) {
      u.v[i] = grid->coord(i)[0] < x0 ? a : 0.0;
    }
    return u;
  }
  if (kind == "random") {
    const unsigned seed =
        j.contains("seed") ? j.at("seed").get<unsigned>() : default_seed;
    const double a = num_or(j, "amplitude", 1.0);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (auto& x : u.v) x = a * unif(rng);
    return u;
  }
  throw ConfigError("unknown initial-data kind: " + kind);
}

// samples at every mesh node; scheme uses the right-endpoint sample
std::vector<GridFunction> build_forcing(const GridPtr& grid, const json* j,
                                        const TimeMesh& mesh) {
  const std::string kind = j ? str_or(*j, "kind", "none") : "none";
  const double pi = std::acos(-1.0);
  std::vector<GridFunction> out;
  out.reserve(mesh.t.size());
  for (double t : mesh.t) {
    GridFunction f(grid);
    if (kind == "none") {
      // stays zero
    } else if (kind == "constant") {
      const double c = req(*j, "value").get<double>();
      for (auto& x : f.v) x = c;
    } else if (kind == "time_sine") {
      const double a = req(*j, "amplitude").get<double>();
      const double w = num_or(*j, "angular_frequency", 1.0);
      const double c = a * std::sin(w * t);
      for (auto& x : f.v) x = c;
    } else if (kind == "spatial_sine") {
      const double a = req(*j, "amplitude").get<double>();
      const double k = num_or(*j, "frequency", 1.0);
      for (int i = 0; i < f.size(); ++i) {
        const auto xy = grid->coord(i);
        double val = std::sin(k * pi * xy[0] / grid->extent(0));
        if (grid->dimension() == 2) {
          val *= std::sin(k * pi * xy[1] / grid->extent(1));
        }
        f.v[i] = a * val;
      }
    } else {
      throw ConfigError("unknown forcing kind: " + kind);
    }
    out.push_back(std::move(f));
  }
  return out;
}

TimeMesh build_mesh(const json& j) {
  const std::string kind = str_or(j, "kind", "uniform");
  const int steps = req(j, "steps").get<int>();
  const double T = req(j, "horizon").get<double>();
  if (steps <= 0 || !(T > 0.0)) {
    throw ConfigError("time mesh needs steps > 0 and horizon > 0");
  }
  if (kind == "uniform") return TimeMesh::uniform(steps, T);
  if (kind == "graded") {
    return TimeMesh::graded(steps, T, num_or(j, "gamma", 2.0));
  }
  throw ConfigError("unknown mesh kind: " + kind);
}

Nemytskii build_perturbation(const json& j) {
  const std::string kind = req(j, "kind").get<std::string>();
  if (kind == "sqrt_abs") return Nemytskii::sqrt_abs();
  if (kind == "linear") {
    return Nemytskii::linear(req(j, "coefficient").get<double>());
  }
  if (kind == "logistic") {
    return Nemytskii::logistic(req(j, "coefficient").get<double>());
  }
  throw ConfigError("unknown perturbation kind: " + kind);
}

PicardConfig build_picard(const json* j) {
  PicardConfig cfg;
  if (!j) return cfg;
  cfg.tol = num_or(*j, "tol", cfg.tol);
  cfg.max_outer = int_or(*j, "max_outer", cfg.max_outer);
  cfg.theta = num_or(*j, "theta", cfg.theta);
  if (j->contains("seed")) {
    const json& s = j->at("seed");
    const std::string kind = req(s, "kind").get<std::string>();
    if (kind == "zero") {
      cfg.seed = PicardConfig::Seed::zero;
    } else if (kind == "frozen_initial") {
      cfg.seed = PicardConfig::Seed::frozen_initial;
    } else if (kind == "constant") {
      cfg.seed = PicardConfig::Seed::constant;
      cfg.constant_value = req(s, "value").get<double>();
    } else {
      throw ConfigError("unknown picard seed kind: " + kind);
    }
  }
  if (!(cfg.tol > 0.0) || cfg.max_outer <= 0 ||
      !(cfg.theta > 0.0 && cfg.theta <= 1.0)) {
    throw ConfigError("picard parameters out of range");
  }
  return cfg;
}

struct Tolerances {
  double prox_tol = 1e-10;
  int max_iterations = 20000;
  double inner_tol = 1e-9;
  int max_inner = 50000;
};

Tolerances build_tolerances(const json* j) {
  Tolerances t;
  if (!j) return t;
  t.prox_tol = num_or(*j, "prox_tol", t.prox_tol);
  t.max_iterations = int_or(*j, "max_iterations", t.max_iterations);
  t.inner_tol = num_or(*j, "inner_tol", t.inner_tol);
  t.max_inner = int_or(*j, "max_inner", t.max_inner);
  if (!(t.prox_tol > 0.0) || t.max_iterations <= 0 || !(t.inner_tol > 0.0) ||
      t.max_inner <= 0) {
    throw ConfigError("tolerances must be positive");
  }
  return t;
}

ReportOptions build_report_options(const json* j, const RunOptions& run) {
  ReportOptions opt;
  opt.seed = run.seed;
  if (j) {
    opt.slack = num_or(*j, "slack", opt.slack);
    opt.smoothing_slack = num_or(*j, "smoothing_slack", opt.slack);
    opt.velocity_slack = num_or(*j, "velocity_slack", opt.slack);
    opt.selection_tol = num_or(*j, "selection_tol", opt.selection_tol);
    opt.dissipation_tol = num_or(*j, "dissipation_tol", opt.dissipation_tol);
    opt.directions_per_step =
        int_or(*j, "directions_per_step", opt.directions_per_step);
    if (j->contains("include_dissipation")) {
      opt.include_dissipation = j->at("include_dissipation").get<bool>();
    }
    if (j->contains("overrides")) {
      for (auto& [name, v] : j->at("overrides").items()) {
        opt.slack_overrides[name] = v.get<double>();
      }
    }
  } else {
    opt.smoothing_slack = opt.slack;
    opt.velocity_slack = opt.slack;
  }
  // command-line overrides win over config-level overrides
  for (const auto& [name, v] : run.slack_overrides) {
    opt.slack_overrides[name] = v;
  }
  return opt;
}

// ---- per-mode execution ----------------------------------------------------

json estimates_json(const EstimateReport& report) {
  json arr = json::array();
  for (const auto& e : report.entries) {
    arr.push_back({{"name", e.name},
                   {"ratio", std::isfinite(e.ratio) ? json(e.ratio) : json("inf")},
                   {"slack", e.slack},
                   {"pass", e.pass},
                   {"worst_time_index", e.worst_time_index}});
  }
  return arr;
}

void dump_states(const fs::path& dir, const std::string& name,
                 const Trajectory& tr, DumpStates mode,
                 std::vector<fs::path>& artifacts) {
  if (mode == DumpStates::none) return;
  if (mode == DumpStates::final) {
    fs::path p = dir / (name + "_state_final.csv");
    write_grid_function_csv(p, tr.state.back());
    artifacts.push_back(p);
    return;
  }
  for (size_t n = 0; n < tr.state.size(); ++n) {
    fs::path p = dir / (name + "_state_" + std::to_string(n) + ".csv");
    write_grid_function_csv(p, tr.state[n]);
    artifacts.push_back(p);
  }
}

EstimateEntry flag_entry(std::string name, bool ok) {
  EstimateEntry e;
  e.name = std::move(name);
  e.ratio = ok ? 0.0 : kInf;
  e.slack = 1.0;
  e.pass = ok;
  return e;
}

void finalize(ScenarioResult& result) {
  if (result.exit_code == 0 && !result.report.all_pass()) {
    result.exit_code = 1;
    std::string names;
    for (const auto& e : result.report.entries) {
      if (!e.pass) names += (names.empty() ? "" : ", ") + e.name;
    }
    result.message = "estimate failure: " + names;
  }
}

json fixed_point_json(const FixedPointReport& rep) {
  json j;
  j["converged"] = rep.converged;
  j["iterations"] = rep.iterations;
  j["distances"] = rep.distances;
  j["schaefer_worst_ratio"] = rep.schaefer_worst_ratio;
  j["growth_worst_violation"] = rep.audit.worst_violation;
  return j;
}

ScenarioResult run_evolution_scenario(const json& cfg, const RunOptions& opt,
                                      ScenarioResult result, bool perturbed) {
  const GridPtr grid = build_grid(req(cfg, "grid"));
  const EnergyFunctional phi = build_energy(grid, req(cfg, "energy"));
  const double probe = convexity_probe(phi, opt.seed, 32);
  if (probe > 0.0) {
    throw ConfigError("declared shift fails the convexity probe by " +
                      fmt(probe));
  }
  const GridFunction u0 = build_initial(grid, req(cfg, "initial"), opt.seed);
  const TimeMesh mesh = build_mesh(req(cfg, "mesh"));
  const json* tols_cfg = cfg.contains("tolerances") ? &cfg.at("tolerances") : nullptr;
  const Tolerances tols = build_tolerances(tols_cfg);
  const json* est_cfg = cfg.contains("estimates") ? &cfg.at("estimates") : nullptr;
  ReportOptions report_opt = build_report_options(est_cfg, opt);

  Trajectory tr;
  std::optional<FixedPointReport> picard_report;
  if (perturbed) {
    const Nemytskii G = build_perturbation(req(cfg, "perturbation"));
    const json* pc = cfg.contains("picard") ? &cfg.at("picard") : nullptr;
    PerturbedSolution sol = solve_perturbed(phi, G, u0, mesh, tols.prox_tol,
                                            build_picard(pc),
                                            tols.max_iterations);
    tr = std::move(sol.trajectory);
    picard_report = std::move(sol.report);
  } else {
    const json* fj = cfg.contains("forcing") ? &cfg.at("forcing") : nullptr;
    const bool unforced = !fj || str_or(*fj, "kind", "none") == "none";
    if (unforced && phi.omega() == 0.0 && est_cfg == nullptr) {
      report_opt.include_dissipation = true;
    } else if (unforced && phi.omega() == 0.0 && est_cfg &&
               !est_cfg->contains("include_dissipation")) {
      report_opt.include_dissipation = true;
    }
    const auto forcing = build_forcing(grid, fj, mesh);
    tr = evolve(phi, u0, forcing, mesh, tols.prox_tol, tols.max_iterations);
  }

  result.report = full_report(phi, tr, report_opt);
  if (picard_report) {
    EstimateEntry schaefer;
    schaefer.name = "schaefer_bound";
    schaefer.ratio = picard_report->schaefer_worst_ratio;
    schaefer.slack = report_opt.slack;
    auto it = report_opt.slack_overrides.find(schaefer.name);
    if (it != report_opt.slack_overrides.end()) schaefer.slack = it->second;
    schaefer.pass = schaefer.ratio <= schaefer.slack;
    result.report.entries.push_back(schaefer);
    result.report.entries.push_back(
        flag_entry("picard_converged", picard_report->converged));
  }

  fs::path traj_path = opt.out_dir / (result.name + "_trajectory.csv");
  write_trajectory_csv(traj_path, tr);
  result.artifacts.push_back(traj_path);
  dump_states(opt.out_dir, result.name, tr, opt.dump, result.artifacts);
  if (picard_report) {
    fs::path p = opt.out_dir / (result.name + "_fixedpoint.json");
    atomic_write(p, fixed_point_json(*picard_report).dump(2) + "\n");
    result.artifacts.push_back(p);
  }
  finalize(result);
  return result;
}

ScenarioResult run_dtn_scenario(const json& cfg, const RunOptions& opt,
                                ScenarioResult result) {
  const GridPtr grid = build_grid(req(cfg, "grid"));
  const json& energy_cfg = req(cfg, "energy");
  const double p = num_or(energy_cfg, "p", 2.0);
  if (!(p > 1.0)) throw ConfigError("dtn energy needs p > 1");
  const TimeMesh mesh = build_mesh(req(cfg, "mesh"));
  const json* tols_cfg = cfg.contains("tolerances") ? &cfg.at("tolerances") : nullptr;
  const Tolerances tols = build_tolerances(tols_cfg);
  DtnTolerances dtols;
  dtols.inner_tol = tols.inner_tol;
  dtols.max_inner = tols.max_inner;
  dtols.eps = num_or(energy_cfg, "eps", p < 2.0 ? 1e-8 : 0.0);

  auto space = std::make_shared<const TraceSpace>(grid);
  const GridFunction full_u0 =
      build_initial(grid, req(cfg, "initial"), opt.seed);
  const BoundaryFunction u0 = trace(space, full_u0);

  std::optional<Nemytskii> G;
  if (cfg.contains("perturbation")) {
    G = build_perturbation(cfg.at("perturbation"));
  }
  const json* pc = cfg.contains("picard") ? &cfg.at("picard") : nullptr;
  BoundaryTrajectory tr = evolve_dtn(space, p, u0, G ? &*G : nullptr, mesh,
                                     dtols, build_picard(pc));

  // reduced-energy dissipation: each recorded extension minimizes the
  // interior energy over its own trace, so its value is the reduced energy
  const json* est_cfg = cfg.contains("estimates") ? &cfg.at("estimates") : nullptr;
  ReportOptions report_opt = build_report_options(est_cfg, opt);
  if (!G) {
    SmoothPart smooth;
    smooth.p = p;
    smooth.bc = Bc::neumann;
    smooth.eps = dtols.eps;
    const EnergyFunctional interior(grid, smooth);
    double worst = 0.0;
    int worst_index = -1;
    for (int n = 0; n < mesh.steps(); ++n) {
      BoundaryFunction du(space);
      for (int k = 0; k < du.size(); ++k) {
        du.v[k] = tr.state[n + 1].v[k] - tr.state[n].v[k];
      }
      const double kinetic =
          boundary_inner_product(du, du) / (2.0 * mesh.tau(n));
      const double violation = interior.smooth_value(tr.extension[n + 1]) +
                               kinetic -
                               interior.smooth_value(tr.extension[n]);
      if (violation > worst) {
        worst = violation;
        worst_index = n + 1;
      }
    }
    EstimateEntry e;
    e.name = "dissipation";
    e.ratio = worst / report_opt.dissipation_tol;
    e.slack = 1.0;
    e.pass = e.ratio <= e.slack;
    e.worst_time_index = worst_index;
    result.report.entries.push_back(e);
  } else {
    EstimateEntry schaefer;
    schaefer.name = "schaefer_bound";
    schaefer.ratio = tr.picard.schaefer_worst_ratio;
    schaefer.slack = report_opt.slack;
    schaefer.pass = schaefer.ratio <= schaefer.slack;
    result.report.entries.push_back(schaefer);
    result.report.entries.push_back(
        flag_entry("picard_converged", tr.picard.converged));
  }
  double worst_inner = 0.0;
  for (double r : tr.inner_residual) worst_inner = std::max(worst_inner, r);
  EstimateEntry inner;
  inner.name = "inner_residual";
  inner.ratio = worst_inner / dtols.inner_tol;
  inner.slack = 1.0;
  inner.pass = inner.ratio <= inner.slack;
  result.report.entries.push_back(inner);
  for (auto& e : result.report.entries) {
    auto it = report_opt.slack_overrides.find(e.name);
    if (it != report_opt.slack_overrides.end()) {
      e.slack = it->second;
      e.pass = e.ratio <= e.slack;
    }
  }

  fs::path bpath = opt.out_dir / (result.name + "_boundary.csv");
  write_boundary_trajectory_csv(bpath, tr);
  result.artifacts.push_back(bpath);
  if (opt.dump == DumpStates::final) {
    fs::path p2 = opt.out_dir / (result.name + "_extension_final.csv");
    write_grid_function_csv(p2, tr.extension.back());
    result.artifacts.push_back(p2);
  } else if (opt.dump == DumpStates::all) {
    for (size_t n = 0; n < tr.extension.size(); ++n) {
      fs::path p2 =
          opt.out_dir / (result.name + "_extension_" + std::to_string(n) + ".csv");
      write_grid_function_csv(p2, tr.extension[n]);
      result.artifacts.push_back(p2);
    }
  }
  finalize(result);
  return result;
}

}  // namespace

void write_grid_function_csv(const fs::path& path, const GridFunction& u) {
  std::ostringstream out;
  out << "# semiflow gridfunction v1\n";
  out << "node,x,y,value\n";
  for (int i = 0; i < u.size(); ++i) {
    const auto xy = u.grid->coord(i);
    out << i << ',' << fmt(xy[0]) << ',' << fmt(xy[1]) << ',' << fmt(u.v[i])
        << '\n';
  }
  atomic_write(path, out.str());
}

void write_trajectory_csv(const fs::path& path, const Trajectory& tr) {
  std::ostringstream out;
  out << "# semiflow trajectory v1\n";
  out << "time,h_norm,energy,step_residual,prox_iterations\n";
  for (size_t n = 0; n < tr.state.size(); ++n) {
    const double res = n == 0 ? 0.0 : tr.residual[n - 1];
    const int its = n == 0 ? 0 : tr.iterations[n - 1];
    out << fmt(tr.mesh.t[n]) << ',' << fmt(norm(tr.state[n])) << ','
        << fmt(tr.energy[n]) << ',' << fmt(res) << ',' << its << '\n';
  }
  atomic_write(path, out.str());
}

void write_boundary_trajectory_csv(const fs::path& path,
                                   const BoundaryTrajectory& tr) {
  std::ostringstream out;
  out << "# semiflow boundary trajectory v1\n";
  out << "boundary_node,time,value\n";
  for (size_t n = 0; n < tr.state.size(); ++n) {
    for (int k = 0; k < tr.state[n].size(); ++k) {
      out << k << ',' << fmt(tr.mesh.t[n]) << ',' << fmt(tr.state[n].v[k])
          << '\n';
    }
  }
  atomic_write(path, out.str());
}

void write_report_json(const fs::path& path, const ScenarioResult& result) {
  json j;
  j["scenario"] = result.name;
  j["exit_code"] = result.exit_code;
  j["message"] = result.message;
  j["estimates"] = estimates_json(result.report);
  atomic_write(path, j.dump(2) + "\n");
}

ScenarioResult run_scenario(const fs::path& config, const RunOptions& opt) {
  ScenarioResult result;
  result.name = config.stem().string();
  json cfg;
  try {
    std::ifstream in(config);
    if (!in) throw ConfigError("cannot read config: " + config.string());
    cfg = json::parse(in);
    result.name = str_or(cfg, "name", result.name);
    const std::string mode = str_or(cfg, "mode", "run");
    if (!opt.expected_mode.empty() && mode != opt.expected_mode) {
      throw ConfigError("config mode '" + mode + "' does not match the '" +
                        opt.expected_mode + "' subcommand");
    }
    if (opt.out_dir.empty()) throw ConfigError("output directory not set");
    fs::create_directories(opt.out_dir);
    if (mode == "run") {
      result = run_evolution_scenario(cfg, opt, std::move(result), false);
    } else if (mode == "perturbed") {
      result = run_evolution_scenario(cfg, opt, std::move(result), true);
    } else if (mode == "dtn") {
      result = run_dtn_scenario(cfg, opt, std::move(result));
    } else {
      throw ConfigError("unknown mode: " + mode);
    }
  } catch (const ConfigError& e) {
    result.exit_code = 2;
    result.message = e.what();
  } catch (const json::exception& e) {
    result.exit_code = 2;
    result.message = e.what();
  } catch (const std::exception& e) {
    result.exit_code = 3;
    result.message = e.what();
  }
  if (result.exit_code != 2) {
    try {
      fs::path rpath = opt.out_dir / (result.name + "_report.json");
      write_report_json(rpath, result);
      result.artifacts.push_back(rpath);
    } catch (const std::exception& e) {
      result.exit_code = 3;
      result.message = e.what();
    }
  }
  return result;
}

ScenarioResult run_suite(const fs::path& manifest, const RunOptions& opt) {
  ScenarioResult summary;
  summary.name = "suite";
  json doc;
  try {
    std::ifstream in(manifest);
    if (!in) throw ConfigError("cannot read suite manifest: " + manifest.string());
    doc = json::parse(in);
  } catch (const std::exception& e) {
    summary.exit_code = 2;
    summary.message = e.what();
    return summary;
  }
  if (!doc.contains("scenarios") || !doc.at("scenarios").is_array() ||
      doc.at("scenarios").empty()) {
    summary.exit_code = 2;
    summary.message = "suite manifest lists no scenarios";
    return summary;
  }

  bool ok = true;
  for (const auto& item : doc.at("scenarios")) {
    fs::path cfg_path;
    int expect = 0;
    try {
      cfg_path = manifest.parent_path() /
                 req(item, "config").get<std::string>();
      expect = int_or(item, "expect", 0);
    } catch (const std::exception& e) {
      summary.exit_code = 2;
      summary.message = e.what();
      return summary;
    }
    RunOptions sub = opt;
    sub.out_dir = opt.out_dir / cfg_path.stem();
    const ScenarioResult r = run_scenario(cfg_path, sub);
    const bool match = r.exit_code == expect;
    ok = ok && match;
    std::cout << (match ? "PASS" : "FAIL") << "  " << r.name << "  exit "
              << r.exit_code << " (expected " << expect << ")"
              << (r.message.empty() ? "" : "  [" + r.message + "]") << "\n";
  }
  summary.exit_code = ok ? 0 : 1;
  if (!ok) summary.message = "suite expectations not met";
  return summary;
}

}  // namespace semiflow
