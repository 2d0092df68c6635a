#include "swmac/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "swmac/diagnostics.hpp"
#include "swmac/error.hpp"
#include "swmac/output.hpp"
#include "swmac/verify.hpp"

namespace swmac {

namespace {

std::string snapshot_stem(std::size_t step) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "snapshot_%06zu", step);
  return buf;
}

struct SnapshotWriter {
  const MacMesh& mesh;
  const SchemeParams& params;
  const OutputConfig& out;
  std::vector<std::filesystem::path>& files;

  void operator()(const State& s) const {
    if (!out.snapshots) return;
    const std::filesystem::path stem = out.dir / snapshot_stem(s.step);
    write_snapshot_csv(mesh, s, params.z, stem.string() + ".csv");
    files.push_back(stem.string() + ".csv");
    if (out.vtk) {
      write_snapshot_vtk(mesh, s, params.z, stem.string() + ".vtk");
      files.push_back(stem.string() + ".vtk");
    }
    if (out.staggered) {
      write_staggered_csv(mesh, s.u, stem.string() + "_staggered.csv");
      files.push_back(stem.string() + "_staggered.csv");
    }
  }
};

double to_double(const std::string& s, const char* what) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || !std::isfinite(v)) throw ConfigError(std::string("bad ") + what + " '" + s + "'");
  return v;
}

}  // namespace

RunSummary run_simulation(const RunConfig& cfg, std::ostream& log) {
  const CaseDefinition c = make_case(cfg);
  CaseSetup setup = setup_case(c);
  const MacMesh& mesh = setup.mesh;
  const SchemeParams& params = setup.params;
  for (const std::string& w : mesh.warnings()) log << "warning: " << w << '\n';

  std::filesystem::create_directories(cfg.output.dir);
  RunSummary summary;
  const SnapshotWriter snap{mesh, params, cfg.output, summary.files};
  std::optional<DiagnosticsWriter> diag;
  if (cfg.output.diagnostics) {
    diag.emplace(cfg.output.dir / "diagnostics.csv");
    summary.files.push_back(cfg.output.dir / "diagnostics.csv");
  }

  log << "case " << c.name << ": " << mesh.nx() << "x" << mesh.ny() << " cells (" << mesh.num_active_cells()
      << " active), t_end " << c.t_end << '\n';
  summary.initial_mass = integral(mesh, setup.state.h);
  snap(setup.state);

  const std::size_t stride = cfg.output.stride;
  std::vector<Observer> observers;
  observers.push_back([&](const StepRecord& r) {
    if (diag) diag->append(balance_report(mesh, r, params));
    if (stride > 0 && r.after.step % stride == 0) snap(r.after);
  });
  const State final_state = run(mesh, std::move(setup.state), params, observers);
  if (stride == 0 || final_state.step % stride != 0) snap(final_state);

  summary.steps = final_state.step;
  summary.t = final_state.t;
  summary.final_mass = integral(mesh, final_state.h);
  const HeightExtrema ext = dambreak_extrema(mesh, final_state);
  summary.min_h = ext.min_h;
  summary.max_h = ext.max_h;
  if (c.exact_h) summary.l1_error = height_l1_error(mesh, final_state, c);

  nlohmann::ordered_json j;
  j["case"] = c.name;
  j["nx"] = mesh.nx();
  j["ny"] = mesh.ny();
  j["active_cells"] = mesh.num_active_cells();
  j["steps"] = summary.steps;
  j["t"] = summary.t;
  j["initial_mass"] = summary.initial_mass;
  j["final_mass"] = summary.final_mass;
  j["min_h"] = summary.min_h;
  j["max_h"] = summary.max_h;
  if (summary.l1_error) j["l1_error"] = *summary.l1_error;
  if (!c.reference.empty()) j["reference"] = c.reference;
  const std::filesystem::path sp = cfg.output.dir / "summary.json";
  std::ofstream(sp) << j.dump(2) << '\n';
  summary.files.push_back(sp);

  log << "done: " << summary.steps << " steps, t = " << summary.t << ", h in [" << summary.min_h << ", "
      << summary.max_h << "], relative mass change "
      << (summary.final_mass - summary.initial_mass) / summary.initial_mass << '\n';
  if (summary.l1_error) log << "L1 height error " << *summary.l1_error << '\n';
  return summary;
}

std::vector<ConvergenceRow> run_convergence(const RunConfig& cfg, std::ostream& log) {
  if (cfg.grids.empty()) throw ConfigError("key 'convergence.grids': missing (or pass --grids)");
  const std::vector<ConvergenceRow> rows =
      convergence_study([&](int n) { return make_case(cfg, n); }, cfg.grids);
  log << format_convergence_table(rows);
  std::filesystem::create_directories(cfg.output.dir);
  write_convergence_csv(rows, cfg.output.dir / "convergence.csv");
  return rows;
}

int cli_main(int argc, char** argv) {
  CLI::App app{"Explicit staggered shallow water solver"};
  app.require_subcommand(1);

  std::string config_path;
  Overrides ov;
  std::string grids_arg;
  auto add_overrides = [&](CLI::App* sub) {
    sub->add_option("config", config_path, "Configuration file");
    sub->add_option("--case", ov.case_name, "Case name (paraboloid, dambreak, lake_at_rest)");
    sub->add_option("--grid", ov.grid, "Cells per axis");
    sub->add_option("--dt", ov.dt, "Fixed time step");
    sub->add_option("--cfl", ov.cfl, "CFL factor for automatic time steps");
    sub->add_option("--tend", ov.t_end, "Final time");
    sub->add_option("--out", ov.out, "Output directory");
  };

  CLI::App* run_cmd = app.add_subcommand("run", "Simulate a case and write snapshots and diagnostics");
  add_overrides(run_cmd);
  CLI::App* conv_cmd = app.add_subcommand("convergence", "L1 height error over a grid sequence");
  add_overrides(conv_cmd);
  conv_cmd->add_option("--grids", grids_arg, "Comma separated grid sizes, e.g. 100,200");

  std::uint64_t seed = 20240917;
  CLI::App* verify_cmd = app.add_subcommand("verify", "Run the property suite on small meshes");
  verify_cmd->add_option("--seed", seed, "Random seed");

  std::string exact_case;
  std::string exact_t;
  int exact_grid = 100;
  std::string exact_out;
  CLI::App* exact_cmd = app.add_subcommand("exact", "Write the exact solution of a case at time t as CSV");
  exact_cmd->add_option("case", exact_case, "Case name")->required();
  exact_cmd->add_option("t", exact_t, "Time")->required();
  exact_cmd->add_option("--grid", exact_grid, "Cells per axis");
  exact_cmd->add_option("--out", exact_out, "Output file (default: standard output)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kExitConfig;
  }

  try {
    auto load = [&]() {
      RunConfig cfg;
      if (!config_path.empty()) {
        cfg = parse_config(config_path);
      } else if (ov.case_name) {
        cfg = default_config(*ov.case_name, ov.grid.value_or(100));
      } else {
        throw ConfigError("give a configuration file or --case");
      }
      if (const char* env = std::getenv(kOutputDirEnv); env && *env) cfg.output.dir = env;
      if (!grids_arg.empty()) {
        std::stringstream ss(grids_arg);
        std::string tok;
        while (std::getline(ss, tok, ',')) ov.grids.push_back(static_cast<int>(to_double(tok, "grid size")));
      }
      apply_overrides(cfg, ov);
      validate(cfg);
      return cfg;
    };

    if (*run_cmd) {
      run_simulation(load(), std::cout);
      return kExitOk;
    }
    if (*conv_cmd) {
      run_convergence(load(), std::cout);
      return kExitOk;
    }
    if (*verify_cmd) {
      bool ok = true;
      for (const CheckResult& r : run_verification(seed)) {
        std::cout << (r.pass ? "PASS " : "FAIL ") << r.name << " (" << r.detail << ")\n";
        ok = ok && r.pass;
      }
      std::cout << (ok ? "verification passed\n" : "verification FAILED\n");
      return ok ? kExitOk : kExitVerify;
    }
    if (*exact_cmd) {
      const double t = to_double(exact_t, "time");
      const CaseDefinition c = builtin_case(exact_case, exact_grid);
      if (!c.exact_h) throw ConfigError("case '" + exact_case + "' has no exact solution");
      const MacMesh mesh = build_mesh(c);
      const SchemeParams params = make_params(c, mesh);
      ParaboloidParams pp;
      pp.g = c.g;
      const State s = make_state(
          mesh, project_scalar(mesh, [&](double x, double y) { return c.exact_h(x, y, t); }),
          project_velocity(mesh,
                           [&](double x, double y) {
                             const ExactPoint e = paraboloid_exact(x, y, t, pp);
                             return std::array<double, 2>{e.u1, e.u2};
                           }),
          c.g, t);
      if (exact_out.empty()) {
        write_snapshot_csv(mesh, s, params.z, std::cout);
      } else {
        write_snapshot_csv(mesh, s, params.z, std::filesystem::path(exact_out));
      }
      return kExitOk;
    }
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const MeshError& e) {
    std::cerr << "mesh error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return kExitSolver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitSolver;
  }
  return kExitConfig;
}

}  // namespace swmac
