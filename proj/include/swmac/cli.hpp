#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "swmac/cases.hpp"
#include "swmac/config.hpp"

namespace swmac {

/// Environment variable overriding the configured output directory.
inline constexpr const char* kOutputDirEnv = "SWMAC_OUTPUT_DIR";

enum ExitCode : int {
  kExitOk = 0,
  kExitSolver = 1,
  kExitConfig = 2,
  kExitVerify = 3,
};

struct RunSummary {
  std::size_t steps = 0;
  double t = 0;
  double initial_mass = 0;
  double final_mass = 0;
  double min_h = 0;
  double max_h = 0;
  std::optional<double> l1_error;
  std::vector<std::filesystem::path> files;
};

/// Simulate a configured case, writing snapshots, diagnostics.csv and
/// summary.json into cfg.output.dir. Progress goes to `log`.
RunSummary run_simulation(const RunConfig& cfg, std::ostream& log);

/// Convergence table over cfg.grids (written to convergence.csv as well).
std::vector<ConvergenceRow> run_convergence(const RunConfig& cfg, std::ostream& log);

int cli_main(int argc, char** argv);

}  // namespace swmac
