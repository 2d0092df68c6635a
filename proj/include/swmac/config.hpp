#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "swmac/cases.hpp"
#include "swmac/expression.hpp"
#include "swmac/mesh.hpp"

namespace swmac {

// Flat TOML subset: comments, [section] headers, key = value with strings,
// booleans, numbers and (nested) arrays on one line. Keys are stored as
// "section.key".
struct TomlValue {
  using Array = std::vector<TomlValue>;
  std::variant<bool, double, std::string, Array> value;
  bool integer = false;
  int line = 0;
};

using TomlTable = std::map<std::string, TomlValue>;

/// Throws ConfigError("<source>:<line>: ...") on malformed input or duplicate keys.
TomlTable parse_toml(std::istream& in, const std::string& source = "<input>");

struct OutputConfig {
  std::filesystem::path dir = "out";
  /// Snapshot every `stride` steps; 0 writes the initial and final states only.
  std::size_t stride = 0;
  bool snapshots = true;
  bool vtk = true;
  bool diagnostics = true;
  /// Also dump the staggered velocity values next to each snapshot.
  bool staggered = false;
};

/// Inline case description (case = "custom").
struct CustomCase {
  Rect box;
  std::vector<Rect> obstacles;
  bool snap = false;
  Expression z;
  /// Bed values read from a table file: ny rows of nx numbers, bottom row
  /// first, piecewise constant over the box. Takes precedence over z.
  std::vector<std::vector<double>> z_table;
  Expression h0;
  Expression u1;
  Expression u2;
  std::optional<double> free_surface;
  Expression exact_h;
};

struct RunConfig {
  std::string case_name;
  int nx = 0;
  int ny = 0;
  std::optional<double> dt;
  std::optional<double> dt_ratio;
  std::optional<double> cfl;
  std::optional<double> t_end;
  double g = 9.81;
  std::optional<double> eps_dry;
  std::vector<int> grids;
  OutputConfig output;
  // built-in case knobs
  double revolutions = 1.0;
  ParaboloidParams paraboloid;
  std::array<double, 2> breach{95.0, 170.0};
  double lake_min_h = 0.05;
  std::size_t lake_steps = 500;
  CustomCase custom;
};

/// Parse and validate a configuration file. Unknown keys are rejected; errors
/// carry the file name and line or the offending key.
RunConfig parse_config(const std::filesystem::path& path);
RunConfig parse_config(std::istream& in, const std::string& source = "<input>",
                       const std::filesystem::path& base_dir = ".");

/// Configuration of a built-in case with every default filled in.
RunConfig default_config(const std::string& case_name, int n);

/// Values given on the command line (or in the environment) win over the file.
struct Overrides {
  std::optional<std::string> case_name;
  std::optional<int> grid;
  std::optional<double> dt;
  std::optional<double> cfl;
  std::optional<double> t_end;
  std::optional<std::filesystem::path> out;
  std::vector<int> grids;
};

void apply_overrides(RunConfig& cfg, const Overrides& o);

/// Re-check ranges and key combinations. Throws ConfigError naming the key.
void validate(const RunConfig& cfg);

/// Case definition for an n x n' grid; `n` replaces the configured resolution
/// when positive (convergence studies).
CaseDefinition make_case(const RunConfig& cfg, int n = 0);

}  // namespace swmac
