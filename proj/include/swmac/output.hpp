#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "swmac/cases.hpp"
#include "swmac/diagnostics.hpp"
#include "swmac/mesh.hpp"
#include "swmac/scheme.hpp"

namespace swmac {

/// Shortest decimal string that reads back to the same double.
std::string format_double(double v);

/// Cell-centered display velocity: mean of the two opposite face values.
struct CenteredVelocity {
  ScalarField u1;
  ScalarField u2;
};
CenteredVelocity centered_velocity(const MacMesh& mesh, const VelocityField& u);

/// CSV snapshot, one row per active cell in id order:
///   i,j,x_K,y_K,h,u1c,u2c,z
void write_snapshot_csv(const MacMesh& mesh, const State& state, const ScalarField& z,
                        const std::filesystem::path& path);
void write_snapshot_csv(const MacMesh& mesh, const State& state, const ScalarField& z, std::ostream& out);

/// Legacy VTK (ASCII) cell data h, u1, u2, z, h+z on STRUCTURED_POINTS (a
/// RECTILINEAR_GRID if the spacing is not uniform). Inactive cells are zero
/// and hidden through vtkGhostType.
void write_snapshot_vtk(const MacMesh& mesh, const State& state, const ScalarField& z,
                        const std::filesystem::path& path);

/// Staggered values, one row per mesh edge: axis,i,j,x,y,u
void write_staggered_csv(const MacMesh& mesh, const VelocityField& u, const std::filesystem::path& path);

struct SnapshotRow {
  int i = 0;
  int j = 0;
  double x = 0;
  double y = 0;
  double h = 0;
  double u1 = 0;
  double u2 = 0;
  double z = 0;
};

/// Reads a file written by write_snapshot_csv. Throws IoError on a malformed row.
std::vector<SnapshotRow> read_snapshot_csv(const std::filesystem::path& path);

extern const char* const kDiagnosticsHeader;

std::string diagnostics_row(const BalanceReport& r);

/// Appends one row, writing the header first if the file is new or empty.
void write_diagnostics_row(const BalanceReport& r, const std::filesystem::path& path);

/// Diagnostics series kept open for a whole run; the header is written on open.
class DiagnosticsWriter {
 public:
  explicit DiagnosticsWriter(const std::filesystem::path& path);
  void append(const BalanceReport& r);

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

void write_convergence_csv(const std::vector<ConvergenceRow>& rows, const std::filesystem::path& path);
/// Fixed-width table for the terminal.
std::string format_convergence_table(const std::vector<ConvergenceRow>& rows);

}  // namespace swmac
