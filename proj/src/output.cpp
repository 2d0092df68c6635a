#include "swmac/output.hpp"

#include <charconv>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "swmac/error.hpp"

namespace swmac {

namespace {

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode = std::ios::trunc) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::out | std::ios::binary | mode);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

bool uniform(const std::vector<double>& faces) {
  const double d = faces[1] - faces[0];
  for (std::size_t k = 1; k + 1 < faces.size(); ++k)
    if (std::abs((faces[k + 1] - faces[k]) - d) > 1e-12 * std::abs(d)) return false;
  return true;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

CenteredVelocity centered_velocity(const MacMesh& mesh, const VelocityField& u) {
  CenteredVelocity c{ScalarField(mesh), ScalarField(mesh)};
  for (std::size_t k : mesh.active_cells()) {
    const auto e = mesh.cell_edges(k);
    c.u1[k] = 0.5 * (u[Axis::X][e[0]] + u[Axis::X][e[1]]);
    c.u2[k] = 0.5 * (u[Axis::Y][e[2]] + u[Axis::Y][e[3]]);
  }
  return c;
}

void write_snapshot_csv(const MacMesh& mesh, const State& state, const ScalarField& z,
                        const std::filesystem::path& path) {
  std::ofstream out = open_out(path);
  write_snapshot_csv(mesh, state, z, out);
  finish(out, path);
}

void write_snapshot_csv(const MacMesh& mesh, const State& state, const ScalarField& z, std::ostream& out) {
  const CenteredVelocity uc = centered_velocity(mesh, state.u);
  out << "i,j,x_K,y_K,h,u1c,u2c,z\n";
  for (std::size_t k : mesh.active_cells()) {
    const int i = mesh.cell_i(k), j = mesh.cell_j(k);
    out << i << ',' << j << ',' << format_double(mesh.x_center(i)) << ',' << format_double(mesh.y_center(j)) << ','
        << format_double(state.h[k]) << ',' << format_double(uc.u1[k]) << ',' << format_double(uc.u2[k]) << ','
        << format_double(z[k]) << '\n';
  }
}

void write_snapshot_vtk(const MacMesh& mesh, const State& state, const ScalarField& z,
                        const std::filesystem::path& path) {
  std::ofstream out = open_out(path);
  const CenteredVelocity uc = centered_velocity(mesh, state.u);
  const auto& xf = mesh.x_faces();
  const auto& yf = mesh.y_faces();
  out << "# vtk DataFile Version 3.0\n"
      << "shallow water t=" << format_double(state.t) << " step=" << state.step << "\n"
      << "ASCII\n";
  if (uniform(xf) && uniform(yf)) {
    out << "DATASET STRUCTURED_POINTS\n"
        << "DIMENSIONS " << mesh.nx() + 1 << ' ' << mesh.ny() + 1 << " 1\n"
        << "ORIGIN " << format_double(xf.front()) << ' ' << format_double(yf.front()) << " 0\n"
        << "SPACING " << format_double(xf[1] - xf[0]) << ' ' << format_double(yf[1] - yf[0]) << " 1\n";
  } else {
    out << "DATASET RECTILINEAR_GRID\n"
        << "DIMENSIONS " << mesh.nx() + 1 << ' ' << mesh.ny() + 1 << " 1\n";
    const auto coords = [&](const char* name, const std::vector<double>& f) {
      out << name << ' ' << f.size() << " double\n";
      for (double v : f) out << format_double(v) << '\n';
    };
    coords("X_COORDINATES", xf);
    coords("Y_COORDINATES", yf);
    out << "Z_COORDINATES 1 double\n0\n";
  }
  out << "CELL_DATA " << mesh.num_cells() << '\n';
  const auto scalars = [&](const char* name, auto value) {
    out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    for (std::size_t k = 0; k < mesh.num_cells(); ++k) out << format_double(mesh.active(k) ? value(k) : 0.0) << '\n';
  };
  scalars("h", [&](std::size_t k) { return state.h[k]; });
  scalars("u1", [&](std::size_t k) { return uc.u1[k]; });
  scalars("u2", [&](std::size_t k) { return uc.u2[k]; });
  scalars("z", [&](std::size_t k) { return z[k]; });
  scalars("h_plus_z", [&](std::size_t k) { return state.h[k] + z[k]; });
  // 32 = HIDDENCELL
  out << "SCALARS vtkGhostType unsigned_char 1\nLOOKUP_TABLE default\n";
  for (std::size_t k = 0; k < mesh.num_cells(); ++k) out << (mesh.active(k) ? 0 : 32) << '\n';
  finish(out, path);
}

void write_staggered_csv(const MacMesh& mesh, const VelocityField& u, const std::filesystem::path& path) {
  std::ofstream out = open_out(path);
  out << "axis,i,j,x,y,u\n";
  for (Axis a : {Axis::X, Axis::Y}) {
    for (std::size_t e = 0; e < mesh.num_edges(a); ++e) {
      if (mesh.edge_kind(a, e) == EdgeKind::None) continue;
      const auto c = mesh.edge_center(a, e);
      out << (a == Axis::X ? 1 : 2) << ',' << mesh.edge_i(a, e) << ',' << mesh.edge_j(a, e) << ','
          << format_double(c[0]) << ',' << format_double(c[1]) << ',' << format_double(u[a][e]) << '\n';
    }
  }
  finish(out, path);
}

std::vector<SnapshotRow> read_snapshot_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line) || line != "i,j,x_K,y_K,h,u1c,u2c,z")
    throw IoError(path.string() + ": unexpected snapshot header");
  std::vector<SnapshotRow> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    SnapshotRow r;
    const char* p = line.data();
    const char* end = p + line.size();
    auto field = [&](auto& v) {
      const auto [ptr, ec] = std::from_chars(p, end, v);
      if (ec != std::errc()) throw IoError(path.string() + ":" + std::to_string(lineno) + ": bad field");
      p = ptr;
      if (p != end) {
        if (*p != ',') throw IoError(path.string() + ":" + std::to_string(lineno) + ": expected ','");
        ++p;
      }
    };
    field(r.i);
    field(r.j);
    field(r.x);
    field(r.y);
    field(r.h);
    field(r.u1);
    field(r.u2);
    field(r.z);
    if (p != end) throw IoError(path.string() + ":" + std::to_string(lineno) + ": too many fields");
    rows.push_back(r);
  }
  return rows;
}

const char* const kDiagnosticsHeader =
    "t,mass,E_k_total,E_p_total,ghz_total,entropy_total,min_h,max_h,max_u,min_kinetic_residual,"
    "min_potential_gap,cfl_mass_margin,cfl_momentum_margin,bv_increment";

std::string diagnostics_row(const BalanceReport& r) {
  const double v[] = {r.t,     r.mass,  r.kinetic_energy,       r.potential_energy,  r.topography_energy,
                      r.entropy, r.min_h, r.max_h,              r.max_u,             r.min_kinetic_residual,
                      r.min_potential_gap, r.cfl_mass_margin, r.cfl_momentum_margin, r.bv_increment};
  std::string s;
  for (double x : v) {
    if (!s.empty()) s += ',';
    s += format_double(x);
  }
  return s;
}

void write_diagnostics_row(const BalanceReport& r, const std::filesystem::path& path) {
  const bool fresh = !std::filesystem::exists(path) || std::filesystem::file_size(path) == 0;
  std::ofstream out = open_out(path, std::ios::app);
  if (fresh) out << kDiagnosticsHeader << '\n';
  out << diagnostics_row(r) << '\n';
  finish(out, path);
}

DiagnosticsWriter::DiagnosticsWriter(const std::filesystem::path& path) : path_(path), out_(open_out(path)) {
  out_ << kDiagnosticsHeader << '\n';
  finish(out_, path_);
}

void DiagnosticsWriter::append(const BalanceReport& r) {
  out_ << diagnostics_row(r) << '\n';
  if (!out_) throw IoError("write to '" + path_.string() + "' failed");
}

void write_convergence_csv(const std::vector<ConvergenceRow>& rows, const std::filesystem::path& path) {
  std::ofstream out = open_out(path);
  out << "n,dx,dt,steps,l1_error,order\n";
  for (const ConvergenceRow& r : rows)
    out << r.n << ',' << format_double(r.dx) << ',' << format_double(r.dt) << ',' << r.steps << ','
        << format_double(r.error) << ',' << (std::isnan(r.order) ? std::string() : format_double(r.order)) << '\n';
  finish(out, path);
}

std::string format_convergence_table(const std::vector<ConvergenceRow>& rows) {
  std::ostringstream os;
  os << std::setw(8) << "grid" << std::setw(12) << "dx" << std::setw(12) << "dt" << std::setw(8) << "steps"
     << std::setw(14) << "L1 error" << std::setw(8) << "order" << '\n';
  for (const ConvergenceRow& r : rows) {
    os << std::setw(8) << (std::to_string(r.n) + "^2") << std::setw(12) << std::setprecision(4) << r.dx
       << std::setw(12) << r.dt << std::setw(8) << r.steps << std::setw(14) << std::scientific
       << std::setprecision(3) << r.error << std::defaultfloat << std::setw(8);
    if (std::isnan(r.order)) os << "-";
    else os << std::fixed << std::setprecision(2) << r.order << std::defaultfloat;
    os << '\n';
  }
  return os.str();
}

}  // namespace swmac
