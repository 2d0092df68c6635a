#include "swmac/operators.hpp"

#include <sstream>

#include "swmac/error.hpp"

namespace swmac {

std::array<DualFace, 4> dual_faces(const MacMesh& mesh, const FluxSet& fluxes, Axis a, std::size_t e) {
  const bool ax = a == Axis::X;
  const int i = mesh.edge_i(a, e), j = mesh.edge_j(a, e);
  const int p = ax ? i : j, q = ax ? j : i;
  const int np = ax ? mesh.nx() : mesh.ny();
  const int nq = ax ? mesh.ny() : mesh.nx();
  const auto& normal = fluxes.normal[index(a)];
  const auto& tangent = fluxes.tangent[index(a)];

  auto neighbor = [&](int pp, int qq) -> std::size_t {
    if (pp < 0 || pp > np || qq < 0 || qq >= nq) return npos;
    const std::size_t id = ax ? mesh.edge_id(a, pp, qq) : mesh.edge_id(a, qq, pp);
    return mesh.edge_kind(a, id) == EdgeKind::None ? npos : id;
  };
  auto cell = [&](int pp, int qq) { return ax ? mesh.cell_id(pp, qq) : mesh.cell_id(qq, pp); };
  auto node = [&](int pp, int qq) { return ax ? mesh.node_id(pp, qq) : mesh.node_id(qq, pp); };

  std::array<DualFace, 4> f;
  if (p > 0) f[0] = {-normal[cell(p - 1, q)], neighbor(p - 1, q)};
  if (p < np) f[1] = {normal[cell(p, q)], neighbor(p + 1, q)};
  f[2] = {-tangent[node(p, q)], neighbor(p, q - 1)};
  f[3] = {tangent[node(p, q + 1)], neighbor(p, q + 1)};
  return f;
}

FluxSet primal_mass_fluxes(const MacMesh& mesh, const ScalarField& h, const VelocityField& u) {
  for (std::size_t c : mesh.active_cells()) {
    if (h[c] < 0) {
      std::ostringstream os;
      os << "negative height " << h[c] << " in " << mesh.cell_label(c);
      throw SolverError(os.str());
    }
  }
  FluxSet f;
  f.mass = EdgeField(mesh);
  f.upwind_h = EdgeField(mesh);
  for (Axis a : {Axis::X, Axis::Y}) {
    auto& mass = f.mass[a];
    auto& hup = f.upwind_h[a];
    const auto& ua = u[a];
    for (std::size_t e = 0; e < mass.size(); ++e) {
      const EdgeKind kind = mesh.edge_kind(a, e);
      if (kind == EdgeKind::None) continue;
      const std::size_t lo = mesh.low_cell(a, e), hi = mesh.high_cell(a, e);
      if (kind == EdgeKind::Exterior) {
        hup[e] = h[lo != npos ? lo : hi];
        continue;
      }
      // u_{K,sigma} = u for the low cell; ties go to the low cell.
      hup[e] = ua[e] >= 0 ? h[lo] : h[hi];
      mass[e] = mesh.edge_length(a, e) * hup[e] * ua[e];
    }
  }
  return f;
}

void dual_fluxes(const MacMesh& mesh, FluxSet& f) {
  const int nx = mesh.nx(), ny = mesh.ny();
  for (Axis a : {Axis::X, Axis::Y}) {
    const Axis b = other(a);
    const auto& ma = f.mass[a];
    const auto& mb = f.mass[b];
    auto& normal = f.normal[index(a)];
    auto& tangent = f.tangent[index(a)];
    normal.assign(mesh.num_cells(), 0.0);
    tangent.assign(mesh.num_nodes(), 0.0);
    for (std::size_t c : mesh.active_cells()) {
      const int i = mesh.cell_i(c), j = mesh.cell_j(c);
      const std::size_t lo = mesh.edge_id(a, i, j);
      const std::size_t hi = a == Axis::X ? mesh.edge_id(a, i + 1, j) : mesh.edge_id(a, i, j + 1);
      normal[c] = 0.5 * (ma[lo] + ma[hi]);
    }
    // Tangent face at node (i, j): halves of the two b-edges on the lattice line
    // through the node, on either side of it.
    for (int j = 0; j <= ny; ++j) {
      for (int i = 0; i <= nx; ++i) {
        double s = 0;
        if (a == Axis::X) {
          if (i > 0) s += mb[mesh.edge_id(b, i - 1, j)];
          if (i < nx) s += mb[mesh.edge_id(b, i, j)];
        } else {
          if (j > 0) s += mb[mesh.edge_id(b, i, j - 1)];
          if (j < ny) s += mb[mesh.edge_id(b, i, j)];
        }
        tangent[mesh.node_id(i, j)] = 0.5 * s;
      }
    }
  }
}

FluxSet mass_fluxes(const MacMesh& mesh, const ScalarField& h, const VelocityField& u) {
  FluxSet f = primal_mass_fluxes(mesh, h, u);
  dual_fluxes(mesh, f);
  return f;
}

ScalarField divergence(const MacMesh& mesh, const FluxSet& fluxes) {
  ScalarField d(mesh);
  const auto& mx = fluxes.mass[Axis::X];
  const auto& my = fluxes.mass[Axis::Y];
  for (std::size_t c : mesh.active_cells()) {
    const auto ed = mesh.cell_edges(c);
    d[c] = (mx[ed[1]] - mx[ed[0]] + my[ed[3]] - my[ed[2]]) / mesh.cell_area(c);
  }
  return d;
}

ScalarField velocity_divergence(const MacMesh& mesh, const VelocityField& u) {
  ScalarField d(mesh);
  for (std::size_t c : mesh.active_cells()) {
    const auto ed = mesh.cell_edges(c);
    double s = 0;
    for (int k = 0; k < 4; ++k) {
      const Axis a = k < 2 ? Axis::X : Axis::Y;
      if (!mesh.interior(a, ed[k])) continue;
      s += mesh.normal_sign(a, ed[k], c) * mesh.edge_length(a, ed[k]) * u[a][ed[k]];
    }
    d[c] = s / mesh.cell_area(c);
  }
  return d;
}

EdgeField gradient(const MacMesh& mesh, const ScalarField& q) {
  EdgeField g(mesh);
  for (Axis a : {Axis::X, Axis::Y}) {
    auto& ga = g[a];
    for (std::size_t e = 0; e < ga.size(); ++e) {
      if (!mesh.interior(a, e)) continue;
      ga[e] = mesh.edge_length(a, e) / mesh.dual_volume(a, e) * (q[mesh.high_cell(a, e)] - q[mesh.low_cell(a, e)]);
    }
  }
  return g;
}

EdgeField dual_heights(const MacMesh& mesh, const ScalarField& h) {
  EdgeField hd(mesh);
  for (Axis a : {Axis::X, Axis::Y}) {
    auto& ha = hd[a];
    for (std::size_t e = 0; e < ha.size(); ++e) {
      const EdgeKind kind = mesh.edge_kind(a, e);
      if (kind == EdgeKind::None) continue;
      const std::size_t lo = mesh.low_cell(a, e), hi = mesh.high_cell(a, e);
      if (kind == EdgeKind::Exterior) {
        ha[e] = h[lo != npos ? lo : hi];
        continue;
      }
      ha[e] = (mesh.dual_half_low(a, e) * h[lo] + mesh.dual_half_high(a, e) * h[hi]) / mesh.dual_volume(a, e);
    }
  }
  return hd;
}

EdgeField interp_centered(const MacMesh& mesh, const ScalarField& h) {
  EdgeField hc(mesh);
  for (Axis a : {Axis::X, Axis::Y}) {
    auto& ha = hc[a];
    for (std::size_t e = 0; e < ha.size(); ++e) {
      const EdgeKind kind = mesh.edge_kind(a, e);
      if (kind == EdgeKind::None) continue;
      const std::size_t lo = mesh.low_cell(a, e), hi = mesh.high_cell(a, e);
      if (kind == EdgeKind::Exterior) {
        ha[e] = h[lo != npos ? lo : hi];
      } else {
        ha[e] = 0.5 * (h[lo] + h[hi]);
      }
    }
  }
  return hc;
}

EdgeField convection(const MacMesh& mesh, const FluxSet& fluxes, const VelocityField& u) {
  EdgeField out(mesh);
  for (Axis a : {Axis::X, Axis::Y}) {
    const auto& ua = u[a];
    auto& oa = out[a];
    for (std::size_t e = 0; e < oa.size(); ++e) {
      if (!mesh.interior(a, e)) continue;
      double s = 0;
      for (const DualFace& f : dual_faces(mesh, fluxes, a, e)) s += f.flux * upwind_velocity(f, ua, e);
      oa[e] = s / mesh.dual_volume(a, e);
    }
  }
  return out;
}

EdgeField dual_mass_balance_residual(const MacMesh& mesh, const EdgeField& dual_h_old, const EdgeField& dual_h_new,
                                     const FluxSet& fluxes, double dt) {
  EdgeField r(mesh);
  for (Axis a : {Axis::X, Axis::Y}) {
    auto& ra = r[a];
    for (std::size_t e = 0; e < ra.size(); ++e) {
      if (mesh.edge_kind(a, e) == EdgeKind::None) continue;
      double s = mesh.dual_volume(a, e) / dt * (dual_h_new[a][e] - dual_h_old[a][e]);
      for (const DualFace& f : dual_faces(mesh, fluxes, a, e)) s += f.flux;
      ra[e] = s;
    }
  }
  return r;
}

}  // namespace swmac
