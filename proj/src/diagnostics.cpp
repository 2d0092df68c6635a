#include "swmac/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "swmac/error.hpp"

namespace swmac {

EdgeField kinetic_balance_residual(const MacMesh& mesh, const StepRecord& step, const SchemeParams& params) {
  const State& s0 = step.before;
  const State& s1 = step.after;
  const double dt = step.dt;
  const EdgeField grad_p = gradient(mesh, s1.p);
  const EdgeField grad_z = gradient(mesh, params.z);
  const EdgeField h_c = interp_centered(mesh, s1.h);
  EdgeField r(mesh);
  for (Axis a : {Axis::X, Axis::Y}) {
    const auto& u0 = s0.u[a];
    const auto& u1 = s1.u[a];
    auto& ra = r[a];
    for (std::size_t e = 0; e < ra.size(); ++e) {
      if (mesh.edge_kind(a, e) == EdgeKind::None) continue;
      double flux = 0;
      for (const DualFace& f : dual_faces(mesh, step.fluxes, a, e)) {
        const double ue = upwind_velocity(f, u0, e);
        flux += f.flux * ue * ue;
      }
      const double lhs = (s1.h_dual[a][e] * u1[e] * u1[e] - s0.h_dual[a][e] * u0[e] * u0[e]) / (2 * dt) +
                         flux / (2 * mesh.dual_volume(a, e)) + u1[e] * grad_p[a][e] +
                         params.g * h_c[a][e] * u1[e] * grad_z[a][e];
      ra[e] = -lhs;
    }
  }
  return r;
}

PotentialBalance potential_balance(const MacMesh& mesh, const StepRecord& step, const SchemeParams& params) {
  const State& s0 = step.before;
  const State& s1 = step.after;
  const double g = params.g;
  PotentialBalance out{ScalarField(mesh), ScalarField(mesh)};
  for (std::size_t c : mesh.active_cells()) {
    const auto ed = mesh.cell_edges(c);
    double ep_flux = 0, div_u = 0, bound = 0;
    for (int k = 0; k < 4; ++k) {
      const Axis a = k < 2 ? Axis::X : Axis::Y;
      const std::size_t e = ed[k];
      if (!mesh.interior(a, e)) continue;
      const double len = mesh.edge_length(a, e);
      const double uk = mesh.normal_sign(a, e, c) * s0.u[a][e];
      const double hs = step.fluxes.upwind_h[a][e];
      ep_flux += len * 0.5 * g * hs * hs * uk;
      div_u += len * uk;
      bound += len * uk * hs;
    }
    const double area = mesh.cell_area(c);
    const double ep0 = 0.5 * g * s0.h[c] * s0.h[c];
    const double ep1 = 0.5 * g * s1.h[c] * s1.h[c];
    out.residual[c] = -((ep1 - ep0) / step.dt + ep_flux / area + s0.p[c] * div_u / area);
    out.lower_bound[c] = g / area * bound * (s1.h[c] - s0.h[c]);
  }
  return out;
}

ScalarField cell_kinetic_energy(const MacMesh& mesh, const State& state) {
  ScalarField ek(mesh);
  for (std::size_t c : mesh.active_cells()) {
    const auto ed = mesh.cell_edges(c);
    double s = 0;
    for (int k = 0; k < 4; ++k) {
      const Axis a = k < 2 ? Axis::X : Axis::Y;
      const double u = state.u[a][ed[k]];
      s += mesh.dual_volume(a, ed[k]) * state.h_dual[a][ed[k]] * u * u;
    }
    ek[c] = s / (4 * mesh.cell_area(c));
  }
  return ek;
}

namespace {

double face_energy_flux(const DualFace& f, const std::vector<double>& u, std::size_t e) {
  const double v = upwind_velocity(f, u, e);
  return f.flux * v * v;
}

// k: position of sigma0 among the cell's faces (cell_edges order).
double kinetic_flux_at(const MacMesh& mesh, const FluxSet& fluxes, const VelocityField& u, std::size_t cell, int k) {
  const auto ed = mesh.cell_edges(cell);
  const Axis a = k < 2 ? Axis::X : Axis::Y;
  const Axis b = other(a);
  const std::size_t sigma0 = ed[k];
  const bool low_face = (k % 2) == 0;  // sigma0 on the negative side of K

  const auto faces0 = dual_faces(mesh, fluxes, a, sigma0);
  // eps: face of D_sigma0 inside K; eps': the opposite one.
  const DualFace& eps = low_face ? faces0[1] : faces0[0];
  const DualFace& eps_opp = low_face ? faces0[0] : faces0[1];
  // tau, tau': faces of the dual cells of K's two b-edges lying on sigma0.
  const int kb = a == Axis::X ? 2 : 0;
  const std::size_t sb0 = ed[kb], sb1 = ed[kb + 1];
  const DualFace tau = dual_faces(mesh, fluxes, b, sb0)[low_face ? 2 : 3];
  const DualFace tau_p = dual_faces(mesh, fluxes, b, sb1)[low_face ? 2 : 3];

  return 0.25 * (-face_energy_flux(eps, u[a], sigma0) + face_energy_flux(eps_opp, u[a], sigma0) +
                 face_energy_flux(tau, u[b], sb0) + face_energy_flux(tau_p, u[b], sb1));
}

}  // namespace

double kinetic_flux(const MacMesh& mesh, const FluxSet& fluxes, const VelocityField& u, std::size_t cell, Axis a,
                    std::size_t sigma0) {
  if (cell >= mesh.num_cells() || !mesh.active(cell)) throw MeshError(mesh.cell_label(cell) + " is not active");
  const auto ed = mesh.cell_edges(cell);
  for (int k = 0; k < 4; ++k) {
    const Axis ak = k < 2 ? Axis::X : Axis::Y;
    if (ak == a && ed[k] == sigma0) return kinetic_flux_at(mesh, fluxes, u, cell, k);
  }
  throw MeshError(mesh.edge_label(a, sigma0) + " is not a face of " + mesh.cell_label(cell));
}

std::array<double, 4> kinetic_fluxes(const MacMesh& mesh, const FluxSet& fluxes, const VelocityField& u,
                                     std::size_t cell) {
  return {kinetic_flux_at(mesh, fluxes, u, cell, 0), kinetic_flux_at(mesh, fluxes, u, cell, 1),
          kinetic_flux_at(mesh, fluxes, u, cell, 2), kinetic_flux_at(mesh, fluxes, u, cell, 3)};
}

ScalarField cell_entropy(const MacMesh& mesh, const State& state, const SchemeParams& params) {
  ScalarField eta = cell_kinetic_energy(mesh, state);
  for (std::size_t c : mesh.active_cells()) eta[c] += state.p[c] + params.g * state.h[c] * params.z[c];
  return eta;
}

EntropyBalance entropy_balance(const MacMesh& mesh, const StepRecord& step, const SchemeParams& params) {
  const State& s0 = step.before;
  const State& s1 = step.after;
  const double g = params.g;
  const double dt = step.dt;
  const ScalarField& z = params.z;
  const EdgeField kin = kinetic_balance_residual(mesh, step, params);
  const PotentialBalance pot = potential_balance(mesh, step, params);
  const ScalarField ek0 = cell_kinetic_energy(mesh, s0);
  const ScalarField ek1 = cell_kinetic_energy(mesh, s1);

  EntropyBalance out{ScalarField(mesh), ScalarField(mesh), ScalarField(mesh)};
  out.min = std::numeric_limits<double>::infinity();
  out.max = -std::numeric_limits<double>::infinity();
  for (std::size_t c : mesh.active_cells()) {
    const double area = mesh.cell_area(c);
    const auto ed = mesh.cell_edges(c);
    const auto G = kinetic_fluxes(mesh, step.fluxes, s0.u, c);

    double lhs = area / dt *
                 (ek1[c] + s1.p[c] + g * s1.h[c] * z[c] - ek0[c] - s0.p[c] - g * s0.h[c] * z[c]);
    double transfer = area * pot.residual[c];
    double pressure_work = 0, topo = 0;
    for (int k = 0; k < 4; ++k) {
      const Axis a = k < 2 ? Axis::X : Axis::Y;
      const std::size_t e = ed[k];
      transfer += 0.5 * mesh.dual_volume(a, e) * kin[a][e];
      lhs += G[k];
      if (!mesh.interior(a, e)) continue;
      const int sgn = mesh.normal_sign(a, e, c);
      const std::size_t nb = sgn > 0 ? mesh.high_cell(a, e) : mesh.low_cell(a, e);
      const double len = mesh.edge_length(a, e);
      const double F = sgn * step.fluxes.mass[a][e];
      const double hs = step.fluxes.upwind_h[a][e];
      const double u0k = sgn * s0.u[a][e];
      const double u1k = sgn * s1.u[a][e];
      lhs += F * 0.5 * g * hs + 0.5 * g * F * (z[c] + z[nb]) + len * 0.5 * (s1.p[c] + s1.p[nb]) * u1k;
      pressure_work += len * (s0.p[c] * u0k - s1.p[c] * u1k);
      topo -= g * (0.5 * F - 0.25 * len * (s1.h[c] + s1.h[nb]) * u1k) * (z[nb] - z[c]);
    }
    out.residual[c] = -lhs;
    out.transfer[c] = transfer;
    out.assembled[c] = transfer + pressure_work + topo;
    out.total += out.residual[c];
    out.min = std::min(out.min, out.residual[c]);
    out.max = std::max(out.max, out.residual[c]);
    if (out.residual[c] < 0) ++out.negative_cells;
  }
  return out;
}

Estimates monitor_estimates(const MacMesh& mesh, const State& state, const State* previous, double eps_dry) {
  Estimates est;
  est.min_h = std::numeric_limits<double>::infinity();
  for (std::size_t c : mesh.active_cells()) {
    const double h = state.h[c];
    est.max_h = std::max(est.max_h, h);
    est.min_h = std::min(est.min_h, h);
    if (h > eps_dry) est.max_inv_h = std::max(est.max_inv_h, 1.0 / h);
    if (previous) est.bv_increment += mesh.cell_area(c) * std::abs(h - previous->h[c]);
  }
  for (Axis a : {Axis::X, Axis::Y})
    for (double v : state.u[a]) est.max_u = std::max(est.max_u, std::abs(v));
  return est;
}

BalanceReport state_report(const MacMesh& mesh, const State& state, const SchemeParams& params) {
  BalanceReport r;
  r.t = state.t;
  const ScalarField ek = cell_kinetic_energy(mesh, state);
  for (std::size_t c : mesh.active_cells()) {
    const double area = mesh.cell_area(c);
    r.mass += area * state.h[c];
    r.kinetic_energy += area * ek[c];
    r.potential_energy += area * state.p[c];
    r.topography_energy += area * params.g * state.h[c] * params.z[c];
  }
  r.entropy = r.kinetic_energy + r.potential_energy + r.topography_energy;
  const Estimates est = monitor_estimates(mesh, state, nullptr, params.eps_dry);
  r.min_h = est.min_h;
  r.max_h = est.max_h;
  r.max_u = est.max_u;
  r.max_inv_h = est.max_inv_h;
  return r;
}

BalanceReport balance_report(const MacMesh& mesh, const StepRecord& step, const SchemeParams& params) {
  BalanceReport r = state_report(mesh, step.after, params);
  r.bv_increment = monitor_estimates(mesh, step.after, &step.before, params.eps_dry).bv_increment;

  const EdgeField kin = kinetic_balance_residual(mesh, step, params);
  double kmin = std::numeric_limits<double>::infinity();
  for (Axis a : {Axis::X, Axis::Y})
    for (std::size_t e = 0; e < kin[a].size(); ++e)
      if (mesh.interior(a, e)) kmin = std::min(kmin, kin[a][e]);
  r.min_kinetic_residual = std::isfinite(kmin) ? kmin : 0.0;

  const PotentialBalance pot = potential_balance(mesh, step, params);
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t c : mesh.active_cells()) gap = std::min(gap, pot.residual[c] - pot.lower_bound[c]);
  r.min_potential_gap = gap;

  r.cfl_mass_margin = cfl_mass(mesh, step.before.u) / step.dt;
  r.cfl_momentum_margin = cfl_momentum(mesh, step.after.h_dual, step.fluxes) / step.dt;

  const EntropyBalance ent = entropy_balance(mesh, step, params);
  r.entropy_residual_total = ent.total;
  r.entropy_negative_cells = ent.negative_cells;
  return r;
}

}  // namespace swmac
