#pragma once

#include <array>
#include <vector>

#include "swmac/fields.hpp"
#include "swmac/mesh.hpp"

namespace swmac {

/// Primal and dual mass fluxes for one time level.
///
/// Every shared value is stored once per geometric entity and read with a sign,
/// so F_{K,sigma} = -F_{L,sigma} and F_{sigma,eps} = -F_{sigma',eps} hold bitwise.
struct FluxSet {
  /// |sigma| h_sigma u_{i,sigma}: flux through sigma along +axis, i.e. F_{low,sigma}.
  /// Zero on exterior edges.
  EdgeField mass;
  /// Upwind height h_sigma (interior edges); the single cell's height on exterior edges.
  EdgeField upwind_h;
  /// Per cell and axis: flux through the Normal dual face inside the cell,
  /// from the dual cell of its low edge towards the one of its high edge.
  std::array<std::vector<double>, 2> normal;
  /// Per node and axis: flux through the Tangent dual face at the node, from
  /// the dual cell below (axis X) / left of it (axis Y) towards the other one.
  std::array<std::vector<double>, 2> tangent;

  /// F_{K,sigma}, outward of the active cell K.
  double primal(const MacMesh& mesh, Axis a, std::size_t e, std::size_t cell) const {
    return mesh.normal_sign(a, e, cell) * mass[a][e];
  }
};

/// Outward flux through one face of a dual cell and the dual cell across it.
struct DualFace {
  double flux = 0;
  std::size_t neighbor = npos;
};

/// The four faces of D_sigma (low Normal, high Normal, low Tangent, high
/// Tangent) for any edge that belongs to the mesh. Faces on the domain
/// boundary carry zero flux and no neighbour.
std::array<DualFace, 4> dual_faces(const MacMesh& mesh, const FluxSet& fluxes, Axis a, std::size_t e);

/// Upwind value of the velocity component on a dual face.
inline double upwind_velocity(const DualFace& f, const std::vector<double>& u, std::size_t e) {
  return (f.flux >= 0 || f.neighbor == npos) ? u[e] : u[f.neighbor];
}

/// Upwind primal fluxes F_{K,sigma} = |sigma| h_sigma u_{K,sigma}. Throws
/// SolverError on a negative height. Dual fluxes are left empty.
FluxSet primal_mass_fluxes(const MacMesh& mesh, const ScalarField& h, const VelocityField& u);

/// Fill the dual part of a flux set from its primal part.
void dual_fluxes(const MacMesh& mesh, FluxSet& fluxes);

/// Primal and dual fluxes in one call.
FluxSet mass_fluxes(const MacMesh& mesh, const ScalarField& h, const VelocityField& u);

/// div_K = (1/|K|) sum_sigma F_{K,sigma}.
ScalarField divergence(const MacMesh& mesh, const FluxSet& fluxes);

/// Discrete divergence of u alone (h == 1 in the fluxes).
ScalarField velocity_divergence(const MacMesh& mesh, const VelocityField& u);

/// (d_i q)_sigma = |sigma| / |D_sigma| (q_high - q_low) on interior edges.
EdgeField gradient(const MacMesh& mesh, const ScalarField& q);

/// h_{D_sigma} = (|D_{K,sigma}| h_K + |D_{L,sigma}| h_L) / |D_sigma|.
EdgeField dual_heights(const MacMesh& mesh, const ScalarField& h);

/// h_{sigma,c}: mean of the two adjacent heights, the single one on the boundary.
EdgeField interp_centered(const MacMesh& mesh, const ScalarField& h);

/// (1/|D_sigma|) sum_eps F_{sigma,eps} u_{i,eps} with upwind u_{i,eps}, interior edges.
EdgeField convection(const MacMesh& mesh, const FluxSet& fluxes, const VelocityField& u);

/// Residual of the dual mass balance
///   |D_sigma|/dt (h^{n+1}_D - h^n_D) + sum_eps F^n_{sigma,eps}
/// on every edge of the mesh. Vanishes to round-off after a mass step.
EdgeField dual_mass_balance_residual(const MacMesh& mesh, const EdgeField& dual_h_old, const EdgeField& dual_h_new,
                                     const FluxSet& fluxes, double dt);

}  // namespace swmac
