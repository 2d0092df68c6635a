#pragma once

#include <array>
#include <cstddef>

#include "swmac/fields.hpp"
#include "swmac/mesh.hpp"
#include "swmac/operators.hpp"
#include "swmac/scheme.hpp"

namespace swmac {

// Discrete energy bookkeeping of one step n -> n+1. Every residual is
// "minus the left-hand side" of the corresponding balance, so a non-negative
// residual means the step dissipates.

/// Kinetic balance residual R_{i,sigma}^{n+1} on every dual cell (exterior
/// edges included; there the velocity is zero and only the flux term remains):
///   (h1 u1^2 - h0 u0^2)/(2 dt) + 1/(2|D|) sum_eps F_eps u_eps^2
///     + u1 (d_i p1) + g h1_c u1 (d_i z) = -R.
EdgeField kinetic_balance_residual(const MacMesh& mesh, const StepRecord& step, const SchemeParams& params);

struct PotentialBalance {
  /// R_K from d_t E_p + div_K(E_p u^n) + p^n_K div_K(u^n) = -R_K.
  ScalarField residual;
  /// (g/|K|) sum_sigma |sigma| u^n_{K,sigma} h^n_sigma (h^{n+1}_K - h^n_K), a lower bound of R_K.
  ScalarField lower_bound;
};

/// Potential energy flux uses the upwind height: (E_p)_sigma = g h_sigma^2 / 2.
PotentialBalance potential_balance(const MacMesh& mesh, const StepRecord& step, const SchemeParams& params);

/// E_k per cell: 1/(4|K|) sum over the faces of K of |D_sigma| h_{D_sigma} u_sigma^2.
ScalarField cell_kinetic_energy(const MacMesh& mesh, const State& state);

/// Kinetic energy flux G_{K,sigma0} through face sigma0 of the active cell K.
/// Throws MeshError if sigma0 is not a face of K.
double kinetic_flux(const MacMesh& mesh, const FluxSet& fluxes, const VelocityField& u, std::size_t cell, Axis a,
                    std::size_t sigma0);

/// G for the four faces of K, in MacMesh::cell_edges order.
std::array<double, 4> kinetic_fluxes(const MacMesh& mesh, const FluxSet& fluxes, const VelocityField& u,
                                     std::size_t cell);

struct EntropyBalance {
  /// (R_e)_K, integrated over K: minus the left side of the cell entropy balance.
  ScalarField residual;
  /// The same quantity assembled from the kinetic and potential residuals:
  ///   sum_sigma |D_sigma|/2 R_sigma + |K| R_K
  ///   + sum_sigma |sigma| (p^n_K u^n_{K,sigma} - p^{n+1}_K u^{n+1}_{K,sigma})
  ///   - g sum_sigma [F^n_{K,sigma}/2 - |sigma| (h^{n+1}_K + h^{n+1}_L) u^{n+1}_{K,sigma}/4] (z_L - z_K).
  ScalarField assembled;
  /// T_K = sum_sigma |D_sigma|/2 R_sigma + |K| R_K.
  ScalarField transfer;
  double total = 0;
  double min = 0;
  double max = 0;
  std::size_t negative_cells = 0;
};

EntropyBalance entropy_balance(const MacMesh& mesh, const StepRecord& step, const SchemeParams& params);

/// Cell entropy E_k + E_p + g h z (per unit area).
ScalarField cell_entropy(const MacMesh& mesh, const State& state, const SchemeParams& params);

struct Estimates {
  double max_h = 0;
  /// Over cells with h > eps_dry; zero if every cell is dry.
  double max_inv_h = 0;
  double max_u = 0;
  /// sum_K |K| |h_K - h_K^prev|; zero without a previous state.
  double bv_increment = 0;
  double min_h = 0;
};

Estimates monitor_estimates(const MacMesh& mesh, const State& state, const State* previous, double eps_dry);

/// One row of the diagnostics time series.
struct BalanceReport {
  double t = 0;
  double mass = 0;
  double kinetic_energy = 0;
  double potential_energy = 0;
  double topography_energy = 0;
  double entropy = 0;
  double min_h = 0;
  double max_h = 0;
  double max_u = 0;
  double min_kinetic_residual = 0;
  double min_potential_gap = 0;
  double cfl_mass_margin = 0;
  double cfl_momentum_margin = 0;
  double bv_increment = 0;
  // not part of the CSV row
  double max_inv_h = 0;
  double entropy_residual_total = 0;
  std::size_t entropy_negative_cells = 0;
};

/// Global integrals and residual statistics after one step. CFL margins are
/// (CFL bound)/dt, so values >= 1 mean the bound held.
BalanceReport balance_report(const MacMesh& mesh, const StepRecord& step, const SchemeParams& params);

/// Integrals of a single state (residual and CFL columns left at zero).
BalanceReport state_report(const MacMesh& mesh, const State& state, const SchemeParams& params);

}  // namespace swmac
