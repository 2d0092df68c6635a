#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "swmac/mesh.hpp"
#include "swmac/scheme.hpp"

namespace swmac {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Random state with h in [h_min, h_max] on active cells and velocity
/// components in [-u_max, u_max] on interior edges.
State random_state(const MacMesh& mesh, std::mt19937_64& rng, double g, double h_min = 0.5, double h_max = 2.0,
                   double u_max = 1.0);

/// Time step below both the mass and the momentum CFL bounds for one step
/// from `state`. The momentum bound depends on h^{n+1}, so dt is halved until
/// the step satisfies it.
double admissible_time_step(const MacMesh& mesh, const State& state, const SchemeParams& params,
                            double safety = 0.9);

/// Property suite on small meshes (8x8 square and an 8x8 box with an
/// obstacle): conservation, positivity, duality, antisymmetry, balance
/// residual signs, entropy identity, lake at rest, determinism.
std::vector<CheckResult> run_verification(std::uint64_t seed = 20240917);

}  // namespace swmac
