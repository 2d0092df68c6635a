#pragma once

#include <cstddef>
#include <functional>
#include <variant>
#include <vector>

#include "swmac/fields.hpp"
#include "swmac/mesh.hpp"
#include "swmac/operators.hpp"

namespace swmac {

/// Discrete solution at one time level.
struct State {
  double t = 0;
  ScalarField h;       // water height (m)
  VelocityField u;     // staggered velocity (m/s), zero on exterior edges
  ScalarField p;       // p = g h^2 / 2
  EdgeField h_dual;    // h_{D_sigma}
  std::size_t step = 0;
};

/// Constant time step.
struct FixedStep {
  double dt = 0;
};
/// dt = factor * min(mass CFL, momentum CFL estimate), recomputed every step.
struct CflStep {
  double factor = 0.5;
};
using TimeStepRule = std::variant<FixedStep, CflStep>;

struct SchemeParams {
  double g = 9.81;
  TimeStepRule time_step = FixedStep{1e-3};
  double t_end = 0;
  /// Velocity is set to zero on dual cells with h_{D_sigma} <= eps_dry.
  double eps_dry = 0;
  /// Topography z_K, fixed in time.
  ScalarField z;

  void validate(const MacMesh& mesh) const;
};

/// Default dry threshold: 1e-10 * max h0.
double default_dry_threshold(const MacMesh& mesh, const ScalarField& h0);

ScalarField pressure(const ScalarField& h, double g);

/// State with derived pressure and dual heights; checks h >= 0.
State make_state(const MacMesh& mesh, ScalarField h, VelocityField u, double g, double t = 0);

/// h^0 = P_M h0, u^0 = P_E u0, p^0 = g (h^0)^2 / 2.
State initialize(const MacMesh& mesh, const ScalarFunction& h0, const VectorFunction& u0, const SchemeParams& params);

struct MassStep {
  ScalarField h;
  FluxSet fluxes;
};

/// h^{n+1}_K = h^n_K - dt/|K| sum_sigma F^n_{K,sigma}. Throws SolverError naming
/// the cell if a negative height is produced.
MassStep mass_step(const MacMesh& mesh, const State& state, double dt);

/// Explicit momentum update on every interior edge using old fluxes and
/// velocities, new pressure and new centered heights.
VelocityField momentum_step(const MacMesh& mesh, const State& state, const ScalarField& h_new,
                            const EdgeField& h_dual_new, const ScalarField& p_new, const FluxSet& fluxes,
                            const SchemeParams& params, double dt);

/// min_K |K| / sum_sigma |sigma| |u_{K,sigma}|; +inf when the velocity vanishes.
double cfl_mass(const MacMesh& mesh, const VelocityField& u);

/// min_sigma |D_sigma| h_{D_sigma} / sum_eps (F_{sigma,eps})^-; +inf when no inflow.
double cfl_momentum(const MacMesh& mesh, const EdgeField& h_dual, const FluxSet& fluxes);

/// Everything an observer may want to know about one completed step.
struct StepRecord {
  const State& before;
  const State& after;
  const FluxSet& fluxes;
  double dt;
};

struct StepResult {
  State state;
  FluxSet fluxes;
  double dt = 0;
};

/// mass step -> pressure -> momentum step -> dual heights.
StepResult step(const MacMesh& mesh, const State& state, const SchemeParams& params, double dt);

/// Time step the rule asks for in the given state.
double choose_time_step(const MacMesh& mesh, const State& state, const SchemeParams& params);

using Observer = std::function<void(const StepRecord&)>;

/// Advance to params.t_end. A fixed step runs floor(t_end / dt) steps (within
/// round-off); a CFL-controlled step shortens the last step to land on t_end.
State run(const MacMesh& mesh, State state, const SchemeParams& params, const std::vector<Observer>& observers = {});

/// Number of fixed steps run() takes.
std::size_t fixed_step_count(double t_end, double dt);

}  // namespace swmac
