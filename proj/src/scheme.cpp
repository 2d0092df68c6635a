#include "swmac/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "swmac/error.hpp"

namespace swmac {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_finite(const MacMesh& mesh, const State& s) {
  for (std::size_t c : mesh.active_cells()) {
    if (!std::isfinite(s.h[c])) {
      std::ostringstream os;
      os << "non-finite height in " << mesh.cell_label(c) << " at t=" << s.t;
      throw SolverError(os.str());
    }
  }
  for (Axis a : {Axis::X, Axis::Y}) {
    const auto& ua = s.u[a];
    for (std::size_t e = 0; e < ua.size(); ++e) {
      if (!std::isfinite(ua[e])) {
        std::ostringstream os;
        os << "non-finite velocity on " << mesh.edge_label(a, e) << " at t=" << s.t;
        throw SolverError(os.str());
      }
    }
  }
}

}  // namespace

void SchemeParams::validate(const MacMesh& mesh) const {
  if (!(g > 0) || !std::isfinite(g)) throw ConfigError("g must be positive");
  if (!(eps_dry >= 0)) throw ConfigError("eps_dry must be non-negative");
  if (!(t_end >= 0) || !std::isfinite(t_end)) throw ConfigError("t_end must be finite and non-negative");
  if (const auto* f = std::get_if<FixedStep>(&time_step); f && !(f->dt > 0))
    throw ConfigError("dt must be positive");
  if (const auto* c = std::get_if<CflStep>(&time_step); c && !(c->factor > 0 && c->factor <= 1))
    throw ConfigError("cfl factor must lie in (0, 1]");
  if (z.size() != mesh.num_cells()) throw ConfigError("topography does not match the mesh");
}

double default_dry_threshold(const MacMesh& mesh, const ScalarField& h0) {
  double hmax = 0;
  for (std::size_t c : mesh.active_cells()) hmax = std::max(hmax, h0[c]);
  return 1e-10 * hmax;
}

ScalarField pressure(const ScalarField& h, double g) {
  ScalarField p = h;
  for (double& v : p.values()) v = 0.5 * g * v * v;
  return p;
}

State make_state(const MacMesh& mesh, ScalarField h, VelocityField u, double g, double t) {
  for (std::size_t c : mesh.active_cells()) {
    if (h[c] < 0) {
      std::ostringstream os;
      os << "negative initial height " << h[c] << " in " << mesh.cell_label(c);
      throw SolverError(os.str());
    }
  }
  for (Axis a : {Axis::X, Axis::Y})
    for (std::size_t e = 0; e < u[a].size(); ++e)
      if (!mesh.interior(a, e)) u[a][e] = 0;
  State s;
  s.t = t;
  s.p = pressure(h, g);
  s.h_dual = dual_heights(mesh, h);
  s.h = std::move(h);
  s.u = std::move(u);
  return s;
}

State initialize(const MacMesh& mesh, const ScalarFunction& h0, const VectorFunction& u0, const SchemeParams& params) {
  return make_state(mesh, project_scalar(mesh, h0), project_velocity(mesh, u0), params.g);
}

MassStep mass_step(const MacMesh& mesh, const State& state, double dt) {
  MassStep out{state.h, mass_fluxes(mesh, state.h, state.u)};
  const ScalarField div = divergence(mesh, out.fluxes);
  for (std::size_t c : mesh.active_cells()) {
    out.h[c] = state.h[c] - dt * div[c];
    if (out.h[c] < 0) {
      std::ostringstream os;
      os << "mass step produced negative height " << out.h[c] << " in " << mesh.cell_label(c) << " at t="
         << state.t << "; dt=" << dt << " exceeds the positivity CFL bound " << cfl_mass(mesh, state.u);
      throw SolverError(os.str());
    }
  }
  return out;
}

VelocityField momentum_step(const MacMesh& mesh, const State& state, const ScalarField& h_new,
                            const EdgeField& h_dual_new, const ScalarField& p_new, const FluxSet& fluxes,
                            const SchemeParams& params, double dt) {
  VelocityField u(mesh);
  const EdgeField conv = convection(mesh, fluxes, state.u);
  const EdgeField grad_p = gradient(mesh, p_new);
  const EdgeField grad_z = gradient(mesh, params.z);
  const EdgeField h_c = interp_centered(mesh, h_new);
  for (Axis a : {Axis::X, Axis::Y}) {
    auto& ua = u[a];
    for (std::size_t e = 0; e < ua.size(); ++e) {
      if (!mesh.interior(a, e)) continue;
      const double hd = h_dual_new[a][e];
      if (hd <= params.eps_dry) continue;
      const double momentum = state.h_dual[a][e] * state.u[a][e] -
                              dt * (conv[a][e] + grad_p[a][e] + params.g * h_c[a][e] * grad_z[a][e]);
      ua[e] = momentum / hd;
      if (!std::isfinite(ua[e])) throw SolverError("non-finite velocity on " + mesh.edge_label(a, e));
    }
  }
  return u;
}

double cfl_mass(const MacMesh& mesh, const VelocityField& u) {
  double best = kInf;
  for (std::size_t c : mesh.active_cells()) {
    const auto ed = mesh.cell_edges(c);
    double s = 0;
    for (int k = 0; k < 4; ++k) {
      const Axis a = k < 2 ? Axis::X : Axis::Y;
      s += mesh.edge_length(a, ed[k]) * std::abs(u[a][ed[k]]);
    }
    if (s > 0) best = std::min(best, mesh.cell_area(c) / s);
  }
  return best;
}

double cfl_momentum(const MacMesh& mesh, const EdgeField& h_dual, const FluxSet& fluxes) {
  double best = kInf;
  for (Axis a : {Axis::X, Axis::Y}) {
    const std::size_t ne = mesh.num_edges(a);
    for (std::size_t e = 0; e < ne; ++e) {
      if (!mesh.interior(a, e)) continue;
      double inflow = 0;
      for (const DualFace& f : dual_faces(mesh, fluxes, a, e))
        if (f.flux < 0) inflow -= f.flux;
      if (inflow > 0) best = std::min(best, mesh.dual_volume(a, e) * h_dual[a][e] / inflow);
    }
  }
  return best;
}

StepResult step(const MacMesh& mesh, const State& state, const SchemeParams& params, double dt) {
  MassStep ms = mass_step(mesh, state, dt);
  StepResult r;
  r.dt = dt;
  r.state.t = state.t + dt;
  r.state.step = state.step + 1;
  r.state.p = pressure(ms.h, params.g);
  r.state.h_dual = dual_heights(mesh, ms.h);
  r.state.u = momentum_step(mesh, state, ms.h, r.state.h_dual, r.state.p, ms.fluxes, params, dt);
  r.state.h = std::move(ms.h);
  r.fluxes = std::move(ms.fluxes);
  check_finite(mesh, r.state);
  return r;
}

double choose_time_step(const MacMesh& mesh, const State& state, const SchemeParams& params) {
  if (const auto* f = std::get_if<FixedStep>(&params.time_step)) return f->dt;
  const double factor = std::get<CflStep>(params.time_step).factor;
  const FluxSet fl = mass_fluxes(mesh, state.h, state.u);
  // momentum bound with the current dual heights
  double limit = std::min(cfl_mass(mesh, state.u), cfl_momentum(mesh, state.h_dual, fl));
  // gravity-wave limit
  double wave = kInf;
  for (std::size_t c : mesh.active_cells()) {
    const double speed = std::sqrt(params.g * state.h[c]);
    if (speed > 0) {
      const double w = std::min(mesh.dx(mesh.cell_i(c)), mesh.dy(mesh.cell_j(c)));
      wave = std::min(wave, w / (2.0 * speed));
    }
  }
  limit = std::min(limit, wave);
  if (!std::isfinite(limit)) throw SolverError("cannot choose a time step: the state has no wave or flow speed");
  return factor * limit;
}

std::size_t fixed_step_count(double t_end, double dt) {
  return static_cast<std::size_t>(std::floor(t_end / dt * (1.0 + 1e-12)));
}

State run(const MacMesh& mesh, State state, const SchemeParams& params, const std::vector<Observer>& observers) {
  params.validate(mesh);
  auto notify = [&](const State& before, const StepResult& r) {
    const StepRecord rec{before, r.state, r.fluxes, r.dt};
    for (const auto& obs : observers) obs(rec);
  };
  if (const auto* f = std::get_if<FixedStep>(&params.time_step)) {
    const std::size_t n = fixed_step_count(params.t_end, f->dt);
    const double t0 = state.t;
    const std::size_t s0 = state.step;
    for (std::size_t k = 0; k < n; ++k) {
      StepResult r = step(mesh, state, params, f->dt);
      // t_n = t_0 + n dt, without accumulating round-off.
      r.state.t = t0 + static_cast<double>(k + 1) * f->dt;
      r.state.step = s0 + k + 1;
      notify(state, r);
      state = std::move(r.state);
    }
    return state;
  }
  while (state.t < params.t_end) {
    double dt = choose_time_step(mesh, state, params);
    const bool last = state.t + dt >= params.t_end * (1 - 1e-14);
    if (last) dt = params.t_end - state.t;
    StepResult r = step(mesh, state, params, dt);
    if (last) r.state.t = params.t_end;
    notify(state, r);
    state = std::move(r.state);
  }
  return state;
}

}  // namespace swmac
