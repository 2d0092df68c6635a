#include "swmac/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "swmac/diagnostics.hpp"
#include "swmac/error.hpp"
#include "swmac/operators.hpp"

namespace swmac {

State random_state(const MacMesh& mesh, std::mt19937_64& rng, double g, double h_min, double h_max, double u_max) {
  std::uniform_real_distribution<double> hd(h_min, h_max), ud(-u_max, u_max);
  ScalarField h(mesh);
  for (std::size_t c : mesh.active_cells()) h[c] = hd(rng);
  VelocityField u(mesh);
  for (Axis a : {Axis::X, Axis::Y})
    for (std::size_t e = 0; e < u[a].size(); ++e)
      if (mesh.interior(a, e)) u[a][e] = ud(rng);
  return make_state(mesh, std::move(h), std::move(u), g);
}

double admissible_time_step(const MacMesh& mesh, const State& state, const SchemeParams& params, double safety) {
  double dt = safety * cfl_mass(mesh, state.u);
  if (!std::isfinite(dt)) dt = 1.0;
  for (int k = 0; k < 60; ++k, dt *= 0.5) {
    const StepResult r = step(mesh, state, params, dt);
    if (cfl_momentum(mesh, r.state.h_dual, r.fluxes) >= dt) return dt;
  }
  throw SolverError("no admissible time step found");
}

namespace {

MacMesh square_mesh() {
  DomainSpec d;
  d.fluid = {Rect{0, 1, 0, 1}};
  // mildly non-uniform spacing
  GridSpec g;
  for (int k = 0; k <= 8; ++k) {
    g.x_faces.push_back(k / 8.0 + (k % 8 ? 0.02 * std::sin(1.7 * k) : 0.0));
    g.y_faces.push_back(k / 8.0 + (k % 8 ? 0.015 * std::cos(2.3 * k) : 0.0));
  }
  return MacMesh::build(d, g);
}

MacMesh obstacle_mesh() {
  DomainSpec d;
  d.fluid = {Rect{0, 1, 0, 1}};
  d.obstacles = {Rect{0.375, 0.625, 0, 0.5}};
  return MacMesh::build(d, GridSpec::uniform(d.bounding_box(), 8, 8));
}

SchemeParams random_params(const MacMesh& mesh, std::mt19937_64& rng) {
  SchemeParams p;
  p.g = 9.81;
  p.z = ScalarField(mesh);
  std::uniform_real_distribution<double> zd(0.0, 0.5);
  for (std::size_t c : mesh.active_cells()) p.z[c] = zd(rng);
  return p;
}

std::string sci(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

struct Suite {
  std::vector<CheckResult> results;
  void add(std::string name, bool pass, std::string detail) {
    results.push_back({std::move(name), pass, std::move(detail)});
  }
};

double max_abs(const EdgeField& f, const MacMesh& mesh) {
  double m = 0;
  for (Axis a : {Axis::X, Axis::Y})
    for (std::size_t e = 0; e < f[a].size(); ++e)
      if (mesh.edge_kind(a, e) != EdgeKind::None) m = std::max(m, std::abs(f[a][e]));
  return m;
}

double max_h(const MacMesh& mesh, const State& s) {
  double m = 0;
  for (std::size_t c : mesh.active_cells()) m = std::max(m, s.h[c]);
  return m;
}

double max_u(const State& s) {
  double m = 0;
  for (Axis a : {Axis::X, Axis::Y})
    for (double v : s.u[a]) m = std::max(m, std::abs(v));
  return m;
}

void check_mesh(Suite& suite, const std::string& tag, const MacMesh& mesh, std::mt19937_64& rng) {
  const SchemeParams params = random_params(mesh, rng);

  // positivity under the mass CFL condition
  {
    int failures = 0;
    double worst = 0;
    for (int k = 0; k < 200; ++k) {
      State s = random_state(mesh, rng, params.g, 0.0, 2.0, 3.0);
      const double dt = 0.99 * cfl_mass(mesh, s.u);
      const ScalarField h = s.h;
      const FluxSet f = mass_fluxes(mesh, h, s.u);
      const ScalarField div = divergence(mesh, f);
      for (std::size_t c : mesh.active_cells()) {
        const double h1 = h[c] - dt * div[c];
        if (h1 < 0) {
          ++failures;
          worst = std::min(worst, h1);
        }
      }
    }
    suite.add(tag + " positivity", failures == 0,
              "200 random states, dt = 0.99 cfl_mass; negative cells: " + std::to_string(failures) +
                  (failures ? ", worst " + sci(worst) : ""));
  }

  const State s0 = random_state(mesh, rng, params.g);
  const double dt = admissible_time_step(mesh, s0, params);
  const StepResult r = step(mesh, s0, params, dt);
  const StepRecord rec{s0, r.state, r.fluxes, dt};

  // mass conservation
  {
    const double m0 = integral(mesh, s0.h), m1 = integral(mesh, r.state.h);
    const double rel = std::abs(m1 - m0) / m0;
    suite.add(tag + " mass conservation", rel <= 1e-14, "relative change " + sci(rel));
  }

  // div-grad duality: sum_K |K| q_K div(u)_K + sum_sigma |D_sigma| u_sigma (grad q)_sigma = 0
  {
    ScalarField q(mesh);
    std::uniform_real_distribution<double> qd(-1, 1);
    for (std::size_t c : mesh.active_cells()) q[c] = qd(rng);
    const ScalarField div = velocity_divergence(mesh, s0.u);
    const EdgeField grad = gradient(mesh, q);
    double sum = 0, scale = 0;
    for (std::size_t c : mesh.active_cells()) {
      sum += mesh.cell_area(c) * q[c] * div[c];
      scale += std::abs(mesh.cell_area(c) * q[c] * div[c]);
    }
    for (Axis a : {Axis::X, Axis::Y})
      for (std::size_t e = 0; e < grad[a].size(); ++e)
        if (mesh.interior(a, e)) {
          const double t = mesh.dual_volume(a, e) * s0.u[a][e] * grad[a][e];
          sum += t;
          scale += std::abs(t);
        }
    suite.add(tag + " div-grad duality", std::abs(sum) <= 1e-13 * scale,
              "|sum| = " + sci(std::abs(sum)) + ", scale " + sci(scale));
  }

  // primal and dual flux antisymmetry
  {
    std::size_t bad = 0;
    for (Axis a : {Axis::X, Axis::Y}) {
      for (std::size_t e = 0; e < mesh.num_edges(a); ++e) {
        if (!mesh.interior(a, e)) continue;
        if (r.fluxes.primal(mesh, a, e, mesh.low_cell(a, e)) != -r.fluxes.primal(mesh, a, e, mesh.high_cell(a, e)))
          ++bad;
        for (const DualFace& f : dual_faces(mesh, r.fluxes, a, e)) {
          if (f.neighbor == npos || !mesh.interior(a, f.neighbor)) continue;
          bool found = false;
          for (const DualFace& g : dual_faces(mesh, r.fluxes, a, f.neighbor))
            if (g.neighbor == e && g.flux == -f.flux) found = true;
          if (!found) ++bad;
        }
      }
    }
    suite.add(tag + " flux antisymmetry", bad == 0, "mismatched faces: " + std::to_string(bad));
  }

  // dual mass balance
  {
    const EdgeField res = dual_mass_balance_residual(mesh, s0.h_dual, r.state.h_dual, r.fluxes, dt);
    double scale = 0;
    for (Axis a : {Axis::X, Axis::Y})
      for (std::size_t e = 0; e < mesh.num_edges(a); ++e)
        if (mesh.edge_kind(a, e) != EdgeKind::None)
          scale = std::max(scale, mesh.dual_volume(a, e) * max_h(mesh, s0) / dt);
    const double m = max_abs(res, mesh);
    suite.add(tag + " dual mass balance", m <= 1e-11 * scale, "max residual " + sci(m) + ", scale " + sci(scale));
  }

  // kinetic and potential balance signs
  {
    const EdgeField kin = kinetic_balance_residual(mesh, rec, params);
    const double hm = std::max(max_h(mesh, s0), max_h(mesh, r.state));
    const double um = std::max(max_u(s0), max_u(r.state));
    double worst = 0;
    for (Axis a : {Axis::X, Axis::Y})
      for (std::size_t e = 0; e < mesh.num_edges(a); ++e)
        if (mesh.interior(a, e)) {
          const double scale = mesh.dual_volume(a, e) * hm * um * um / dt;
          worst = std::min(worst, kin[a][e] / scale);
        }
    suite.add(tag + " kinetic residual sign", worst >= -1e-10, "min R / scale = " + sci(worst));

    const PotentialBalance pot = potential_balance(mesh, rec, params);
    double pworst = 0;
    for (std::size_t c : mesh.active_cells()) {
      const double scale = mesh.cell_area(c) * params.g * hm * hm / dt;
      pworst = std::min(pworst, (pot.residual[c] - pot.lower_bound[c]) / scale);
    }
    suite.add(tag + " potential balance bound", pworst >= -1e-10, "min (R - bound) / scale = " + sci(pworst));
  }

  // entropy: direct and assembled cell residuals agree
  {
    const EntropyBalance ent = entropy_balance(mesh, rec, params);
    double diff = 0, scale = 0;
    for (std::size_t c : mesh.active_cells()) {
      diff = std::max(diff, std::abs(ent.residual[c] - ent.assembled[c]));
      const double h = std::max(s0.h[c], r.state.h[c]);
      scale = std::max(scale, mesh.cell_area(c) * h * (max_u(s0) * max_u(s0) + params.g * h + params.g * 0.5) / dt);
    }
    suite.add(tag + " entropy identity", diff <= 1e-12 * scale, "max |direct - assembled| = " + sci(diff) +
                                                                     ", scale " + sci(scale));
  }

  // kinetic energy flux antisymmetry on interior edges
  {
    double worst = 0, scale = 0;
    for (Axis a : {Axis::X, Axis::Y})
      for (std::size_t e = 0; e < mesh.num_edges(a); ++e) {
        if (!mesh.interior(a, e)) continue;
        const double gl = kinetic_flux(mesh, r.fluxes, s0.u, mesh.low_cell(a, e), a, e);
        const double gh = kinetic_flux(mesh, r.fluxes, s0.u, mesh.high_cell(a, e), a, e);
        worst = std::max(worst, std::abs(gl + gh));
        scale = std::max(scale, std::abs(gl));
      }
    suite.add(tag + " kinetic flux antisymmetry", worst <= 1e-14 * std::max(scale, 1e-300),
              "max |G_K + G_L| = " + sci(worst));
  }

  // lake at rest
  {
    double C = 0;
    for (std::size_t c : mesh.active_cells()) C = std::max(C, params.z[c]);
    C += 0.1;
    ScalarField h(mesh);
    for (std::size_t c : mesh.active_cells()) h[c] = C - params.z[c];
    SchemeParams p = params;
    const double dx = std::min(mesh.dx(0), mesh.dy(0));
    p.time_step = FixedStep{0.1 * dx};
    p.t_end = 50 * 0.1 * dx;
    const State end = run(mesh, make_state(mesh, h, VelocityField(mesh), p.g), p);
    double du = max_u(end), dh = 0;
    for (std::size_t c : mesh.active_cells()) dh = std::max(dh, std::abs(end.h[c] + p.z[c] - C));
    suite.add(tag + " lake at rest", du <= 1e-12 && dh <= 1e-12 * C,
              std::to_string(end.step) + " steps, max|u| = " + sci(du) + ", max|h+z-C| = " + sci(dh));
  }

  // determinism
  {
    SchemeParams p = params;
    p.time_step = FixedStep{0.5 * dt};
    p.t_end = 20 * 0.5 * dt;
    const State a = run(mesh, s0, p);
    const State b = run(mesh, s0, p);
    suite.add(tag + " determinism", a.h == b.h && a.u == b.u, "two 20-step runs compared bitwise");
  }
}

}  // namespace

std::vector<CheckResult> run_verification(std::uint64_t seed) {
  Suite suite;
  std::mt19937_64 rng(seed);
  try {
    check_mesh(suite, "square 8x8:", square_mesh(), rng);
    check_mesh(suite, "obstacle 8x8:", obstacle_mesh(), rng);
  } catch (const std::exception& e) {
    suite.add("verification aborted", false, e.what());
  }
  return suite.results;
}

}  // namespace swmac
