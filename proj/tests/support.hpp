// Shared helpers for the test binaries. The oracles here are written from the
// scheme's formulas with plain (i, j) loops and do not call the library's
// operators, so they can catch mistakes in the production code paths.
#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "swmac/mesh.hpp"
#include "swmac/scheme.hpp"

namespace swtest {

using namespace swmac;

inline MacMesh box_mesh(int nx, int ny, double lx = 1.0, double ly = 1.0) {
  DomainSpec d;
  d.fluid = {Rect{0, lx, 0, ly}};
  return MacMesh::build(d, GridSpec::uniform(d.bounding_box(), nx, ny));
}

/// 8x8 on the unit square with a 2x4 obstacle touching the bottom wall.
inline MacMesh notched_mesh() {
  DomainSpec d;
  d.fluid = {Rect{0, 1, 0, 1}};
  d.obstacles = {Rect{0.375, 0.625, 0, 0.5}};
  return MacMesh::build(d, GridSpec::uniform(d.bounding_box(), 8, 8));
}

/// Non-uniform 8x8 grid on the unit square.
inline MacMesh graded_mesh() {
  DomainSpec d;
  d.fluid = {Rect{0, 1, 0, 1}};
  GridSpec g;
  for (int k = 0; k <= 8; ++k) {
    const double s = k / 8.0;
    g.x_faces.push_back(s * s * (3 - 2 * s));
    g.y_faces.push_back(0.5 * s + 0.5 * s * s);
  }
  return MacMesh::build(d, g);
}

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(std::uint64_t seed) : gen(seed) {}
  double operator()(double a, double b) { return std::uniform_real_distribution<double>(a, b)(gen); }
};

inline State make_random_state(const MacMesh& mesh, Rng& rng, double g, double hmin, double hmax, double umax) {
  ScalarField h(mesh);
  for (std::size_t c : mesh.active_cells()) h[c] = rng(hmin, hmax);
  VelocityField u(mesh);
  for (Axis a : {Axis::X, Axis::Y})
    for (std::size_t e = 0; e < mesh.num_edges(a); ++e)
      if (mesh.interior(a, e)) u[a][e] = rng(-umax, umax);
  return make_state(mesh, std::move(h), std::move(u), g);
}

inline ScalarField random_field(const MacMesh& mesh, Rng& rng, double lo, double hi) {
  ScalarField z(mesh);
  for (std::size_t c : mesh.active_cells()) z[c] = rng(lo, hi);
  return z;
}

// ------------------------------------------------------------------ oracles

/// Brute-force geometry and fluxes on the (i, j) lattice.
struct Oracle {
  const MacMesh& m;

  bool act(int i, int j) const { return m.active(i, j); }
  double dx(int i) const { return m.dx(i); }
  double dy(int j) const { return m.dy(j); }
  // X edge (i, j) between (i-1, j) and (i, j); Y edge (i, j) between (i, j-1) and (i, j)
  bool x_interior(int i, int j) const { return j >= 0 && j < m.ny() && act(i - 1, j) && act(i, j); }
  bool y_interior(int i, int j) const { return i >= 0 && i < m.nx() && act(i, j - 1) && act(i, j); }
  double ux(const VelocityField& u, int i, int j) const {
    return x_interior(i, j) ? u[Axis::X][m.edge_id(Axis::X, i, j)] : 0.0;
  }
  double uy(const VelocityField& u, int i, int j) const {
    return y_interior(i, j) ? u[Axis::Y][m.edge_id(Axis::Y, i, j)] : 0.0;
  }
  double hc(const ScalarField& h, int i, int j) const { return h[m.cell_id(i, j)]; }

  /// Flux along +x through X edge (i, j).
  double fx(const ScalarField& h, const VelocityField& u, int i, int j) const {
    if (!x_interior(i, j)) return 0;
    const double v = ux(u, i, j);
    return dy(j) * (v >= 0 ? hc(h, i - 1, j) : hc(h, i, j)) * v;
  }
  double fy(const ScalarField& h, const VelocityField& u, int i, int j) const {
    if (!y_interior(i, j)) return 0;
    const double v = uy(u, i, j);
    return dx(i) * (v >= 0 ? hc(h, i, j - 1) : hc(h, i, j)) * v;
  }
  double upwind_hx(const ScalarField& h, const VelocityField& u, int i, int j) const {
    return ux(u, i, j) >= 0 ? hc(h, i - 1, j) : hc(h, i, j);
  }
  double upwind_hy(const ScalarField& h, const VelocityField& u, int i, int j) const {
    return uy(u, i, j) >= 0 ? hc(h, i, j - 1) : hc(h, i, j);
  }

  double area(int i, int j) const { return dx(i) * dy(j); }
  double dvol_x(int i, int j) const { return 0.5 * (dx(i - 1) + dx(i)) * dy(j); }
  double dvol_y(int i, int j) const { return 0.5 * (dy(j - 1) + dy(j)) * dx(i); }

  double hdual_x(const ScalarField& h, int i, int j) const {
    return (0.5 * area(i - 1, j) * hc(h, i - 1, j) + 0.5 * area(i, j) * hc(h, i, j)) / dvol_x(i, j);
  }
  double hdual_y(const ScalarField& h, int i, int j) const {
    return (0.5 * area(i, j - 1) * hc(h, i, j - 1) + 0.5 * area(i, j) * hc(h, i, j)) / dvol_y(i, j);
  }

  /// One face of a dual cell: outward flux and the velocity across it (0 at walls).
  struct Face {
    double flux;
    double u_out;
    double u_in;
  };

  /// Faces of the dual cell of X edge (i, j): right, left, top, bottom.
  std::array<Face, 4> faces_x(const ScalarField& h, const VelocityField& u, int i, int j) const {
    const double self = ux(u, i, j);
    return {{
        {0.5 * (fx(h, u, i, j) + fx(h, u, i + 1, j)), self, ux(u, i + 1, j)},
        {-0.5 * (fx(h, u, i - 1, j) + fx(h, u, i, j)), self, ux(u, i - 1, j)},
        {0.5 * (fy(h, u, i - 1, j + 1) + fy(h, u, i, j + 1)), self, ux(u, i, j + 1)},
        {-0.5 * (fy(h, u, i - 1, j) + fy(h, u, i, j)), self, ux(u, i, j - 1)},
    }};
  }
  std::array<Face, 4> faces_y(const ScalarField& h, const VelocityField& u, int i, int j) const {
    const double self = uy(u, i, j);
    return {{
        {0.5 * (fy(h, u, i, j) + fy(h, u, i, j + 1)), self, uy(u, i, j + 1)},
        {-0.5 * (fy(h, u, i, j - 1) + fy(h, u, i, j)), self, uy(u, i, j - 1)},
        {0.5 * (fx(h, u, i + 1, j - 1) + fx(h, u, i + 1, j)), self, uy(u, i + 1, j)},
        {-0.5 * (fx(h, u, i, j - 1) + fx(h, u, i, j)), self, uy(u, i - 1, j)},
    }};
  }

  static double upwind(const Face& f) { return f.flux >= 0 ? f.u_out : f.u_in; }
};

/// Closed form of the kinetic residual on a wet interior dual cell, with
/// a = u^{n+1}, b = u^n:
///   R = h1_D (a - b)^2 / (2 dt) - 1/(2|D|) sum_eps F_eps [(u_eps - a)^2 - (a - b)^2]
inline double closed_form_kinetic(double h1_dual, double a, double b, double dt, double dvol,
                                  const std::array<Oracle::Face, 4>& faces) {
  double s = 0;
  for (const auto& f : faces) {
    const double ue = Oracle::upwind(f);
    s += f.flux * ((ue - a) * (ue - a) - (a - b) * (a - b));
  }
  return h1_dual * (a - b) * (a - b) / (2 * dt) - s / (2 * dvol);
}

/// Left side of the kinetic balance, term by term, negated.
inline double direct_kinetic(const Oracle& o, const State& s0, const State& s1, const ScalarField& z, double g,
                             double dt, Axis a, int i, int j) {
  const bool x = a == Axis::X;
  const auto faces = x ? o.faces_x(s0.h, s0.u, i, j) : o.faces_y(s0.h, s0.u, i, j);
  const double dvol = x ? o.dvol_x(i, j) : o.dvol_y(i, j);
  const double len = x ? o.dy(j) : o.dx(i);
  const double u0 = x ? o.ux(s0.u, i, j) : o.uy(s0.u, i, j);
  const double u1 = x ? o.ux(s1.u, i, j) : o.uy(s1.u, i, j);
  const double h0d = x ? o.hdual_x(s0.h, i, j) : o.hdual_y(s0.h, i, j);
  const double h1d = x ? o.hdual_x(s1.h, i, j) : o.hdual_y(s1.h, i, j);
  const int il = x ? i - 1 : i, jl = x ? j : j - 1;
  const std::size_t kl = o.m.cell_id(il, jl), kh = o.m.cell_id(i, j);
  double flux = 0;
  for (const auto& f : faces) {
    const double ue = Oracle::upwind(f);
    flux += f.flux * ue * ue;
  }
  const double p1l = 0.5 * g * s1.h[kl] * s1.h[kl], p1h = 0.5 * g * s1.h[kh] * s1.h[kh];
  const double grad_p = len / dvol * (p1h - p1l);
  const double grad_z = len / dvol * (z[kh] - z[kl]);
  const double hcen = 0.5 * (s1.h[kl] + s1.h[kh]);
  const double lhs = (h1d * u1 * u1 - h0d * u0 * u0) / (2 * dt) + flux / (2 * dvol) + u1 * grad_p +
                     g * hcen * u1 * grad_z;
  return -lhs;
}

/// Closed form of the potential residual:
///   R_K = -(g/(2|K|)) sum_sigma |sigma| u_{K,sigma} (h_sigma - h_K)^2 - g/(2 dt) (h1_K - h0_K)^2
inline double closed_form_potential(const Oracle& o, const State& s0, const State& s1, double g, double dt, int i,
                                    int j) {
  const double hk = o.hc(s0.h, i, j);
  struct Term {
    double len, uk, hs;
  };
  const Term t[4] = {
      {o.dy(j), -o.ux(s0.u, i, j), o.upwind_hx(s0.h, s0.u, i, j)},
      {o.dy(j), o.ux(s0.u, i + 1, j), o.upwind_hx(s0.h, s0.u, i + 1, j)},
      {o.dx(i), -o.uy(s0.u, i, j), o.upwind_hy(s0.h, s0.u, i, j)},
      {o.dx(i), o.uy(s0.u, i, j + 1), o.upwind_hy(s0.h, s0.u, i, j + 1)},
  };
  double s = 0;
  for (const Term& q : t)
    if (q.uk != 0) s += q.len * q.uk * (q.hs - hk) * (q.hs - hk);
  const double dh = o.hc(s1.h, i, j) - hk;
  return -g / (2 * o.area(i, j)) * s - g / (2 * dt) * dh * dh;
}

inline double max_abs_velocity(const State& s) {
  double m = 0;
  for (Axis a : {Axis::X, Axis::Y})
    for (double v : s.u[a]) m = std::max(m, std::abs(v));
  return m;
}

inline double max_height(const MacMesh& mesh, const State& s) {
  double m = 0;
  for (std::size_t c : mesh.active_cells()) m = std::max(m, s.h[c]);
  return m;
}

/// Largest dt (by halving from the mass CFL bound) whose step also meets the
/// momentum CFL bound evaluated with h^{n+1}.
inline double cfl_safe_dt(const MacMesh& mesh, const State& s, const SchemeParams& p, double safety = 0.9) {
  double dt = safety * cfl_mass(mesh, s.u);
  for (int k = 0; k < 60; ++k, dt *= 0.5) {
    const StepResult r = step(mesh, s, p, dt);
    if (cfl_momentum(mesh, r.state.h_dual, r.fluxes) >= dt) return dt;
  }
  return dt;
}

}  // namespace swtest
