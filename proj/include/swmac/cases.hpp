#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "swmac/fields.hpp"
#include "swmac/mesh.hpp"
#include "swmac/scheme.hpp"

namespace swmac {

/// Planar free surface rotating in a paraboloid bowl (circular drop), with
/// bowl z = -h0 (1 - r^2) centered in (0, L)^2 and omega^2 = 2 g h0.
struct ParaboloidParams {
  double L = 4.0;
  double h0 = 0.1;
  double g = 9.81;
  /// Free-surface offset in units of h0. 1/4 gives the classical drop of
  /// radius 1 and peak height h0; any value yields an exact solution.
  double offset = 0.25;

  double omega() const;
  double period() const;
};

struct ExactPoint {
  double h = 0;
  double u1 = 0;
  double u2 = 0;
  double z = 0;
};

/// Exact solution: with X = x - L/2, Y = y - L/2,
///   h = max(0, h0 (X cos wt + Y sin wt) - z - offset h0),  u = (w/2)(-sin wt, cos wt).
ExactPoint paraboloid_exact(double x, double y, double t, const ParaboloidParams& p);

/// A complete test problem: geometry, data, time stepping and reference data.
struct CaseDefinition {
  std::string name;
  DomainSpec domain;
  int nx = 0;
  int ny = 0;
  MeshOptions mesh_options;
  double g = 9.81;
  ScalarFunction topography;
  ScalarFunction h0;
  VectorFunction u0;
  /// When set, h^0_K = max(0, C - z_K) instead of the cell mean of h0
  /// (a discrete lake at rest).
  std::optional<double> free_surface;
  TimeStepRule time_step = FixedStep{1e-3};
  double t_end = 0;
  /// Absolute dry threshold; default 1e-10 * max h^0.
  std::optional<double> eps_dry;
  /// Exact height at (x, y, t), when known.
  std::function<double(double, double, double)> exact_h;
  std::string reference;
};

MacMesh build_mesh(const CaseDefinition& c);
/// Topography sampled at cell centers, g and time stepping (eps_dry left at 0).
SchemeParams make_params(const CaseDefinition& c, const MacMesh& mesh);
State initial_state(const CaseDefinition& c, const MacMesh& mesh, const SchemeParams& params);

/// Mesh, parameters (dry threshold included) and initial state of a case.
struct CaseSetup {
  MacMesh mesh;
  SchemeParams params;
  State state;
};
CaseSetup setup_case(const CaseDefinition& c);

/// n x n grid on (0, L)^2, dt = dt_ratio * dx, run for whole steps within
/// `revolutions` periods 2 pi / omega.
CaseDefinition paraboloid_case(int n, double dt_ratio = 1.0 / 8.0, const ParaboloidParams& p = {},
                               double revolutions = 1.0);

struct DamBreakOptions {
  double breach_y0 = 95.0;
  double breach_y1 = 170.0;
  double t_end = 20.0;
  double dt_ratio = 1.0 / 25.0;
  double g = 9.81;
};

/// (0,200)^2 minus the wall (95,105)x(0,200) with a breach for y in
/// (breach_y0, breach_y1); h = 10 for x <= 100, 5 elsewhere, at rest.
CaseDefinition dambreak_case(int n, const DamBreakOptions& o = {});

/// Paraboloid bowl with a flat free surface C = max_K z_K + min_h, at rest,
/// dt = dx/8, for `steps` steps.
CaseDefinition lake_at_rest_case(int n, double min_h = 0.05, std::size_t steps = 500,
                                 const ParaboloidParams& p = {});

/// Discrete L1 distance between h and the cell means of the exact height at state.t.
double height_l1_error(const MacMesh& mesh, const State& state, const CaseDefinition& c);

struct ConvergenceRow {
  int n = 0;
  double dx = 0;
  double dt = 0;
  std::size_t steps = 0;
  double error = 0;
  /// log2(e_prev / e) against the previous row (NaN on the first row).
  double order = 0;
};

/// Run each grid of a case family to its end time and compare with the exact
/// height. Solver errors propagate with the offending grid in the message.
std::vector<ConvergenceRow> convergence_study(const std::function<CaseDefinition(int)>& family,
                                              std::span<const int> grids);

struct HeightExtrema {
  double min_h = 0;
  double max_h = 0;
};

HeightExtrema dambreak_extrema(const MacMesh& mesh, const State& state);

/// Built-in case by name ("paraboloid", "dambreak", "lake_at_rest").
CaseDefinition builtin_case(const std::string& name, int n);

}  // namespace swmac
