#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "swmac/mesh.hpp"

namespace swmac {

/// Piecewise-constant function on the primal cells. Storage covers the whole
/// (i, j) lattice; entries of inactive cells are kept at zero and ignored.
class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(const MacMesh& mesh, double value = 0.0);

  std::size_t size() const { return values_.size(); }
  double& operator[](std::size_t c) { return values_[c]; }
  double operator[](std::size_t c) const { return values_[c]; }
  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  bool operator==(const ScalarField&) const = default;

 private:
  std::vector<double> values_;
};

/// One value per edge of each axis: the staggered velocity (u1 on X edges,
/// u2 on Y edges) and other per-dual-cell quantities share this layout.
class EdgeField {
 public:
  EdgeField() = default;
  explicit EdgeField(const MacMesh& mesh, double value = 0.0);

  std::vector<double>& operator[](Axis a) { return comp_[index(a)]; }
  const std::vector<double>& operator[](Axis a) const { return comp_[index(a)]; }

  bool operator==(const EdgeField&) const = default;

 private:
  std::array<std::vector<double>, 2> comp_;
};

/// Velocity in H_{E,0}: entries on exterior (and non-mesh) edges are zero.
using VelocityField = EdgeField;

using ScalarFunction = std::function<double(double, double)>;
using VectorFunction = std::function<std::array<double, 2>(double, double)>;

/// Cell means (1/|K|) int_K q, by 3x3 Gauss-Legendre quadrature per cell.
ScalarField project_scalar(const MacMesh& mesh, const ScalarFunction& q);

/// Component-wise dual-cell means on interior edges, zero elsewhere.
VelocityField project_velocity(const MacMesh& mesh, const VectorFunction& v);

/// Values at cell centers (used for the topography).
ScalarField sample_centers(const MacMesh& mesh, const ScalarFunction& q);

/// 3x3 Gauss-Legendre mean of q over a rectangle.
double rect_mean(const ScalarFunction& q, double x0, double x1, double y0, double y1);

/// sum_K |K| |a_K|
double l1_norm(const MacMesh& mesh, const ScalarField& a);
/// sum_K |K| |a_K - b_K|
double l1_error(const MacMesh& mesh, const ScalarField& a, const ScalarField& b);
/// sum_K |K| a_K
double integral(const MacMesh& mesh, const ScalarField& a);

}  // namespace swmac
