#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace swmac {

/// Coordinate direction. Edges of axis X are orthogonal to e1 (vertical faces)
/// and carry the first velocity component; edges of axis Y carry the second.
enum class Axis : int { X = 0, Y = 1 };

constexpr int index(Axis a) { return static_cast<int>(a); }
constexpr Axis other(Axis a) { return a == Axis::X ? Axis::Y : Axis::X; }

inline constexpr std::size_t npos = static_cast<std::size_t>(-1);

/// Axis-aligned rectangle (x0, x1) x (y0, y1).
struct Rect {
  double x0 = 0, x1 = 0, y0 = 0, y1 = 0;
};

/// Computational domain: a union of fluid rectangles minus obstacle rectangles.
struct DomainSpec {
  std::vector<Rect> fluid;
  std::vector<Rect> obstacles;

  Rect bounding_box() const;
};

/// Face coordinates per axis.
struct GridSpec {
  std::vector<double> x_faces;
  std::vector<double> y_faces;

  static GridSpec uniform(const Rect& box, int nx, int ny);
};

struct MeshOptions {
  /// Snap rectangle sides that fall between faces to the nearest face.
  bool snap_to_grid = false;
  /// Relative tolerance (in units of the local cell size) for alignment checks.
  double align_tol = 1e-9;
};

enum class EdgeKind : std::uint8_t {
  None,      // not part of the mesh (no adjacent active cell)
  Interior,  // sigma = K|L with both cells active
  Exterior,  // exactly one adjacent active cell
};

enum class DualEdgeCase : std::uint8_t {
  Normal,   // orthogonal to the velocity direction, inside one primal cell
  Tangent,  // parallel to the velocity direction, made of two primal half-edges
};

/// One face of a dual cell D_sigma, seen from D_sigma.
struct DualEdge {
  DualEdgeCase kind = DualEdgeCase::Normal;
  /// Cell id for Normal faces, node id for Tangent faces.
  std::size_t id = npos;
  /// +1 when the outward normal of D_sigma on this face points along +axis.
  int orientation = 1;
  /// Dual cell on the other side (edge id of the same axis), npos on the boundary.
  std::size_t neighbor = npos;
  /// Axis the face is orthogonal to.
  Axis normal_axis = Axis::X;
  double measure = 0;
  /// Normal: the two same-axis primal edges {sigma, sigma'} in increasing order.
  /// Tangent: the two other-axis primal edges {tau, tau'} whose halves make up
  /// the face (npos when outside the grid).
  std::array<std::size_t, 2> constituents{npos, npos};
};

struct Regularity {
  double size = 0;       // max cell diameter
  double regularity = 0; // max |sigma|/|sigma'| over edges of different axes
};

/// Staggered rectangular (MAC) mesh on a structured (i, j) lattice with an
/// active-cell mask. Ids are fixed functions of (i, j, axis):
///   cell (i, j)          -> i + nx * j
///   X edge (i, j)        -> i + (nx + 1) * j,  i in [0, nx], j in [0, ny)
///   Y edge (i, j)        -> i + nx * j,        i in [0, nx), j in [0, ny]
///   node (i, j)          -> i + (nx + 1) * j,  i in [0, nx], j in [0, ny]
/// The X edge (i, j) separates cells (i-1, j) and (i, j); the Y edge (i, j)
/// separates cells (i, j-1) and (i, j). The "low" cell of an edge is the one on
/// the negative side, so n_{low,sigma} = +e and n_{high,sigma} = -e.
class MacMesh {
 public:
  static MacMesh build(const DomainSpec& domain, const GridSpec& grid,
                       const MeshOptions& options = {});

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  const std::vector<double>& x_faces() const { return xf_; }
  const std::vector<double>& y_faces() const { return yf_; }

  // cells
  std::size_t num_cells() const { return static_cast<std::size_t>(nx_) * ny_; }
  std::size_t num_active_cells() const { return num_active_; }
  std::size_t cell_id(int i, int j) const { return static_cast<std::size_t>(i) + static_cast<std::size_t>(nx_) * j; }
  int cell_i(std::size_t c) const { return static_cast<int>(c % nx_); }
  int cell_j(std::size_t c) const { return static_cast<int>(c / nx_); }
  bool active(std::size_t c) const { return active_[c] != 0; }
  bool active(int i, int j) const {
    return i >= 0 && j >= 0 && i < nx_ && j < ny_ && active_[cell_id(i, j)] != 0;
  }
  double dx(int i) const { return xf_[i + 1] - xf_[i]; }
  double dy(int j) const { return yf_[j + 1] - yf_[j]; }
  double x_center(int i) const { return 0.5 * (xf_[i] + xf_[i + 1]); }
  double y_center(int j) const { return 0.5 * (yf_[j] + yf_[j + 1]); }
  double cell_area(std::size_t c) const { return area_[c]; }
  double active_area() const { return active_area_; }
  const std::vector<std::size_t>& active_cells() const { return active_list_; }

  // edges
  std::size_t num_edges(Axis a) const { return kind_[index(a)].size(); }
  std::size_t edge_id(Axis a, int i, int j) const {
    return a == Axis::X ? static_cast<std::size_t>(i) + static_cast<std::size_t>(nx_ + 1) * j
                        : static_cast<std::size_t>(i) + static_cast<std::size_t>(nx_) * j;
  }
  int edge_i(Axis a, std::size_t e) const {
    return static_cast<int>(a == Axis::X ? e % (nx_ + 1) : e % nx_);
  }
  int edge_j(Axis a, std::size_t e) const {
    return static_cast<int>(a == Axis::X ? e / (nx_ + 1) : e / nx_);
  }
  EdgeKind edge_kind(Axis a, std::size_t e) const { return kind_[index(a)][e]; }
  bool interior(Axis a, std::size_t e) const { return kind_[index(a)][e] == EdgeKind::Interior; }
  /// Active cell on the negative / positive side of the edge, npos if none.
  std::size_t low_cell(Axis a, std::size_t e) const { return low_[index(a)][e]; }
  std::size_t high_cell(Axis a, std::size_t e) const { return high_[index(a)][e]; }
  double edge_length(Axis a, std::size_t e) const { return length_[index(a)][e]; }
  /// |D_sigma|, and the half volumes |D_{K,sigma}| of the low / high cell.
  double dual_volume(Axis a, std::size_t e) const { return dual_low_[index(a)][e] + dual_high_[index(a)][e]; }
  double dual_half_low(Axis a, std::size_t e) const { return dual_low_[index(a)][e]; }
  double dual_half_high(Axis a, std::size_t e) const { return dual_high_[index(a)][e]; }
  std::array<double, 2> edge_center(Axis a, std::size_t e) const;
  /// n_{K,sigma} . e^(axis) for an active cell K adjacent to sigma.
  int normal_sign(Axis a, std::size_t e, std::size_t cell) const;
  /// Edges of an active cell: {low X, high X, low Y, high Y}.
  std::array<std::size_t, 4> cell_edges(std::size_t c) const;
  std::size_t count_edges(Axis a, EdgeKind k) const;

  // nodes
  std::size_t num_nodes() const { return static_cast<std::size_t>(nx_ + 1) * (ny_ + 1); }
  std::size_t node_id(int i, int j) const { return static_cast<std::size_t>(i) + static_cast<std::size_t>(nx_ + 1) * j; }

  /// Faces of the dual cell D_sigma. Throws MeshError if sigma is not interior.
  std::vector<DualEdge> dual_edges_of(Axis a, std::size_t e) const;

  Regularity regularity_metrics() const;

  /// Human-readable "X edge (i,j)" label for diagnostics.
  std::string edge_label(Axis a, std::size_t e) const;
  std::string cell_label(std::size_t c) const;

  /// Warnings collected while building (e.g. snapped rectangles).
  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  int nx_ = 0, ny_ = 0;
  std::vector<double> xf_, yf_;
  std::vector<std::uint8_t> active_;
  std::vector<double> area_;
  std::vector<std::size_t> active_list_;
  std::size_t num_active_ = 0;
  double active_area_ = 0;
  std::array<std::vector<EdgeKind>, 2> kind_;
  std::array<std::vector<std::size_t>, 2> low_, high_;
  std::array<std::vector<double>, 2> length_, dual_low_, dual_high_;
  std::vector<std::string> warnings_;
};

}  // namespace swmac
