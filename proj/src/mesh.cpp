#include "swmac/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "swmac/error.hpp"

namespace swmac {

Rect DomainSpec::bounding_box() const {
  if (fluid.empty()) throw MeshError("domain has no fluid rectangle");
  Rect box = fluid.front();
  for (const Rect& r : fluid) {
    box.x0 = std::min(box.x0, r.x0);
    box.x1 = std::max(box.x1, r.x1);
    box.y0 = std::min(box.y0, r.y0);
    box.y1 = std::max(box.y1, r.y1);
  }
  return box;
}

GridSpec GridSpec::uniform(const Rect& box, int nx, int ny) {
  if (nx < 1 || ny < 1) throw MeshError("grid needs at least one cell per axis");
  GridSpec g;
  g.x_faces.resize(nx + 1);
  g.y_faces.resize(ny + 1);
  for (int i = 0; i <= nx; ++i) g.x_faces[i] = box.x0 + (box.x1 - box.x0) * i / nx;
  for (int j = 0; j <= ny; ++j) g.y_faces[j] = box.y0 + (box.y1 - box.y0) * j / ny;
  g.x_faces.back() = box.x1;
  g.y_faces.back() = box.y1;
  return g;
}

namespace {

void check_monotone(const std::vector<double>& f, const char* name) {
  if (f.size() < 2) throw MeshError(std::string(name) + ": need at least two face coordinates");
  for (std::size_t k = 0; k < f.size(); ++k) {
    if (!std::isfinite(f[k])) throw MeshError(std::string(name) + ": non-finite coordinate");
    if (k > 0 && !(f[k] > f[k - 1])) {
      std::ostringstream os;
      os << name << ": coordinates not strictly increasing at index " << k;
      throw MeshError(os.str());
    }
  }
}

// Distance from v to the nearest face, relative to the adjacent cell size.
// Values outside the grid are clamped onto it (rectangles may overhang).
bool aligned(const std::vector<double>& f, double v, double tol) {
  if (v <= f.front() || v >= f.back()) return true;
  auto it = std::lower_bound(f.begin(), f.end(), v);
  const std::size_t k = static_cast<std::size_t>(it - f.begin());
  const double h = f[k] - f[k - 1];
  return std::min(f[k] - v, v - f[k - 1]) <= tol * h;
}

bool contains(const Rect& r, double x, double y) {
  return x > r.x0 && x < r.x1 && y > r.y0 && y < r.y1;
}

}  // namespace

MacMesh MacMesh::build(const DomainSpec& domain, const GridSpec& grid, const MeshOptions& options) {
  check_monotone(grid.x_faces, "x_faces");
  check_monotone(grid.y_faces, "y_faces");
  if (domain.fluid.empty()) throw MeshError("domain has no fluid rectangle");

  MacMesh m;
  m.xf_ = grid.x_faces;
  m.yf_ = grid.y_faces;
  m.nx_ = static_cast<int>(m.xf_.size()) - 1;
  m.ny_ = static_cast<int>(m.yf_.size()) - 1;

  auto check_rect = [&](const Rect& r, const char* what) {
    if (!(r.x1 > r.x0) || !(r.y1 > r.y0)) throw MeshError(std::string(what) + " rectangle is empty or inverted");
    const bool ok = aligned(m.xf_, r.x0, options.align_tol) && aligned(m.xf_, r.x1, options.align_tol) &&
                    aligned(m.yf_, r.y0, options.align_tol) && aligned(m.yf_, r.y1, options.align_tol);
    if (ok) return;
    std::ostringstream os;
    os << what << " rectangle (" << r.x0 << "," << r.x1 << ")x(" << r.y0 << "," << r.y1
       << ") does not align with grid faces";
    if (!options.snap_to_grid) throw MeshError(os.str());
    m.warnings_.push_back(os.str() + "; snapped to nearest faces");
  };
  for (const Rect& r : domain.fluid) check_rect(r, "fluid");
  for (const Rect& r : domain.obstacles) check_rect(r, "obstacle");

  // A cell belongs to a rectangle when its center does; with aligned sides this
  // is exact inclusion, with snapping it rounds each side to the nearest face.
  const std::size_t nc = m.num_cells();
  m.active_.assign(nc, 0);
  m.area_.assign(nc, 0.0);
  for (int j = 0; j < m.ny_; ++j) {
    for (int i = 0; i < m.nx_; ++i) {
      const std::size_t c = m.cell_id(i, j);
      m.area_[c] = m.dx(i) * m.dy(j);
      const double x = m.x_center(i), y = m.y_center(j);
      bool in = std::any_of(domain.fluid.begin(), domain.fluid.end(), [&](const Rect& r) { return contains(r, x, y); });
      if (in) in = std::none_of(domain.obstacles.begin(), domain.obstacles.end(), [&](const Rect& r) { return contains(r, x, y); });
      if (in) {
        m.active_[c] = 1;
        m.active_list_.push_back(c);
        m.active_area_ += m.area_[c];
      }
    }
  }
  m.num_active_ = m.active_list_.size();
  if (m.num_active_ == 0) throw MeshError("domain has no active cell on this grid");

  for (Axis a : {Axis::X, Axis::Y}) {
    const int k = index(a);
    const std::size_t ne = a == Axis::X ? static_cast<std::size_t>(m.nx_ + 1) * m.ny_
                                        : static_cast<std::size_t>(m.nx_) * (m.ny_ + 1);
    m.kind_[k].assign(ne, EdgeKind::None);
    m.low_[k].assign(ne, npos);
    m.high_[k].assign(ne, npos);
    m.length_[k].assign(ne, 0.0);
    m.dual_low_[k].assign(ne, 0.0);
    m.dual_high_[k].assign(ne, 0.0);
    for (std::size_t e = 0; e < ne; ++e) {
      const int i = m.edge_i(a, e), j = m.edge_j(a, e);
      const int li = a == Axis::X ? i - 1 : i, lj = a == Axis::X ? j : j - 1;
      if (m.active(li, lj)) m.low_[k][e] = m.cell_id(li, lj);
      if (m.active(i, j)) m.high_[k][e] = m.cell_id(i, j);
      const bool lo = m.low_[k][e] != npos, hi = m.high_[k][e] != npos;
      m.kind_[k][e] = lo && hi ? EdgeKind::Interior : (lo || hi ? EdgeKind::Exterior : EdgeKind::None);
      m.length_[k][e] = a == Axis::X ? m.dy(j) : m.dx(i);
      if (lo) m.dual_low_[k][e] = 0.5 * m.area_[m.low_[k][e]];
      if (hi) m.dual_high_[k][e] = 0.5 * m.area_[m.high_[k][e]];
    }
  }
  return m;
}

std::array<double, 2> MacMesh::edge_center(Axis a, std::size_t e) const {
  const int i = edge_i(a, e), j = edge_j(a, e);
  if (a == Axis::X) return {xf_[i], y_center(j)};
  return {x_center(i), yf_[j]};
}

int MacMesh::normal_sign(Axis a, std::size_t e, std::size_t cell) const {
  if (cell != npos && low_[index(a)][e] == cell) return 1;
  if (cell != npos && high_[index(a)][e] == cell) return -1;
  throw MeshError(edge_label(a, e) + " is not a face of active " + cell_label(cell));
}

std::array<std::size_t, 4> MacMesh::cell_edges(std::size_t c) const {
  const int i = cell_i(c), j = cell_j(c);
  return {edge_id(Axis::X, i, j), edge_id(Axis::X, i + 1, j), edge_id(Axis::Y, i, j), edge_id(Axis::Y, i, j + 1)};
}

std::size_t MacMesh::count_edges(Axis a, EdgeKind k) const {
  return static_cast<std::size_t>(std::count(kind_[index(a)].begin(), kind_[index(a)].end(), k));
}

std::vector<DualEdge> MacMesh::dual_edges_of(Axis a, std::size_t e) const {
  if (e >= num_edges(a) || !interior(a, e))
    throw MeshError(edge_label(a, e) + " is not an interior edge; it carries no momentum cell");

  // (p, q): lattice coordinates along / across the axis.
  const bool ax = a == Axis::X;
  const int p = ax ? edge_i(a, e) : edge_j(a, e);
  const int q = ax ? edge_j(a, e) : edge_i(a, e);
  const int np = ax ? nx_ : ny_;  // cells along the axis
  const int nq = ax ? ny_ : nx_;  // cells across the axis
  const Axis b = other(a);
  auto same_edge = [&](int pp, int qq) -> std::size_t {
    if (pp < 0 || pp > np || qq < 0 || qq >= nq) return npos;
    const std::size_t id = ax ? edge_id(a, pp, qq) : edge_id(a, qq, pp);
    return kind_[index(a)][id] == EdgeKind::None ? npos : id;
  };
  // Other-axis edge at cell column pp (along a), lattice line qq (across a).
  auto cross_edge = [&](int pp, int qq) -> std::size_t {
    if (pp < 0 || pp >= np || qq < 0 || qq > nq) return npos;
    return ax ? edge_id(b, pp, qq) : edge_id(b, qq, pp);
  };
  auto cell = [&](int pp, int qq) { return ax ? cell_id(pp, qq) : cell_id(qq, pp); };
  auto node = [&](int pp, int qq) { return ax ? node_id(pp, qq) : node_id(qq, pp); };
  auto tangent_measure = [&](std::size_t t0, std::size_t t1) {
    double s = 0;
    for (std::size_t t : {t0, t1})
      if (t != npos && kind_[index(b)][t] == EdgeKind::Interior) s += length_[index(b)][t];
    return 0.5 * s;
  };
  const double width = length_[index(a)][e];

  std::vector<DualEdge> out;
  out.reserve(4);
  {
    DualEdge d;  // inside the low cell
    d.kind = DualEdgeCase::Normal;
    d.id = cell(p - 1, q);
    d.orientation = -1;
    d.neighbor = same_edge(p - 1, q);
    d.normal_axis = a;
    d.measure = width;
    d.constituents = {same_edge(p - 1, q), e};
    out.push_back(d);
  }
  {
    DualEdge d;  // inside the high cell
    d.kind = DualEdgeCase::Normal;
    d.id = cell(p, q);
    d.orientation = 1;
    d.neighbor = same_edge(p + 1, q);
    d.normal_axis = a;
    d.measure = width;
    d.constituents = {e, same_edge(p + 1, q)};
    out.push_back(d);
  }
  for (int side : {0, 1}) {
    DualEdge d;
    d.kind = DualEdgeCase::Tangent;
    d.id = node(p, q + side);
    d.orientation = side == 0 ? -1 : 1;
    d.neighbor = same_edge(p, side == 0 ? q - 1 : q + 1);
    d.normal_axis = b;
    d.constituents = {cross_edge(p - 1, q + side), cross_edge(p, q + side)};
    d.measure = tangent_measure(d.constituents[0], d.constituents[1]);
    out.push_back(d);
  }
  return out;
}

Regularity MacMesh::regularity_metrics() const {
  Regularity r;
  for (std::size_t c : active_list_) {
    const double w = dx(cell_i(c)), h = dy(cell_j(c));
    r.size = std::max(r.size, std::hypot(w, h));
  }
  std::array<double, 2> lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  std::array<double, 2> hi{0.0, 0.0};
  for (int k = 0; k < 2; ++k) {
    for (std::size_t e = 0; e < kind_[k].size(); ++e) {
      if (kind_[k][e] == EdgeKind::None) continue;
      lo[k] = std::min(lo[k], length_[k][e]);
      hi[k] = std::max(hi[k], length_[k][e]);
    }
  }
  r.regularity = std::max(hi[0] / lo[1], hi[1] / lo[0]);
  return r;
}

std::string MacMesh::edge_label(Axis a, std::size_t e) const {
  std::ostringstream os;
  os << (a == Axis::X ? "X" : "Y") << " edge " << e;
  if (e < num_edges(a)) os << " (" << edge_i(a, e) << "," << edge_j(a, e) << ")";
  return os.str();
}

std::string MacMesh::cell_label(std::size_t c) const {
  std::ostringstream os;
  if (c == npos || c >= num_cells()) {
    os << "cell <none>";
  } else {
    os << "cell " << c << " (" << cell_i(c) << "," << cell_j(c) << ")";
  }
  return os.str();
}

}  // namespace swmac
