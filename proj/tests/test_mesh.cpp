#include <doctest.h>

#include <cmath>
#include <set>

#include "support.hpp"
#include "swmac/error.hpp"
#include "swmac/mesh.hpp"

using namespace swmac;
using swtest::box_mesh;

TEST_CASE("2x2 grid on (0,2)^2: cells and edge counts") {
  const MacMesh m = box_mesh(2, 2, 2, 2);
  CHECK(m.num_cells() == 4);
  CHECK(m.num_active_cells() == 4);
  for (std::size_t c : m.active_cells()) CHECK(m.cell_area(c) == 1.0);
  for (Axis a : {Axis::X, Axis::Y}) {
    CHECK(m.num_edges(a) == 6);
    CHECK(m.count_edges(a, EdgeKind::Interior) == 2);
    CHECK(m.count_edges(a, EdgeKind::Exterior) == 4);
  }
}

TEST_CASE("single cell: no interior edge") {
  const MacMesh m = box_mesh(1, 1);
  for (Axis a : {Axis::X, Axis::Y}) {
    CHECK(m.count_edges(a, EdgeKind::Interior) == 0);
    CHECK(m.count_edges(a, EdgeKind::Exterior) == 2);
    for (std::size_t e = 0; e < m.num_edges(a); ++e) CHECK_THROWS_AS(m.dual_edges_of(a, e), MeshError);
  }
}

TEST_CASE("dam-break geometry: active cells = grid minus wall cells") {
  DomainSpec d;
  d.fluid = {Rect{0, 200, 0, 200}};
  d.obstacles = {Rect{95, 105, 0, 95}, Rect{95, 105, 170, 200}};
  const MacMesh m = MacMesh::build(d, GridSpec::uniform(d.bounding_box(), 200, 200));
  // wall 10 cells wide, 95 + 30 cells tall
  CHECK(m.num_active_cells() == 200u * 200u - 10u * (95u + 30u));
  CHECK(m.warnings().empty());
}

TEST_CASE("dam-break geometry at 1000x1000") {
  DomainSpec d;
  d.fluid = {Rect{0, 200, 0, 200}};
  d.obstacles = {Rect{95, 105, 0, 95}, Rect{95, 105, 170, 200}};
  const MacMesh m = MacMesh::build(d, GridSpec::uniform(d.bounding_box(), 1000, 1000));
  CHECK(m.num_active_cells() == 1000000u - 50u * (475u + 150u));
}

TEST_CASE("build errors") {
  DomainSpec d;
  d.fluid = {Rect{0, 1, 0, 1}};
  GridSpec g = GridSpec::uniform(d.bounding_box(), 4, 4);

  SUBCASE("non-monotone faces") {
    GridSpec bad = g;
    std::swap(bad.x_faces[1], bad.x_faces[2]);
    CHECK_THROWS_AS(MacMesh::build(d, bad), MeshError);
  }
  SUBCASE("empty active region") {
    DomainSpec all = d;
    all.obstacles = {Rect{0, 1, 0, 1}};
    CHECK_THROWS_AS(MacMesh::build(all, g), MeshError);
  }
  SUBCASE("misaligned obstacle without snapping") {
    DomainSpec o = d;
    o.obstacles = {Rect{0.3, 0.5, 0, 0.5}};
    CHECK_THROWS_AS(MacMesh::build(o, g), MeshError);
  }
  SUBCASE("misaligned obstacle with snapping warns") {
    DomainSpec o = d;
    o.obstacles = {Rect{0.3, 0.5, 0, 0.5}};
    MeshOptions opt;
    opt.snap_to_grid = true;
    const MacMesh m = MacMesh::build(o, g, opt);
    CHECK(m.warnings().size() == 1);
    CHECK(m.num_active_cells() == 14);
  }
}

TEST_CASE("edge next to an obstacle is exterior") {
  const MacMesh m = swtest::notched_mesh();
  // cell (2,0) active, cell (3,0) inactive: X edge (3,0) separates them
  CHECK(m.active(2, 0));
  CHECK_FALSE(m.active(3, 0));
  CHECK(m.edge_kind(Axis::X, m.edge_id(Axis::X, 3, 0)) == EdgeKind::Exterior);
  // X edge (4,0) lies between two inactive cells
  CHECK(m.edge_kind(Axis::X, m.edge_id(Axis::X, 4, 0)) == EdgeKind::None);
  // Y edge (3,4) lies on the top of the obstacle
  CHECK(m.edge_kind(Axis::Y, m.edge_id(Axis::Y, 3, 4)) == EdgeKind::Exterior);
}

TEST_CASE("partition: dual volumes of each axis sum to the active area") {
  for (const MacMesh& m : {box_mesh(7, 5, 3, 2), swtest::graded_mesh(), swtest::notched_mesh()}) {
    for (Axis a : {Axis::X, Axis::Y}) {
      double sum = 0;
      for (std::size_t e = 0; e < m.num_edges(a); ++e)
        if (m.edge_kind(a, e) != EdgeKind::None) sum += m.dual_volume(a, e);
      CHECK(std::abs(sum - m.active_area()) <= 1e-13 * m.active_area());
    }
  }
}

TEST_CASE("half volumes and normals on interior edges") {
  const MacMesh m = swtest::graded_mesh();
  for (Axis a : {Axis::X, Axis::Y}) {
    for (std::size_t e = 0; e < m.num_edges(a); ++e) {
      if (!m.interior(a, e)) continue;
      const std::size_t k = m.low_cell(a, e), l = m.high_cell(a, e);
      CHECK(m.dual_half_low(a, e) == doctest::Approx(m.cell_area(k) / 2).epsilon(1e-15));
      CHECK(m.dual_half_high(a, e) == doctest::Approx(m.cell_area(l) / 2).epsilon(1e-15));
      CHECK(m.normal_sign(a, e, k) == 1);
      CHECK(m.normal_sign(a, e, l) == -1);
    }
  }
}

TEST_CASE("dual edges of an interior edge on a 4x4 grid") {
  const MacMesh m = box_mesh(4, 4);
  for (Axis a : {Axis::X, Axis::Y}) {
    const std::size_t e = m.edge_id(a, 2, 2);
    REQUIRE(m.interior(a, e));
    const auto d = m.dual_edges_of(a, e);
    REQUIRE(d.size() == 4);
    int normal = 0, tangent = 0;
    for (const DualEdge& de : d) {
      if (de.kind == DualEdgeCase::Normal) {
        ++normal;
        CHECK(de.normal_axis == a);
        CHECK(de.measure == doctest::Approx(m.edge_length(a, e)));
      } else {
        ++tangent;
        CHECK(de.normal_axis == other(a));
        const Axis o = other(a);
        CHECK(de.measure ==
              doctest::Approx(0.5 * (m.edge_length(o, de.constituents[0]) + m.edge_length(o, de.constituents[1]))));
      }
    }
    CHECK(normal == 2);
    CHECK(tangent == 2);
  }
  // the two Normal faces sit inside the two cells sharing sigma
  const std::size_t e = m.edge_id(Axis::X, 2, 2);
  std::set<std::size_t> cells;
  for (const DualEdge& de : m.dual_edges_of(Axis::X, e))
    if (de.kind == DualEdgeCase::Normal) cells.insert(de.id);
  CHECK(cells == std::set<std::size_t>{m.cell_id(1, 2), m.cell_id(2, 2)});
}

TEST_CASE("dual edge next to the bottom wall uses boundary primal edges") {
  const MacMesh m = box_mesh(4, 4);
  const std::size_t e = m.edge_id(Axis::X, 2, 0);
  for (const DualEdge& de : m.dual_edges_of(Axis::X, e)) {
    if (de.kind != DualEdgeCase::Tangent || de.orientation > 0) continue;
    CHECK(de.neighbor == npos);
    for (std::size_t t : de.constituents) CHECK(m.edge_kind(Axis::Y, t) == EdgeKind::Exterior);
  }
}

TEST_CASE("dual edge adjacency is symmetric with opposite orientation") {
  for (const MacMesh& m : {box_mesh(5, 4), swtest::notched_mesh(), swtest::graded_mesh()}) {
    for (Axis a : {Axis::X, Axis::Y}) {
      for (std::size_t e = 0; e < m.num_edges(a); ++e) {
        if (!m.interior(a, e)) continue;
        for (const DualEdge& de : m.dual_edges_of(a, e)) {
          if (de.neighbor == npos || !m.interior(a, de.neighbor)) continue;
          bool found = false;
          for (const DualEdge& back : m.dual_edges_of(a, de.neighbor))
            if (back.neighbor == e && back.kind == de.kind && back.id == de.id &&
                back.orientation == -de.orientation && back.measure == de.measure)
              found = true;
          CHECK(found);
        }
      }
    }
  }
}

TEST_CASE("regularity metrics") {
  SUBCASE("uniform square cells") {
    const Regularity r = box_mesh(10, 10, 1, 1).regularity_metrics();
    CHECK(r.size == doctest::Approx(0.1 * std::sqrt(2.0)));
    CHECK(r.regularity == doctest::Approx(1.0));
  }
  SUBCASE("dx = 1, dy = 2") {
    const Regularity r = box_mesh(3, 3, 3, 6).regularity_metrics();
    CHECK(r.regularity == doctest::Approx(2.0));
    CHECK(r.size == doctest::Approx(std::sqrt(5.0)));
  }
  SUBCASE("100x100 on (0,4)^2") {
    const Regularity r = box_mesh(100, 100, 4, 4).regularity_metrics();
    CHECK(r.size == doctest::Approx(0.04 * std::sqrt(2.0)));
  }
}

TEST_CASE("ids are deterministic functions of (i, j)") {
  const MacMesh m = box_mesh(6, 3);
  CHECK(m.cell_id(4, 2) == 4 + 6 * 2);
  CHECK(m.edge_id(Axis::X, 6, 2) == 6 + 7 * 2);
  CHECK(m.edge_id(Axis::Y, 5, 3) == 5 + 6 * 3);
  CHECK(m.node_id(6, 3) == m.num_nodes() - 1);
  const auto ed = m.cell_edges(m.cell_id(4, 2));
  CHECK(ed[0] == m.edge_id(Axis::X, 4, 2));
  CHECK(ed[1] == m.edge_id(Axis::X, 5, 2));
  CHECK(ed[2] == m.edge_id(Axis::Y, 4, 2));
  CHECK(ed[3] == m.edge_id(Axis::Y, 4, 3));
}

TEST_CASE("normal_sign rejects a cell that does not own the edge") {
  const MacMesh m = box_mesh(4, 4);
  CHECK_THROWS_AS(m.normal_sign(Axis::X, m.edge_id(Axis::X, 2, 2), m.cell_id(3, 3)), MeshError);
}
