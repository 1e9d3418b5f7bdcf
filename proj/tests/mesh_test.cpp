#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "lcamr/mesh.hpp"

using namespace lcamr;

namespace {

int count_kind(const std::vector<Edge>& edges, EdgeKind k) {
  int n = 0;
  for (const Edge& e : edges)
    if (e.kind == k) ++n;
  return n;
}

// Shared-face bookkeeping: a boundary record covers one cell face, a
// conforming record two, a hanging record one fine face plus half of the
// coarse face it subdivides.
void check_face_budget(const Mesh& mesh) {
  const auto edges = active_edges(mesh);
  const double faces = count_kind(edges, EdgeKind::boundary) +
                       2.0 * count_kind(edges, EdgeKind::conforming) +
                       1.5 * count_kind(edges, EdgeKind::hanging);
  CHECK(faces == doctest::Approx(4.0 * mesh.n_active()));
}

void check_one_irregular(const Mesh& mesh) {
  for (const Edge& e : active_edges(mesh)) {
    if (e.kind == EdgeKind::conforming) {
      CHECK(mesh.cell(e.cells[0]).level == mesh.cell(e.cells[1]).level);
    } else if (e.kind == EdgeKind::hanging) {
      REQUIRE(e.coarse_side >= 0);
      const int coarse = mesh.cell(e.cells[e.coarse_side]).level;
      const int fine = mesh.cell(e.cells[1 - e.coarse_side]).level;
      CHECK(fine - coarse == 1);
    }
  }
}

}  // namespace

TEST_SUITE_BEGIN("mesh");

TEST_CASE("uniform grids have the requested leaves") {
  CHECK(uniform_mesh(1, 1).n_active() == 1);
  CHECK(uniform_mesh(32, 32).n_active() == 1024);
  CHECK(uniform_mesh(3, 5).n_active() == 15);
}

TEST_CASE("cell boxes tile the domain") {
  const Mesh mesh = uniform_mesh(4, 4);
  const int32_t id = mesh.at(0, 2, 1);
  REQUIRE(id >= 0);
  double x0, y0, hx, hy;
  mesh.cell_box(id, &x0, &y0, &hx, &hy);
  CHECK(x0 == doctest::Approx(0.5));
  CHECK(y0 == doctest::Approx(0.25));
  CHECK(hx == doctest::Approx(0.25));
  CHECK(hy == doctest::Approx(0.25));
  double area = 0.0;
  for (int32_t c : mesh.active) {
    mesh.cell_box(c, &x0, &y0, &hx, &hy);
    area += hx * hy;
  }
  CHECK(area == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("refining one parent produces four ordered children") {
  const Mesh coarse = uniform_mesh(1, 1);
  const Mesh fine = refine(coarse, {0});
  CHECK(fine.n_active() == 4);
  CHECK(fine.max_level() == 1);
  const Cell& parent = fine.cell(0);
  CHECK(!parent.is_leaf());
  // children: SW, SE, NW, NE
  const int32_t se = parent.children[1];
  CHECK(fine.cell(se).gx == 1);
  CHECK(fine.cell(se).gy == 0);
  CHECK(fine.cell(se).parent == 0);
  CHECK(coarse.n_active() == 1);  // input untouched
}

TEST_CASE("edge census on a conforming 2x2 grid") {
  const auto edges = active_edges(uniform_mesh(2, 2));
  CHECK(edges.size() == 12);
  CHECK(count_kind(edges, EdgeKind::boundary) == 8);
  CHECK(count_kind(edges, EdgeKind::conforming) == 4);
  CHECK(count_kind(edges, EdgeKind::hanging) == 0);
}

TEST_CASE("hanging records after refining one cell of 2x2") {
  const Mesh base = uniform_mesh(2, 2);
  const int32_t sw = base.at(0, 0, 0);
  const Mesh mesh = refine(base, {sw});
  CHECK(mesh.n_active() == 7);

  const auto edges = active_edges(mesh);
  CHECK(count_kind(edges, EdgeKind::boundary) == 10);
  CHECK(count_kind(edges, EdgeKind::conforming) == 6);
  CHECK(count_kind(edges, EdgeKind::hanging) == 4);
  check_face_budget(mesh);
  check_one_irregular(mesh);

  for (const Edge& e : edges) {
    if (e.kind != EdgeKind::hanging) continue;
    CHECK(e.coarse_side == 1);  // fine children sit on the negative side
    CHECK(e.length == doctest::Approx(0.25));
    CHECK(e.p1[e.vertical ? 1 : 0] - e.p0[e.vertical ? 1 : 0] ==
          doctest::Approx(0.25));
  }
}

TEST_CASE("closure keeps neighbors within one level") {
  const Mesh base = uniform_mesh(2, 2);
  Mesh mesh = refine(base, {base.at(0, 0, 0)});
  // The SE child touches the coarse east neighbor; splitting it again
  // would leave a two-level jump unless closure refines that neighbor.
  const int32_t child_se = mesh.at(1, 1, 0);
  REQUIRE(child_se >= 0);
  mesh = refine(mesh, {child_se});
  CHECK(mesh.n_active() == 13);
  check_one_irregular(mesh);
  check_face_budget(mesh);
}

TEST_CASE("refine validates its marks") {
  Mesh mesh = refine(uniform_mesh(1, 1), {0});
  CHECK_THROWS_AS(refine(mesh, {0}), std::invalid_argument);     // not a leaf
  CHECK_THROWS_AS(refine(mesh, {999}), std::invalid_argument);   // no such id
}

TEST_CASE("cell diameter is the box diagonal") {
  const Mesh unit = uniform_mesh(1, 1);
  CHECK(cell_size(unit, 0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  const Mesh fine = refine(unit, {0});
  CHECK(cell_size(fine, fine.at(1, 0, 0)) ==
        doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-15));

  const Mesh wide = uniform_mesh(2, 2, BoundingBox{0.0, 0.0, 1.0, 2.0});
  const Mesh wide2 = refine(wide, {wide.at(0, 0, 0)});
  CHECK(cell_size(wide2, wide2.at(1, 0, 0)) ==
        doctest::Approx(0.5590169943749474).epsilon(1e-15));
}

TEST_CASE("random refinement sequences stay 1-irregular") {
  std::mt19937 rng(2024u);
  for (int trial = 0; trial < 8; ++trial) {
    Mesh mesh = uniform_mesh(2 + trial % 3, 2 + trial % 2);
    for (int round = 0; round < 5; ++round) {
      std::vector<int32_t> marks;
      for (int32_t id : mesh.active)
        if (rng() % 3 == 0) marks.push_back(id);
      if (marks.empty()) marks.push_back(mesh.active[0]);
      mesh = refine(mesh, marks);
      check_one_irregular(mesh);
      check_face_budget(mesh);
    }
    CHECK(mesh.max_level() >= 3);
  }
}

TEST_SUITE_END();
