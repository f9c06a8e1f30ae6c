#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "wavepath/triangulate.hpp"

using namespace wavepath;

namespace {

Instance square_instance() {
  Instance inst;
  inst.outer = {{-5, -5}, {5, -5}, {5, 5}, {-5, 5}};
  inst.s = {-2, 0};
  inst.t = {2, 0};
  return inst;
}

Instance square_hole_instance() {
  Instance inst = square_instance();
  inst.holes = {{{-0.5, -0.5}, {-0.5, 0.5}, {0.5, 0.5}, {0.5, -0.5}}};
  return inst;
}

double free_space_area(const Instance& inst) {
  double a = polygon_signed_area(inst.outer);
  for (const auto& h : inst.holes) a += polygon_signed_area(h); // holes are cw
  return a;
}

double mesh_area(const Triangulation& tri) {
  double a = 0.0;
  for (const auto& t : tri.triangles) {
    Point p = tri.vertices[t.v[0]], q = tri.vertices[t.v[1]], r = tri.vertices[t.v[2]];
    a += 0.5 * cross(q - p, r - p);
  }
  return a;
}

std::size_t edge_count(const Triangulation& tri) {
  std::set<std::pair<int, int>> edges;
  for (const auto& t : tri.triangles)
    for (int e = 0; e < 3; ++e) {
      int a = t.v[e], b = t.v[(e + 1) % 3];
      edges.insert({std::min(a, b), std::max(a, b)});
    }
  return edges.size();
}

void check_mesh(const Instance& inst, const Triangulation& tri) {
  for (const auto& t : tri.triangles) {
    Point p = tri.vertices[t.v[0]], q = tri.vertices[t.v[1]], r = tri.vertices[t.v[2]];
    CHECK(orient(p, q, r) > 0);
    // No triangle crosses a constrained edge: constrained edges only ever
    // appear as triangle edges, so it suffices that no triangle edge
    // properly crosses an obstacle edge.
    auto blocked = [&](Point a, Point b, const std::vector<Point>& poly) {
      for (std::size_t i = 0; i < poly.size(); ++i)
        if (segments_properly_intersect(a, b, poly[i], poly[(i + 1) % poly.size()]))
          return true;
      return false;
    };
    for (int e = 0; e < 3; ++e) {
      Point a = tri.vertices[t.v[e]], b = tri.vertices[t.v[(e + 1) % 3]];
      CHECK(!blocked(a, b, inst.outer));
      for (const auto& h : inst.holes) CHECK(!blocked(a, b, h));
    }
  }
  CHECK(mesh_area(tri) ==
        doctest::Approx(free_space_area(inst)).epsilon(1e-9));
}

} // namespace

TEST_CASE("square without sites splits into two triangles") {
  auto tri = triangulate(square_instance(), false);
  CHECK(tri.vertices.size() == 4);
  CHECK(tri.triangles.size() == 2);
}

TEST_CASE("euler identity holds") {
  for (const Instance& inst : {square_instance(), square_hole_instance(),
                               random_instance(3, 4, 8)}) {
    auto tri = triangulate(inst);
    std::size_t V = tri.vertices.size(), E = edge_count(tri), T = tri.triangles.size();
    std::size_t holes = inst.hole_count();
    // V - E + F = 2 with F = T + 1 outer face, minus one per hole.
    CHECK(static_cast<long>(V) - static_cast<long>(E) + static_cast<long>(T + 1) ==
          2 - static_cast<long>(holes));
  }
}

TEST_CASE("square with interior sites yields six triangles") {
  auto tri = triangulate(square_instance());
  CHECK(tri.vertices.size() == 6);
  CHECK(tri.triangles.size() == 6); // T = 2V - B - 2 with V=6, B=4
  CHECK(tri.s_index >= 0);
  CHECK(tri.t_index >= 0);
  CHECK(tri.vertices[tri.s_index] == Point{-2, 0});
}

TEST_CASE("meshes tile the free space") {
  check_mesh(square_instance(), triangulate(square_instance()));
  check_mesh(square_hole_instance(), triangulate(square_hole_instance()));
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Instance inst = random_instance(seed, 1 + seed % 10, 8);
    check_mesh(inst, triangulate(inst));
  }
}

TEST_CASE("obstacle edges are constrained and appear in the mesh") {
  Instance inst = square_hole_instance();
  auto tri = triangulate(inst);
  std::set<std::pair<int, int>> mesh_edges;
  for (const auto& t : tri.triangles)
    for (int e = 0; e < 3; ++e) {
      int a = t.v[e], b = t.v[(e + 1) % 3];
      mesh_edges.insert({std::min(a, b), std::max(a, b)});
    }
  for (const auto& ce : tri.constrained) CHECK(mesh_edges.count(ce) == 1);
  CHECK(tri.constrained.size() == 8); // 4 outer + 4 hole edges
}

TEST_CASE("locate") {
  auto tri = triangulate(square_hole_instance());
  SUBCASE("centroid of triangle 0 maps to 0") {
    const auto& t = tri.triangles[0];
    Point c = (1.0 / 3.0) * (tri.vertices[t.v[0]] + tri.vertices[t.v[1]] + tri.vertices[t.v[2]]);
    CHECK(locate(tri, c) == 0);
  }
  SUBCASE("shared edge resolves to the lower id") {
    for (std::size_t ti = 0; ti < tri.triangles.size(); ++ti) {
      const auto& t = tri.triangles[ti];
      for (int e = 0; e < 3; ++e) {
        if (t.nbr[e] < 0) continue;
        Point mid = 0.5 * (tri.vertices[t.v[e]] + tri.vertices[t.v[(e + 1) % 3]]);
        CHECK(locate(tri, mid) == std::min(static_cast<int>(ti), t.nbr[e]));
      }
    }
  }
  SUBCASE("hole interior raises") {
    CHECK_THROWS(locate(tri, {0, 0}));
  }
}

TEST_CASE("triangulation is deterministic") {
  Instance inst = random_instance(11, 6, 8);
  CHECK(dump_triangulation(triangulate(inst)) == dump_triangulation(triangulate(inst)));
}
