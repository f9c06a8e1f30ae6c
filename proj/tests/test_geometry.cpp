#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include <gmpxx.h>

#include "wavepath/geometry.hpp"

using namespace wavepath;

namespace {

int orient_rational(double ax, double ay, double bx, double by, double cx, double cy) {
  mpq_class det = (mpq_class(ax) - cx) * (mpq_class(by) - cy) -
                  (mpq_class(ay) - cy) * (mpq_class(bx) - cx);
  return sgn(det);
}

} // namespace

TEST_CASE("orient basic signs") {
  CHECK(orient(0, 0, 1, 0, 0, 1) == 1);
  CHECK(orient(0, 0, 1, 1, 2, 2) == 0);
  CHECK(orient(0, 0, 1, 0, 2, -1e-12) == -1);
}

TEST_CASE("orient agrees with rational arithmetic on near-degenerate triples") {
  std::mt19937_64 rng(42);
  auto coord = [&] {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0;
  };
  int checked = 0;
  for (int i = 0; i < 100000; ++i) {
    double ax = coord(), ay = coord();
    double dx = coord(), dy = coord();
    double bx = ax + dx, by = ay + dy;
    // c nearly collinear with ab, perturbed at machine scale.
    double t = 1.0 + coord();
    double cx = ax + t * dx + coord() * 1e-15;
    double cy = ay + t * dy + coord() * 1e-15;
    REQUIRE(orient(ax, ay, bx, by, cx, cy) == orient_rational(ax, ay, bx, by, cx, cy));
    ++checked;
  }
  CHECK(checked == 100000);
}

TEST_CASE("det2_sign") {
  CHECK(det2_sign(1, 0, 0, 1) == 1);
  CHECK(det2_sign(1, 2, 2, 4) == 0);
  CHECK(det2_sign(0, 1, 1, 0) == -1);
}

TEST_CASE("tangent from point") {
  ConvexChain chain{{{-1, 0}, {0, 1}, {1, 0}}, true};
  auto left = tangent_from_point({0, 3}, chain, TangentSide::Left);
  CHECK(left.vertex == Point{-1, 0});
  auto right = tangent_from_point({0, 3}, chain, TangentSide::Right);
  CHECK(right.vertex == Point{1, 0});
  CHECK_THROWS_AS(tangent_from_point({0, 0.5}, chain, TangentSide::Left), std::domain_error);
}

TEST_CASE("tangent one-sidedness property") {
  std::mt19937_64 rng(7);
  auto u = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  for (int trial = 0; trial < 200; ++trial) {
    // Chain in convex position: points on a circle over a limited angle range.
    ConvexChain chain;
    int k = 3 + static_cast<int>(u() * 6);
    double a0 = u() * M_PI;
    double span = 0.5 + u() * (M_PI - 0.6);
    std::vector<double> angles;
    for (int i = 0; i < k; ++i) angles.push_back(a0 + span * i / (k - 1));
    for (double a : angles) chain.vertices.push_back({2.0 * std::cos(a), 2.0 * std::sin(a)});

    Point p{10.0 * (u() - 0.5) * 2.0, 10.0 * (u() - 0.5) * 2.0};
    if (norm(p) <= 2.1) continue; // maybe inside the hull
    for (TangentSide side : {TangentSide::Left, TangentSide::Right}) {
      auto r = tangent_from_point(p, chain, side);
      int want = side == TangentSide::Left ? 1 : -1;
      for (Point q : chain.vertices) {
        int o = orient(p, r.vertex, q);
        CHECK((o == 0 || o == want));
      }
    }
  }
}

TEST_CASE("common tangent") {
  SUBCASE("point hulls") {
    ArcHull a{{{{0, 0}, 0}}, 0}, b{{{{2, 0}, 0}}, 0};
    auto r = common_tangent(a, b);
    REQUIRE(!r.overlap);
    CHECK(dist(r.bridge.a, {0, 0}) < 1e-9);
    CHECK(dist(r.bridge.b, {2, 0}) < 1e-9);
  }
  SUBCASE("equal radii horizontal tangent") {
    ArcHull a{{{{0, 0}, 1}}, 0}, b{{{{10, 0}, 1}}, 0};
    auto r = common_tangent(a, b);
    REQUIRE(!r.overlap);
    CHECK(dist(r.bridge.a, {0, 1}) < 1e-9);
    CHECK(dist(r.bridge.b, {10, 1}) < 1e-9);
  }
  SUBCASE("unequal radii tangency residual") {
    ArcHull a{{{{0, 0}, 1}}, 0}, b{{{{4, 0}, 2}}, 0};
    auto r = common_tangent(a, b);
    REQUIRE(!r.overlap);
    CHECK(std::abs(dist(r.bridge.a, {0, 0}) - 1.0) < 1e-9);
    CHECK(std::abs(dist(r.bridge.b, {4, 0}) - 2.0) < 1e-9);
    // Tangency: bridge perpendicular to both radii.
    Point u = r.bridge.b - r.bridge.a;
    CHECK(std::abs(dot(u, r.bridge.a - Point{0, 0})) < 1e-7);
    CHECK(std::abs(dot(u, r.bridge.b - Point{4, 0})) < 1e-7);
  }
  SUBCASE("overlapping circles") {
    ArcHull a{{{{0, 0}, 2}}, 0}, b{{{{1, 0}, 2}}, 0};
    auto r = common_tangent(a, b);
    CHECK(r.overlap);
  }
}

TEST_CASE("bisector construction") {
  auto line = make_bisector({{0, 0}, 0}, {{2, 0}, 0});
  CHECK(line.kind == BisectorKind::Line);
  CHECK(std::abs(line.origin.x - 1.0) < 1e-12);

  auto hyp = make_bisector({{0, 0}, 0}, {{2, 0}, 1});
  CHECK(hyp.kind == BisectorKind::HyperbolaBranch);
  CHECK(std::abs(hyp.origin.x - 1.5) < 1e-12);

  CHECK_THROWS_WITH_AS(make_bisector({{0, 0}, 0}, {{2, 0}, 3}), "empty bisector",
                       std::domain_error);
}

TEST_CASE("bisector equidistance at sampled points") {
  std::mt19937_64 rng(3);
  auto u = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  for (int trial = 0; trial < 50; ++trial) {
    WeightedSite a{{u() * 10, u() * 10}, u() * 2};
    WeightedSite b{{u() * 10, u() * 10}, u() * 2};
    double D = dist(a.center, b.center);
    if (D < 1e-6 || std::abs(b.weight - a.weight) >= D - 1e-6) continue;
    auto bis = make_bisector(a, b);
    for (int i = 0; i < 100; ++i) {
      // Intersect with random segments through the area; every reported
      // intersection must be equidistant.
      Segment seg{{u() * 20 - 5, u() * 20 - 5}, {u() * 20 - 5, u() * 20 - 5}};
      auto p = intersect_bisector_segment(bis, seg);
      if (p) CHECK(std::abs(bis.residual(*p)) < kEpsGeom);
    }
  }
}

TEST_CASE("bisector segment intersection") {
  auto line = make_bisector({{0, 0}, 0}, {{2, 0}, 0});
  auto p = intersect_bisector_segment(line, {{0, 2}, {3, 2}});
  REQUIRE(p);
  CHECK(dist(*p, {1, 2}) < 1e-9);

  auto hyp = make_bisector({{0, 0}, 0}, {{2, 0}, 1});
  auto q = intersect_bisector_segment(hyp, {{1.5, -1}, {1.5, 1}});
  REQUIRE(q);
  CHECK(dist(*q, {1.5, 0}) < 1e-9);

  CHECK(!intersect_bisector_segment(line, {{2, 0}, {3, 0}}));
}

TEST_CASE("strike distance") {
  CHECK(strike_distance({{0, 0}, 0}, Point{3, 4}) == doctest::Approx(5.0));
  CHECK(strike_distance({{0, 0}, 2}, Segment{{5, -1}, {5, 1}}) == doctest::Approx(7.0));
  CHECK(strike_distance({{1, 1}, 0.5}, Segment{{4, 0}, {4, 8}}) == doctest::Approx(3.5));
}

TEST_CASE("convex chain perimeter") {
  ConvexChain chain{{{0, 0}, {1, 0}, {1.5, 0.5}}, true};
  CHECK(chain.perimeter(0, 1) == doctest::Approx(1.0));
  CHECK(chain.perimeter(0, 2) == doctest::Approx(1.0 + std::sqrt(0.5)));
  CHECK(chain.perimeter(1, 1) == doctest::Approx(0.0));
}
