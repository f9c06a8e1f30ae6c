#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "wavepath/predicates.hpp"

namespace wavepath {

// Global absolute tolerance for metric computations, in plane units.
// Instances are normalized to a bounding box of diameter <= 1000 so an
// absolute tolerance is meaningful everywhere.
inline constexpr double kEpsGeom = 1e-9;

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
  friend Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
  friend Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
  friend bool operator==(Point a, Point b) { return a.x == b.x && a.y == b.y; }
};

inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point a) { return std::hypot(a.x, a.y); }
inline double dist(Point a, Point b) { return norm(a - b); }
inline Point perp(Point a) { return {-a.y, a.x}; }
inline Point normalized(Point a) {
  double n = norm(a);
  return n > 0.0 ? Point{a.x / n, a.y / n} : a;
}

inline int orient(Point a, Point b, Point c) {
  return orient(a.x, a.y, b.x, b.y, c.x, c.y);
}

struct Segment {
  Point a, b;
  bool degenerate() const { return a == b; }
  double length() const { return dist(a, b); }
};

// Distance from point p to segment s.
double point_segment_distance(Point p, const Segment& s);
// Closest point on segment s to p.
Point closest_point_on_segment(Point p, const Segment& s);

// True if segments pq and rs share an interior point (proper crossing).
bool segments_properly_intersect(Point p, Point q, Point r, Point s);
// True if point c lies on the closed segment ab (exact, via orient).
bool point_on_segment(Point c, Point a, Point b);

// A circular-arc wavefront site: all points at distance (d - weight) from
// center belong to the wavefront at global radius d.
struct WeightedSite {
  Point center;
  double weight = 0.0; // shortest distance from the source to center
};

enum class BisectorKind { Line, HyperbolaBranch };

// Additively weighted bisector (I-curve) between two wavefront sites:
// the locus of p with left.weight + |p-left.center| ==
// right.weight + |p-right.center|.
struct Bisector {
  WeightedSite left, right;
  BisectorKind kind = BisectorKind::Line;
  // Point where the curve crosses the segment joining the two centers;
  // the curve parameter grows moving away from this origin.
  Point origin;

  // Signed weighted-distance residual at p (zero on the curve).
  double residual(Point p) const {
    return (left.weight + dist(p, left.center)) -
           (right.weight + dist(p, right.center));
  }
};

struct ConvexChain {
  std::vector<Point> vertices;
  bool ccw = true;

  std::size_t size() const { return vertices.size(); }
  // Sum of edge lengths from vertex i to vertex j (i <= j).
  double perimeter(std::size_t i, std::size_t j) const;
};

enum class TangentSide { Left, Right };

struct TangentResult {
  std::size_t vertex_index;
  Point vertex;
};

// Tangent from an exterior point p to a convex chain: returns the chain
// vertex v such that all chain vertices lie on one closed side of line
// p-v. Side selects which of the two tangents. Throws std::domain_error
// when p is inside the hull of the chain.
TangentResult tangent_from_point(Point p, const ConvexChain& chain, TangentSide side);

// A convex sequence of circles (weighted sites grown by a shared offset),
// used as one operand of a common-tangent query. A single site with zero
// radius is a point hull.
struct ArcHull {
  std::vector<WeightedSite> sites; // in convex position, in order
  double offset = 0.0;             // added to every radius

  double radius(std::size_t i) const { return sites[i].weight + offset; }
};

struct BridgeResult {
  bool overlap = false; // hulls intersect; no separating tangent
  Segment bridge;       // tangent points on the two hulls
  std::size_t support_a = 0, support_b = 0; // supporting site indices
};

// Common (outer) tangent between two expanded hulls with all sites of both
// hulls on one closed side of its supporting line. Returns overlap=true
// when the expanded hulls intersect.
BridgeResult common_tangent(const ArcHull& a, const ArcHull& b);

// Weighted bisector construction. Throws std::domain_error("empty bisector")
// when |weight difference| >= |center distance| (one site dominates).
Bisector make_bisector(const WeightedSite& a, const WeightedSite& b);

// First intersection of a bisector with a segment, "first" meaning nearest
// to the bisector origin along the curve. Tangential grazing within
// kEpsGeom counts as an intersection.
std::optional<Point> intersect_bisector_segment(const Bisector& bis, const Segment& seg);

// Minimum global wavefront radius at which the arc centered at site
// strikes the target (visibility is the caller's concern).
double strike_distance(const WeightedSite& site, Point target);
double strike_distance(const WeightedSite& site, const Segment& target);

} // namespace wavepath
