#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "wavepath/geometry.hpp"

namespace wavepath {

// A polygonal domain: ccw outer boundary, cw holes, and the two query
// points. Free space is the closed region inside outer minus the open
// hole interiors.
struct Instance {
  std::vector<Point> outer;
  std::vector<std::vector<Point>> holes;
  Point s, t;

  std::size_t vertex_count() const {
    std::size_t n = outer.size();
    for (const auto& h : holes) n += h.size();
    return n;
  }
  std::size_t hole_count() const { return holes.size(); }
};

struct TraceRecord {
  int type = 0;    // event class 1..4
  double d = 0.0;  // wavefront radius at which the event fired
  std::string detail;
};

struct PathResult {
  double distance = 0.0;
  std::vector<Point> path; // from s to t
  std::map<std::string, std::uint64_t> counters;
  std::vector<TraceRecord> trace;
};

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Point-in-polygon (closed): boundary counts as inside.
bool point_in_polygon(Point p, const std::vector<Point>& poly);
bool point_on_polygon_boundary(Point p, const std::vector<Point>& poly);
double polygon_signed_area(const std::vector<Point>& poly);
bool polygon_is_simple(const std::vector<Point>& poly);

// True if p lies in the free space of inst (inside outer, not in any open
// hole interior).
bool in_free_space(const Instance& inst, Point p);

// Checks all Instance invariants; throws ValidationError naming the first
// violated one.
void validate_instance(const Instance& inst);

// Parses the JSON instance format, normalizes orientations (outer ccw,
// holes cw), rescales about the bbox center when the bbox diameter
// exceeds 1000, and validates. Throws ParseError or ValidationError.
Instance parse_instance(const std::string& text);

std::string serialize_instance(const Instance& inst);

std::string serialize_result(const PathResult& r);

// Deterministic random instance: m convex k-gon holes inside a fixed
// square outer boundary, s and t in free space, minimum feature
// separation 2e-3. Throws std::runtime_error("could not place") when
// rejection sampling fails.
Instance random_instance(std::uint64_t seed, std::size_t m, std::size_t k);

} // namespace wavepath
