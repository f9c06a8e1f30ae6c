#include "wavepath/instance.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"

namespace wavepath {

double polygon_signed_area(const std::vector<Point>& poly) {
  double a = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    Point p = poly[i], q = poly[(i + 1) % poly.size()];
    a += cross(p, q);
  }
  return 0.5 * a;
}

bool point_on_polygon_boundary(Point p, const std::vector<Point>& poly) {
  for (std::size_t i = 0; i < poly.size(); ++i) {
    Point a = poly[i], b = poly[(i + 1) % poly.size()];
    if (point_on_segment(p, a, b)) return true;
  }
  return false;
}

bool point_in_polygon(Point p, const std::vector<Point>& poly) {
  if (point_on_polygon_boundary(p, poly)) return true;
  // Crossing number with exact orientation tests on the edge endpoints.
  bool inside = false;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    Point a = poly[i], b = poly[(i + 1) % poly.size()];
    if ((a.y > p.y) != (b.y > p.y)) {
      int o = orient(a, b, p);
      if (b.y > a.y ? o > 0 : o < 0) inside = !inside;
    }
  }
  return inside;
}

bool polygon_is_simple(const std::vector<Point>& poly) {
  std::size_t n = poly.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    Point a = poly[i], b = poly[(i + 1) % n];
    if (a == b) return false;
    for (std::size_t j = i + 1; j < n; ++j) {
      Point c = poly[j], d = poly[(j + 1) % n];
      bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
      if (adjacent) {
        // Edges sharing vertex v may only touch at v: the outer endpoints
        // must not fold back onto the same ray.
        Point v = (j == i + 1) ? b : a;
        Point u = (j == i + 1) ? a : b;
        Point w = (j == i + 1) ? d : c;
        if (orient(u, v, w) == 0 && dot(u - v, w - v) > 0.0) return false;
        continue;
      }
      if (segments_properly_intersect(a, b, c, d)) return false;
      if (point_on_segment(c, a, b) || point_on_segment(d, a, b) ||
          point_on_segment(a, c, d) || point_on_segment(b, c, d))
        return false;
    }
  }
  return true;
}

namespace {

bool polygons_disjoint(const std::vector<Point>& p, const std::vector<Point>& q) {
  for (std::size_t i = 0; i < p.size(); ++i) {
    Point a = p[i], b = p[(i + 1) % p.size()];
    for (std::size_t j = 0; j < q.size(); ++j) {
      Point c = q[j], d = q[(j + 1) % q.size()];
      if (segments_properly_intersect(a, b, c, d)) return false;
      if (point_on_segment(c, a, b) || point_on_segment(a, c, d)) return false;
    }
  }
  // No edge contact: containment either way means overlap.
  if (point_in_polygon(p[0], q) || point_in_polygon(q[0], p)) return false;
  return true;
}

bool polygon_strictly_inside(const std::vector<Point>& inner, const std::vector<Point>& outer) {
  for (std::size_t i = 0; i < inner.size(); ++i) {
    Point a = inner[i], b = inner[(i + 1) % inner.size()];
    if (!point_in_polygon(a, outer) || point_on_polygon_boundary(a, outer)) return false;
    for (std::size_t j = 0; j < outer.size(); ++j) {
      Point c = outer[j], d = outer[(j + 1) % outer.size()];
      if (segments_properly_intersect(a, b, c, d)) return false;
    }
  }
  return true;
}

} // namespace

bool in_free_space(const Instance& inst, Point p) {
  if (!point_in_polygon(p, inst.outer)) return false;
  for (const auto& h : inst.holes) {
    if (point_in_polygon(p, h) && !point_on_polygon_boundary(p, h)) return false;
  }
  return true;
}

void validate_instance(const Instance& inst) {
  if (inst.outer.size() < 3) throw ValidationError("outer has fewer than 3 vertices");
  if (!polygon_is_simple(inst.outer)) throw ValidationError("outer not simple");
  if (polygon_signed_area(inst.outer) <= 0.0) throw ValidationError("outer not ccw");
  for (std::size_t i = 0; i < inst.holes.size(); ++i) {
    const auto& h = inst.holes[i];
    if (h.size() < 3) throw ValidationError("hole has fewer than 3 vertices");
    if (!polygon_is_simple(h)) throw ValidationError("hole not simple");
    if (polygon_signed_area(h) >= 0.0) throw ValidationError("hole not cw");
    if (!polygon_strictly_inside(h, inst.outer)) throw ValidationError("hole not inside outer");
  }
  for (std::size_t i = 0; i < inst.holes.size(); ++i)
    for (std::size_t j = i + 1; j < inst.holes.size(); ++j)
      if (!polygons_disjoint(inst.holes[i], inst.holes[j]))
        throw ValidationError("holes intersect");
  if (!in_free_space(inst, inst.s)) throw ValidationError("source not in free space");
  if (!in_free_space(inst, inst.t)) throw ValidationError("target not in free space");
}

namespace {

using nlohmann::ordered_json;

Point parse_point(const ordered_json& j, const char* what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ParseError(std::string(what) + ": expected [x, y]");
  return {j[0].get<double>(), j[1].get<double>()};
}

std::vector<Point> parse_ring(const ordered_json& j, const char* what) {
  if (!j.is_array()) throw ParseError(std::string(what) + ": expected array of points");
  std::vector<Point> ring;
  ring.reserve(j.size());
  for (const auto& pj : j) ring.push_back(parse_point(pj, what));
  return ring;
}

ordered_json point_json(Point p) { return ordered_json::array({p.x, p.y}); }

ordered_json ring_json(const std::vector<Point>& ring) {
  ordered_json j = ordered_json::array();
  for (Point p : ring) j.push_back(point_json(p));
  return j;
}

} // namespace

Instance parse_instance(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const ordered_json::parse_error& e) {
    throw ParseError(e.what());
  }
  if (!j.is_object()) throw ParseError("expected a JSON object");
  for (const char* key : {"outer", "s", "t"})
    if (!j.contains(key)) throw ParseError(std::string("missing field: ") + key);

  Instance inst;
  inst.outer = parse_ring(j["outer"], "outer");
  if (j.contains("holes")) {
    if (!j["holes"].is_array()) throw ParseError("holes: expected array");
    for (const auto& hj : j["holes"]) inst.holes.push_back(parse_ring(hj, "hole"));
  }
  inst.s = parse_point(j["s"], "s");
  inst.t = parse_point(j["t"], "t");

  // Orientation is normalized on load.
  if (polygon_signed_area(inst.outer) < 0.0)
    std::reverse(inst.outer.begin(), inst.outer.end());
  for (auto& h : inst.holes)
    if (polygon_signed_area(h) > 0.0) std::reverse(h.begin(), h.end());

  // Rescale about the bbox center only when the diameter exceeds 1000, so
  // already-normalized instances survive a round trip unchanged.
  double xmin = inst.outer[0].x, xmax = xmin, ymin = inst.outer[0].y, ymax = ymin;
  for (Point p : inst.outer) {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  double diam = std::hypot(xmax - xmin, ymax - ymin);
  if (diam > 1000.0) {
    double scale = 1000.0 / diam;
    Point center{0.5 * (xmin + xmax), 0.5 * (ymin + ymax)};
    auto rescale = [&](Point p) { return center + scale * (p - center); };
    for (auto& p : inst.outer) p = rescale(p);
    for (auto& h : inst.holes)
      for (auto& p : h) p = rescale(p);
    inst.s = rescale(inst.s);
    inst.t = rescale(inst.t);
  }

  validate_instance(inst);
  return inst;
}

std::string serialize_instance(const Instance& inst) {
  ordered_json j;
  j["outer"] = ring_json(inst.outer);
  j["holes"] = ordered_json::array();
  for (const auto& h : inst.holes) j["holes"].push_back(ring_json(h));
  j["s"] = point_json(inst.s);
  j["t"] = point_json(inst.t);
  return j.dump();
}

std::string serialize_result(const PathResult& r) {
  ordered_json j;
  j["distance"] = r.distance;
  j["path"] = ring_json(r.path);
  ordered_json counters = ordered_json::object();
  for (const auto& [k, v] : r.counters) counters[k] = v;
  j["counters"] = counters;
  return j.dump();
}

} // namespace wavepath
