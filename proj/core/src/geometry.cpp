#include "wavepath/geometry.hpp"

#include <algorithm>
#include <cassert>

namespace wavepath {

Point closest_point_on_segment(Point p, const Segment& s) {
  Point d = s.b - s.a;
  double len2 = dot(d, d);
  if (len2 == 0.0) return s.a;
  double t = dot(p - s.a, d) / len2;
  t = std::clamp(t, 0.0, 1.0);
  return s.a + t * d;
}

double point_segment_distance(Point p, const Segment& s) {
  return dist(p, closest_point_on_segment(p, s));
}

bool point_on_segment(Point c, Point a, Point b) {
  if (orient(a, b, c) != 0) return false;
  return std::min(a.x, b.x) <= c.x && c.x <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= c.y && c.y <= std::max(a.y, b.y);
}

bool segments_properly_intersect(Point p, Point q, Point r, Point s) {
  int o1 = orient(p, q, r);
  int o2 = orient(p, q, s);
  int o3 = orient(r, s, p);
  int o4 = orient(r, s, q);
  return o1 * o2 < 0 && o3 * o4 < 0;
}

double ConvexChain::perimeter(std::size_t i, std::size_t j) const {
  assert(i <= j && j < vertices.size());
  double total = 0.0;
  for (std::size_t k = i; k < j; ++k) total += dist(vertices[k], vertices[k + 1]);
  return total;
}

TangentResult tangent_from_point(Point p, const ConvexChain& chain, TangentSide side) {
  const auto& v = chain.vertices;
  if (v.empty()) throw std::domain_error("empty chain");
  int want = side == TangentSide::Left ? 1 : -1;

  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == p) continue;
    bool ok = true;
    for (std::size_t j = 0; j < v.size() && ok; ++j) {
      if (j == i) continue;
      int o = orient(p, v[i], v[j]);
      if (o != 0 && o != want) ok = false;
    }
    if (!ok) continue;
    if (!best || dist(p, v[i]) < dist(p, v[*best])) best = i;
  }
  if (!best) throw std::domain_error("no tangent");
  return {*best, v[*best]};
}

namespace {

// Outer tangent of two circles with both circles on the right of the
// directed line from the tangent point on a to the tangent point on b.
// Fails (returns nullopt) when one circle is nested in the other.
std::optional<Segment> circle_outer_tangent(Point ca, double ra, Point cb, double rb) {
  Point dvec = cb - ca;
  double D = norm(dvec);
  if (D == 0.0) return std::nullopt;
  double alpha = (ra - rb) / D;
  if (std::abs(alpha) > 1.0) return std::nullopt;
  double beta = std::sqrt(std::max(0.0, 1.0 - alpha * alpha));
  Point e = {dvec.x / D, dvec.y / D};
  Point f = perp(e);
  // Left normal nl with nl . dvec = ra - rb and tangent direction from a to b.
  Point nl = {alpha * e.x + beta * f.x, alpha * e.y + beta * f.y};
  Point pa = ca + ra * nl;
  Point pb = cb + rb * nl;
  return Segment{pa, pb};
}

} // namespace

BridgeResult common_tangent(const ArcHull& a, const ArcHull& b) {
  BridgeResult res;
  if (a.sites.empty() || b.sites.empty()) {
    res.overlap = true;
    return res;
  }

  // Disc-pair penetration between the hulls (an outer tangent can still
  // exist for overlapping, non-nested hulls, so convergence alone is not
  // an intersection test).
  for (std::size_t i = 0; i < a.sites.size(); ++i)
    for (std::size_t j = 0; j < b.sites.size(); ++j)
      if (dist(a.sites[i].center, b.sites[j].center) < a.radius(i) + b.radius(j)) {
        res.overlap = true;
        return res;
      }

  auto support_max = [](const ArcHull& h, Point nl) {
    std::size_t best = 0;
    double bestv = dot(nl, h.sites[0].center) + h.radius(0);
    for (std::size_t i = 1; i < h.sites.size(); ++i) {
      double v = dot(nl, h.sites[i].center) + h.radius(i);
      if (v > bestv + 1e-15) {
        bestv = v;
        best = i;
      }
    }
    return best;
  };

  std::size_t ia = 0, ib = 0;
  int max_iter = static_cast<int>(4 * (a.sites.size() + b.sites.size()) + 16);
  Segment tangent{};
  bool converged = false;
  for (int it = 0; it < max_iter; ++it) {
    auto t = circle_outer_tangent(a.sites[ia].center, a.radius(ia),
                                  b.sites[ib].center, b.radius(ib));
    if (!t) {
      res.overlap = true;
      return res;
    }
    tangent = *t;
    Point u = normalized(tangent.b - tangent.a);
    Point nl = perp(u);
    double c = dot(nl, tangent.a);

    std::size_t na = support_max(a, nl);
    std::size_t nb = support_max(b, nl);
    double va = dot(nl, a.sites[na].center) + a.radius(na);
    double vb = dot(nl, b.sites[nb].center) + b.radius(nb);
    bool moved = false;
    if (va > c + kEpsGeom && na != ia) {
      ia = na;
      moved = true;
    }
    if (vb > c + kEpsGeom && nb != ib) {
      ib = nb;
      moved = true;
    }
    if (!moved) {
      // No site above the supporting line: done, unless tangency is
      // violated (degenerate overlap).
      if (va > c + 1e-6 || vb > c + 1e-6) {
        res.overlap = true;
        return res;
      }
      converged = true;
      break;
    }
  }
  if (!converged) {
    res.overlap = true;
    return res;
  }
  res.bridge = tangent;
  res.support_a = ia;
  res.support_b = ib;
  return res;
}

Bisector make_bisector(const WeightedSite& a, const WeightedSite& b) {
  double D = dist(a.center, b.center);
  if (D == 0.0) throw std::domain_error("coincident centers");
  double delta = b.weight - a.weight; // |p-a| - |p-b| on the curve
  if (std::abs(delta) >= D) throw std::domain_error("empty bisector");

  Bisector bis;
  bis.left = a;
  bis.right = b;
  bis.kind = delta == 0.0 ? BisectorKind::Line : BisectorKind::HyperbolaBranch;
  double t = (delta + D) / (2.0 * D);
  bis.origin = a.center + t * (b.center - a.center);
  return bis;
}

std::optional<Point> intersect_bisector_segment(const Bisector& bis, const Segment& seg) {
  constexpr int kSamples = 256;
  Point d = seg.b - seg.a;

  auto eval = [&](double t) { return bis.residual(seg.a + t * d); };

  std::vector<double> roots;

  double prev = eval(0.0);
  double prev_t = 0.0;
  for (int i = 1; i <= kSamples; ++i) {
    double t = static_cast<double>(i) / kSamples;
    double f = eval(t);
    if ((prev <= 0.0 && f >= 0.0) || (prev >= 0.0 && f <= 0.0)) {
      // Bracketed root: bisection.
      double lo = prev_t, hi = t, flo = prev;
      for (int it = 0; it < 80; ++it) {
        double mid = 0.5 * (lo + hi);
        double fm = eval(mid);
        if ((flo <= 0.0 && fm >= 0.0) || (flo >= 0.0 && fm <= 0.0)) {
          hi = mid;
        } else {
          lo = mid;
          flo = fm;
        }
      }
      roots.push_back(0.5 * (lo + hi));
    }
    prev = f;
    prev_t = t;
  }

  if (roots.empty()) {
    // Tangential grazing: locate the minimum of |f| and accept it when
    // within tolerance.
    double best_t = 0.0, best = std::abs(eval(0.0));
    for (int i = 1; i <= kSamples; ++i) {
      double t = static_cast<double>(i) / kSamples;
      double f = std::abs(eval(t));
      if (f < best) {
        best = f;
        best_t = t;
      }
    }
    double lo = std::max(0.0, best_t - 1.0 / kSamples);
    double hi = std::min(1.0, best_t + 1.0 / kSamples);
    for (int it = 0; it < 120; ++it) {
      double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
      if (std::abs(eval(m1)) < std::abs(eval(m2)))
        hi = m2;
      else
        lo = m1;
    }
    double t = 0.5 * (lo + hi);
    if (std::abs(eval(t)) < kEpsGeom) roots.push_back(t);
  }

  if (roots.empty()) return std::nullopt;

  // First along the curve == nearest to the curve origin (distance from
  // the origin is monotone along each arm of the branch).
  Point best_p = seg.a + roots[0] * d;
  double best_d = dist(best_p, bis.origin);
  for (std::size_t i = 1; i < roots.size(); ++i) {
    Point p = seg.a + roots[i] * d;
    double dd = dist(p, bis.origin);
    if (dd < best_d) {
      best_d = dd;
      best_p = p;
    }
  }
  return best_p;
}

double strike_distance(const WeightedSite& site, Point target) {
  return site.weight + dist(site.center, target);
}

double strike_distance(const WeightedSite& site, const Segment& target) {
  return site.weight + point_segment_distance(site.center, target);
}

} // namespace wavepath
