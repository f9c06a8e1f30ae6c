#include "wavepath/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace wavepath {
namespace {

void each_obstacle_edge(const Instance& inst, auto&& f) {
  for (std::size_t i = 0; i < inst.outer.size(); ++i)
    f(inst.outer[i], inst.outer[(i + 1) % inst.outer.size()]);
  for (const auto& h : inst.holes)
    for (std::size_t i = 0; i < h.size(); ++i) f(h[i], h[(i + 1) % h.size()]);
}

// Strictly interior to some hole, or outside outer: blocked. Midpoints of
// along-edge subsegments drift off the boundary line by an ulp, so the
// boundary test carries a metric tolerance.
bool near_boundary(Point p, const std::vector<Point>& poly) {
  for (std::size_t i = 0; i < poly.size(); ++i) {
    Point q = closest_point_on_segment(p, {poly[i], poly[(i + 1) % poly.size()]});
    if (dist(p, q) <= kEpsGeom) return true;
  }
  return false;
}

bool point_blocked(const Instance& inst, Point p) {
  if (!point_in_polygon(p, inst.outer) && !near_boundary(p, inst.outer)) return true;
  for (const auto& h : inst.holes)
    if (point_in_polygon(p, h) && !near_boundary(p, h)) return true;
  return false;
}

} // namespace

bool segment_visible(const Instance& inst, Point u, Point v) {
  if (u == v) return true;
  bool blocked = false;
  std::vector<double> cuts{0.0, 1.0};
  Point d = v - u;
  double len2 = dot(d, d);
  each_obstacle_edge(inst, [&](Point a, Point b) {
    if (blocked) return;
    if (segments_properly_intersect(u, v, a, b)) {
      blocked = true;
      return;
    }
    // Touch points (shared endpoints, vertices on the segment) partition
    // uv; the interior of each part is tested against the free space.
    for (Point q : {a, b}) {
      if (point_on_segment(q, u, v)) cuts.push_back(dot(q - u, d) / len2);
    }
    if (point_on_segment(u, a, b)) cuts.push_back(0.0);
    if (point_on_segment(v, a, b)) cuts.push_back(1.0);
  });
  if (blocked) return false;
  std::sort(cuts.begin(), cuts.end());
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] - cuts[i] < 1e-14) continue;
    Point mid = u + (0.5 * (cuts[i] + cuts[i + 1])) * d;
    if (point_blocked(inst, mid)) return false;
  }
  return true;
}

VisGraph visibility_graph(const Instance& inst) {
  VisGraph g;
  for (Point p : inst.outer) g.nodes.push_back(p);
  for (const auto& h : inst.holes)
    for (Point p : h) g.nodes.push_back(p);
  g.s_node = static_cast<int>(g.nodes.size());
  g.nodes.push_back(inst.s);
  g.t_node = static_cast<int>(g.nodes.size());
  g.nodes.push_back(inst.t);

  g.adj.resize(g.nodes.size());
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    for (std::size_t j = i + 1; j < g.nodes.size(); ++j) {
      if (g.nodes[i] == g.nodes[j]) {
        g.adj[i].push_back({static_cast<int>(j), 0.0});
        g.adj[j].push_back({static_cast<int>(i), 0.0});
        continue;
      }
      if (!segment_visible(inst, g.nodes[i], g.nodes[j])) continue;
      double w = dist(g.nodes[i], g.nodes[j]);
      g.adj[i].push_back({static_cast<int>(j), w});
      g.adj[j].push_back({static_cast<int>(i), w});
    }
  }
  return g;
}

PathResult oracle_distance(const Instance& inst) {
  VisGraph g = visibility_graph(inst);
  std::size_t n = g.nodes.size();
  std::vector<double> distv(n, std::numeric_limits<double>::infinity());
  std::vector<int> pred(n, -1);
  std::vector<bool> done(n, false);

  using QE = std::pair<double, int>;
  std::priority_queue<QE, std::vector<QE>, std::greater<>> pq;
  distv[g.s_node] = 0.0;
  pq.push({0.0, g.s_node});
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (done[u]) continue;
    done[u] = true;
    for (auto [v, w] : g.adj[u]) {
      double nd = d + w;
      if (nd < distv[v] || (nd == distv[v] && pred[v] >= 0 && u < pred[v])) {
        distv[v] = nd;
        pred[v] = u;
        pq.push({nd, v});
      }
    }
  }
  if (!done[g.t_node]) throw DisconnectedError();

  PathResult r;
  r.distance = distv[g.t_node];
  for (int v = g.t_node; v != -1; v = pred[v]) r.path.push_back(g.nodes[v]);
  std::reverse(r.path.begin(), r.path.end());
  // Collapse coincident consecutive vertices (zero-weight node merges).
  r.path.erase(std::unique(r.path.begin(), r.path.end(),
                           [](Point a, Point b) { return a == b; }),
               r.path.end());
  return r;
}

} // namespace wavepath
