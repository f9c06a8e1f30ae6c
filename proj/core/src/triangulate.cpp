#include "wavepath/triangulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <list>
#include <map>
#include <set>
#include <sstream>

namespace wavepath {
namespace {

// Merges a hole cycle into the enclosing cycle through a bridge from the
// hole's max-x vertex to a mutually visible cycle vertex (ray-shooting
// plus reflex-vertex check). The merged cycle repeats the two bridge
// endpoints and stays ccw.
std::vector<int> merge_hole(const std::vector<int>& cycle, const std::vector<int>& hole,
                            const std::vector<Point>& pts) {
  // Hole vertex of maximum x (ties: maximum y).
  std::size_t mi = 0;
  for (std::size_t i = 1; i < hole.size(); ++i) {
    Point a = pts[hole[i]], b = pts[hole[mi]];
    if (a.x > b.x || (a.x == b.x && a.y > b.y)) mi = i;
  }
  Point M = pts[hole[mi]];

  // Closest intersection of the +x ray from M with cycle edges.
  double best_x = std::numeric_limits<double>::infinity();
  std::size_t best_edge = cycle.size();
  Point I{};
  for (std::size_t i = 0; i < cycle.size(); ++i) {
    Point a = pts[cycle[i]], b = pts[cycle[(i + 1) % cycle.size()]];
    if ((a.y > M.y) == (b.y > M.y) && a.y != M.y && b.y != M.y) continue;
    double ix;
    if (a.y == b.y) {
      if (a.y != M.y) continue;
      ix = std::min(a.x, b.x) >= M.x ? std::min(a.x, b.x) : std::max(a.x, b.x);
      if (ix < M.x) continue;
    } else {
      double t = (M.y - a.y) / (b.y - a.y);
      if (t < 0.0 || t > 1.0) continue;
      ix = a.x + t * (b.x - a.x);
      if (ix < M.x) continue;
    }
    if (ix < best_x) {
      best_x = ix;
      best_edge = i;
      I = {ix, M.y};
    }
  }
  if (best_edge == cycle.size()) throw std::runtime_error("hole bridge failed");

  // Candidate visible vertex: the intersected edge's endpoint of larger x,
  // unless a reflex cycle vertex lies inside triangle (M, I, P); then the
  // one closest in angle to the ray wins.
  std::size_t pi;
  {
    std::size_t e0 = best_edge, e1 = (best_edge + 1) % cycle.size();
    pi = pts[cycle[e0]].x > pts[cycle[e1]].x ? e0 : e1;
  }
  Point P = pts[cycle[pi]];
  if (!(P == I) && orient(M, I, P) != 0) {
    Point t1 = I, t2 = P;
    if (orient(M, t1, t2) < 0) std::swap(t1, t2);
    double best_metric = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < cycle.size(); ++i) {
      Point prev = pts[cycle[(i + cycle.size() - 1) % cycle.size()]];
      Point cur = pts[cycle[i]];
      Point next = pts[cycle[(i + 1) % cycle.size()]];
      if (orient(prev, cur, next) >= 0) continue; // only reflex vertices block
      if (orient(M, t1, cur) < 0 || orient(t1, t2, cur) < 0 || orient(t2, M, cur) < 0) continue;
      Point d = cur - M;
      double metric = std::abs(std::atan2(d.y, d.x)); // angle to the +x ray
      if (metric < best_metric || (metric == best_metric && dist(M, cur) < dist(M, P))) {
        best_metric = metric;
        pi = i;
        P = cur;
      }
    }
  }

  // The chosen coordinate may occur at several cycle positions (earlier
  // bridges duplicate their endpoints); splice at the copy whose interior
  // wedge contains the direction toward M, or the pinch wedges deadlock
  // the clipper.
  for (std::size_t i = 0; i < cycle.size(); ++i) {
    if (!(pts[cycle[i]] == P)) continue;
    Point a = pts[cycle[(i + cycle.size() - 1) % cycle.size()]];
    Point b = pts[cycle[(i + 1) % cycle.size()]];
    bool convex = orient(a, P, b) > 0;
    bool in_wedge = convex ? (orient(a, P, M) > 0 && orient(P, b, M) > 0)
                           : (orient(a, P, M) > 0 || orient(P, b, M) > 0);
    if (in_wedge) {
      pi = i;
      break;
    }
  }

  std::vector<int> merged;
  merged.reserve(cycle.size() + hole.size() + 2);
  for (std::size_t i = 0; i <= pi; ++i) merged.push_back(cycle[i]);
  for (std::size_t i = 0; i <= hole.size(); ++i) merged.push_back(hole[(mi + i) % hole.size()]);
  for (std::size_t i = pi; i < cycle.size(); ++i) merged.push_back(cycle[i]);
  return merged;
}

bool point_in_tri_closed(Point p, Point a, Point b, Point c) {
  return orient(a, b, p) >= 0 && orient(b, c, p) >= 0 && orient(c, a, p) >= 0;
}

// O(n^2) ear clipping of a ccw cycle (indices may repeat along bridges).
void ear_clip(std::vector<int> cycle, const std::vector<Point>& pts,
              std::vector<Triangulation::Tri>& out) {
  auto emit = [&](int a, int b, int c) {
    if (orient(pts[a], pts[b], pts[c]) > 0) out.push_back({{a, b, c}, {-1, -1, -1}});
  };

  while (cycle.size() > 3) {
    std::size_t n = cycle.size();
    bool clipped = false;
    for (std::size_t i = 0; i < n && !clipped; ++i) {
      int a = cycle[(i + n - 1) % n], b = cycle[i], c = cycle[(i + 1) % n];
      if (orient(pts[a], pts[b], pts[c]) <= 0) continue;
      bool ear = true;
      for (std::size_t j = 0; j < n && ear; ++j) {
        int q = cycle[j];
        if (q == a || q == b || q == c) continue;
        if (point_in_tri_closed(pts[q], pts[a], pts[b], pts[c])) ear = false;
      }
      if (!ear) continue;
      emit(a, b, c);
      cycle.erase(cycle.begin() + static_cast<std::ptrdiff_t>(i));
      clipped = true;
    }
    if (!clipped) {
      // Only degenerate (collinear) corners remain somewhere: drop one
      // zero-area ear and keep going.
      for (std::size_t i = 0; i < n; ++i) {
        int a = cycle[(i + n - 1) % n], b = cycle[i], c = cycle[(i + 1) % n];
        if (orient(pts[a], pts[b], pts[c]) == 0) {
          cycle.erase(cycle.begin() + static_cast<std::ptrdiff_t>(i));
          clipped = true;
          break;
        }
      }
      if (!clipped) throw std::runtime_error("ear clipping stuck");
    }
  }
  if (cycle.size() == 3) emit(cycle[0], cycle[1], cycle[2]);
}

void rebuild_adjacency(Triangulation& tri) {
  std::map<std::pair<int, int>, std::vector<std::pair<int, int>>> edges; // edge -> (tri, slot)
  for (std::size_t ti = 0; ti < tri.triangles.size(); ++ti) {
    auto& t = tri.triangles[ti];
    t.nbr = {-1, -1, -1};
    for (int e = 0; e < 3; ++e) {
      int a = t.v[e], b = t.v[(e + 1) % 3];
      edges[{std::min(a, b), std::max(a, b)}].push_back({static_cast<int>(ti), e});
    }
  }
  for (const auto& [edge, users] : edges) {
    if (users.size() == 2) {
      tri.triangles[users[0].first].nbr[users[0].second] = users[1].first;
      tri.triangles[users[1].first].nbr[users[1].second] = users[0].first;
    } else if (users.size() > 2) {
      throw std::runtime_error("non-manifold edge");
    }
  }
}

// Inserts p as a vertex: splits the containing triangle into three, or the
// one/two triangles sharing an edge into two/four when p lies on an edge.
// Returns the vertex index (an existing index if p coincides).
int insert_site(Triangulation& tri, Point p) {
  for (std::size_t i = 0; i < tri.vertices.size(); ++i)
    if (tri.vertices[i] == p) return static_cast<int>(i);

  int ti = locate(tri, p);
  auto t = tri.triangles[ti];
  int pi = static_cast<int>(tri.vertices.size());
  tri.vertices.push_back(p);

  int on_edge = -1;
  for (int e = 0; e < 3; ++e)
    if (orient(tri.vertices[t.v[e]], tri.vertices[t.v[(e + 1) % 3]], p) == 0) on_edge = e;

  if (on_edge < 0) {
    tri.triangles[ti].v = {t.v[0], t.v[1], pi};
    tri.triangles.push_back({{t.v[1], t.v[2], pi}, {-1, -1, -1}});
    tri.triangles.push_back({{t.v[2], t.v[0], pi}, {-1, -1, -1}});
  } else {
    int a = t.v[on_edge], b = t.v[(on_edge + 1) % 3], c = t.v[(on_edge + 2) % 3];
    tri.triangles[ti].v = {a, pi, c};
    tri.triangles.push_back({{pi, b, c}, {-1, -1, -1}});
    int nb = t.nbr[on_edge];
    if (nb >= 0) {
      auto u = tri.triangles[nb];
      int e2 = 0;
      while (!(u.v[e2] == b && u.v[(e2 + 1) % 3] == a)) ++e2;
      int d = u.v[(e2 + 2) % 3];
      tri.triangles[nb].v = {b, pi, d};
      tri.triangles.push_back({{pi, a, d}, {-1, -1, -1}});
    }
    if (tri.is_constrained(a, b)) {
      tri.constrained.erase({std::min(a, b), std::max(a, b)});
      tri.constrained.insert({std::min(a, pi), std::max(a, pi)});
      tri.constrained.insert({std::min(b, pi), std::max(b, pi)});
    }
  }
  rebuild_adjacency(tri);
  return pi;
}

int vertex_degree(const Triangulation& tri, int v) {
  // Incident triangles == incident edges for an interior vertex.
  int d = 0;
  for (const auto& t : tri.triangles) d += (t.v[0] == v || t.v[1] == v || t.v[2] == v);
  return d;
}

// Flips the diagonal (v, u) of the quad formed by its two incident
// triangles. Fails when the edge is constrained, boundary, the quad is not
// strictly convex, or the created edge would touch `forbid`.
bool try_flip(Triangulation& tri, int v, int u, int forbid) {
  if (tri.is_constrained(v, u)) return false;
  int t1 = -1, e1 = -1, t2 = -1, e2 = -1;
  for (std::size_t i = 0; i < tri.triangles.size(); ++i) {
    const auto& t = tri.triangles[i];
    for (int e = 0; e < 3; ++e) {
      if (t.v[e] == v && t.v[(e + 1) % 3] == u) t1 = static_cast<int>(i), e1 = e;
      if (t.v[e] == u && t.v[(e + 1) % 3] == v) t2 = static_cast<int>(i), e2 = e;
    }
  }
  if (t1 < 0 || t2 < 0) return false;
  int a = tri.triangles[t1].v[(e1 + 2) % 3];
  int b = tri.triangles[t2].v[(e2 + 2) % 3];
  if (a == forbid || b == forbid) return false;
  const auto& P = tri.vertices;
  if (orient(P[a], P[v], P[b]) <= 0 || orient(P[b], P[u], P[a]) <= 0) return false;
  tri.triangles[t1].v = {v, b, a};
  tri.triangles[t2].v = {u, a, b};
  rebuild_adjacency(tri);
  return true;
}

// Flips incident edges until the interior site has degree three, so its
// triangle fan collapses into a degree-3 dual node. A flip joins two
// neighbours of the site, so once the sites are not adjacent reducing one
// never grows the other.
void reduce_site_degree(Triangulation& tri, int site, int other) {
  for (const auto& t : tri.triangles)
    for (int e = 0; e < 3; ++e)
      if (t.v[e] == site && tri.is_constrained(t.v[e], t.v[(e + 1) % 3]))
        return; // site merged with a boundary vertex, leave it alone
  for (int guard = 0; guard < 64 && vertex_degree(tri, site) > 3; ++guard) {
    std::set<int> nbrs;
    for (const auto& t : tri.triangles)
      for (int e = 0; e < 3; ++e)
        if (t.v[e] == site) nbrs.insert(t.v[(e + 1) % 3]), nbrs.insert(t.v[(e + 2) % 3]);
    nbrs.erase(site);
    bool done = false;
    for (int forbid : {other, -1}) {
      for (int u : nbrs)
        if (try_flip(tri, site, u, forbid)) {
          done = true;
          break;
        }
      if (done) break;
    }
    if (!done) return;
  }
}

} // namespace

int locate(const Triangulation& tri, Point p) {
  for (std::size_t i = 0; i < tri.triangles.size(); ++i) {
    const auto& t = tri.triangles[i];
    if (point_in_tri_closed(p, tri.vertices[t.v[0]], tri.vertices[t.v[1]],
                            tri.vertices[t.v[2]]))
      return static_cast<int>(i);
  }
  throw std::runtime_error("point outside free space");
}

Triangulation triangulate(const Instance& inst, bool insert_sites) {
  Triangulation tri;
  std::vector<int> outer_cycle;
  for (Point p : inst.outer) {
    outer_cycle.push_back(static_cast<int>(tri.vertices.size()));
    tri.vertices.push_back(p);
  }
  std::vector<std::vector<int>> hole_cycles;
  for (const auto& h : inst.holes) {
    std::vector<int> hc;
    for (Point p : h) {
      hc.push_back(static_cast<int>(tri.vertices.size()));
      tri.vertices.push_back(p);
    }
    hole_cycles.push_back(std::move(hc));
  }

  auto mark_ring = [&](const std::vector<int>& ring) {
    for (std::size_t i = 0; i < ring.size(); ++i) {
      int a = ring[i], b = ring[(i + 1) % ring.size()];
      tri.constrained.insert({std::min(a, b), std::max(a, b)});
    }
  };
  mark_ring(outer_cycle);
  for (const auto& hc : hole_cycles) mark_ring(hc);

  // Bridge holes in from the rightmost first.
  std::stable_sort(hole_cycles.begin(), hole_cycles.end(),
                   [&](const std::vector<int>& a, const std::vector<int>& b) {
                     auto maxx = [&](const std::vector<int>& h) {
                       double v = -std::numeric_limits<double>::infinity();
                       for (int i : h) v = std::max(v, tri.vertices[i].x);
                       return v;
                     };
                     return maxx(a) > maxx(b);
                   });
  std::vector<int> cycle = outer_cycle;
  for (const auto& hc : hole_cycles) cycle = merge_hole(cycle, hc, tri.vertices);

  ear_clip(cycle, tri.vertices, tri.triangles);
  rebuild_adjacency(tri);

  if (insert_sites) {
    tri.s_index = insert_site(tri, inst.s);
    tri.t_index = insert_site(tri, inst.t);
    if (tri.s_index != tri.t_index) {
      for (int round = 0; round < 8; ++round) {
        bool s_hi = vertex_degree(tri, tri.s_index) > 3;
        bool t_hi = vertex_degree(tri, tri.t_index) > 3;
        if (!s_hi && !t_hi) break;
        if (s_hi && t_hi) try_flip(tri, tri.s_index, tri.t_index, -1);
        reduce_site_degree(tri, tri.t_index, tri.s_index);
        reduce_site_degree(tri, tri.s_index, tri.t_index);
      }
    } else {
      reduce_site_degree(tri, tri.s_index, -1);
    }
  }
  return tri;
}

std::string dump_triangulation(const Triangulation& tri) {
  std::ostringstream os;
  os.precision(17);
  os << "OFF\n" << tri.vertices.size() << " " << tri.triangles.size() << " 0\n";
  for (Point p : tri.vertices) os << p.x << " " << p.y << " 0\n";
  for (const auto& t : tri.triangles)
    os << "3 " << t.v[0] << " " << t.v[1] << " " << t.v[2] << "\n";
  return os.str();
}

} // namespace wavepath
