#include "wavepath/decomposition.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <map>
#include <sstream>

#include "json.hpp"

namespace wavepath {
namespace {

struct DualLink {
  int node_a, node_b;
  int tri_a, tri_b;        // concrete triangles carrying the shared edge
  std::array<int, 2> edge; // vertex ids
};

// Portal (left, right) for the shared edge of `dst`, oriented for travel
// into dst: the directed edge (a, b) in a ccw triangle has the interior on
// its left, so entering dst the left wall endpoint is a.
std::array<int, 2> entry_portal(const Triangulation& tri, int dst, std::array<int, 2> edge) {
  const auto& t = tri.triangles[dst];
  for (int e = 0; e < 3; ++e) {
    int a = t.v[e], b = t.v[(e + 1) % 3];
    if ((a == edge[0] && b == edge[1]) || (a == edge[1] && b == edge[0])) return {a, b};
  }
  throw std::logic_error("edge not in triangle");
}

// Exit portal: directed edge (a, b) in the last triangle, leaving flips
// the sides.
std::array<int, 2> exit_portal(const Triangulation& tri, int src, std::array<int, 2> edge) {
  auto p = entry_portal(tri, src, edge);
  return {p[1], p[0]};
}

} // namespace

std::vector<int> sleeve_geodesic(const std::vector<Point>& pts,
                                 const std::vector<std::array<int, 2>>& portals,
                                 int from, int to) {
  std::vector<std::array<int, 2>> P;
  P.push_back({from, from});
  for (const auto& p : portals) P.push_back(p);
  P.push_back({to, to});

  std::vector<int> path{from};
  int apex = from, left = from, right = from;
  std::size_t apex_i = 0, left_i = 0, right_i = 0;

  auto area = [&](int a, int b, int c) { return orient(pts[a], pts[b], pts[c]); };

  for (std::size_t i = 1; i < P.size(); ++i) {
    int l = P[i][0], r = P[i][1];

    // Tighten the right side: the new right endpoint must rotate the right
    // ray toward the left ray without crossing it.
    if (area(apex, right, r) >= 0) {
      if (right == apex || area(apex, left, r) <= 0) {
        right = r;
        right_i = i;
      } else {
        // Right crossed over left: left endpoint becomes the new apex.
        if (path.empty() || path.back() != left) path.push_back(left);
        apex = left;
        apex_i = left_i;
        left = right = apex;
        left_i = right_i = apex_i;
        i = apex_i;
        continue;
      }
    }
    // Tighten the left side.
    if (area(apex, left, l) <= 0) {
      if (left == apex || area(apex, right, l) >= 0) {
        left = l;
        left_i = i;
      } else {
        if (path.empty() || path.back() != right) path.push_back(right);
        apex = right;
        apex_i = right_i;
        left = right = apex;
        left_i = right_i = apex_i;
        i = apex_i;
        continue;
      }
    }
  }
  if (path.back() != to) path.push_back(to);
  return path;
}

namespace {

void build_hourglass(const Triangulation& tri, Corridor& c) {
  if (!c.doors[1].valid()) return; // dead-end pocket, no hourglass

  const auto& pts = tri.vertices;
  std::vector<std::array<int, 2>> portals;
  if (!c.triangles.empty()) {
    portals.push_back(entry_portal(tri, c.triangles.front(), c.doors[0].v));
    for (std::size_t i = 0; i + 1 < c.triangles.size(); ++i) {
      int a = c.triangles[i], b = c.triangles[i + 1];
      const auto& ta = tri.triangles[a];
      std::array<int, 2> shared{-1, -1};
      for (int e = 0; e < 3; ++e)
        if (ta.nbr[e] == b) shared = {ta.v[e], ta.v[(e + 1) % 3]};
      assert(shared[0] >= 0);
      portals.push_back(entry_portal(tri, b, shared));
    }
    portals.push_back(exit_portal(tri, c.triangles.back(), c.doors[1].v));
  }

  std::array<int, 2> d0 = c.triangles.empty()
                              ? std::array<int, 2>{c.doors[0].v[0], c.doors[0].v[1]}
                              : entry_portal(tri, c.triangles.front(), c.doors[0].v);
  std::array<int, 2> d1 = c.triangles.empty()
                              ? std::array<int, 2>{c.doors[1].v[0], c.doors[1].v[1]}
                              : exit_portal(tri, c.triangles.back(), c.doors[1].v);

  auto geodesic = [&](int a, int b) {
    if (c.triangles.empty()) return a == b ? std::vector<int>{a} : std::vector<int>{a, b};
    // Strip the door portals: start/end points are already their endpoints.
    std::vector<std::array<int, 2>> inner(portals.begin() + 1, portals.end() - 1);
    return sleeve_geodesic(pts, inner, a, b);
  };
  std::vector<int> L = geodesic(d0[0], d1[0]);
  std::vector<int> R = geodesic(d0[1], d1[1]);

  auto contains = [](const std::vector<int>& v, int x) {
    return std::find(v.begin(), v.end(), x) != v.end();
  };
  int apex1 = -1, apex2 = -1;
  for (int v : L)
    if (contains(R, v)) {
      if (apex1 < 0) apex1 = v;
      apex2 = v;
    }

  auto to_chain = [&](const std::vector<int>& ids) {
    Chain ch;
    ch.vids = ids;
    for (int v : ids) ch.pts.push_back(pts[v]);
    return ch;
  };

  if (apex1 < 0) {
    c.kind = Corridor::Kind::Open;
    c.chains[0] = to_chain(L);
    c.chains[1] = to_chain(R);
    return;
  }

  c.kind = Corridor::Kind::Closed;
  auto cut = [&](const std::vector<int>& v, int upto) {
    std::vector<int> out;
    for (int x : v) {
      out.push_back(x);
      if (x == upto) break;
    }
    return out;
  };
  auto cut_after = [&](const std::vector<int>& v, int from_v) {
    std::vector<int> out;
    bool on = false;
    for (int x : v) {
      if (x == from_v) on = true;
      if (on) out.push_back(x);
    }
    std::reverse(out.begin(), out.end()); // door2 endpoint -> apex2
    return out;
  };

  c.funnels[0].apex_vid = apex1;
  c.funnels[0].apex = pts[apex1];
  c.funnels[0].chains[0] = to_chain(cut(L, apex1));
  c.funnels[0].chains[1] = to_chain(cut(R, apex1));
  c.funnels[1].apex_vid = apex2;
  c.funnels[1].apex = pts[apex2];
  c.funnels[1].chains[0] = to_chain(cut_after(L, apex2));
  c.funnels[1].chains[1] = to_chain(cut_after(R, apex2));

  // Common middle path, measured along L between the apices. Zero when the
  // funnels share a single apex vertex.
  std::size_t a1 =
      static_cast<std::size_t>(std::find(L.begin(), L.end(), apex1) - L.begin());
  std::size_t a2 =
      static_cast<std::size_t>(std::find(L.begin(), L.end(), apex2) - L.begin());
  double dist_mid = 0.0;
  for (std::size_t i = a1; i < a2; ++i) dist_mid += dist(pts[L[i]], pts[L[i + 1]]);
  c.apex_distance = dist_mid;
}

} // namespace

Decomposition build_decomposition(const Triangulation& tri) {
  const int T = static_cast<int>(tri.triangles.size());
  Decomposition d;

  // Collapse the fans around s and t into virtual nodes.
  const int S_NODE = T, T_NODE = T + 1;
  std::vector<int> node_of(T, -1);
  for (int i = 0; i < T; ++i) {
    const auto& t = tri.triangles[i];
    bool has_s = false, has_t = false;
    for (int v : t.v) {
      if (v == tri.s_index) has_s = true;
      if (v == tri.t_index) has_t = true;
    }
    node_of[i] = has_s ? S_NODE : (has_t ? T_NODE : i);
  }

  std::vector<DualLink> links;
  std::vector<std::vector<int>> incident(T + 2); // node -> link ids
  for (int i = 0; i < T; ++i) {
    const auto& t = tri.triangles[i];
    for (int e = 0; e < 3; ++e) {
      int j = t.nbr[e];
      if (j < 0 || j < i) continue;
      if (node_of[i] == node_of[j]) continue;
      DualLink ln{node_of[i], node_of[j], i, j, {t.v[e], t.v[(e + 1) % 3]}};
      incident[ln.node_a].push_back(static_cast<int>(links.size()));
      incident[ln.node_b].push_back(static_cast<int>(links.size()));
      links.push_back(ln);
    }
  }

  auto degree = [&](int node) { return incident[node].size(); };
  auto is_junction_node = [&](int node) {
    return node == S_NODE || node == T_NODE || degree(node) == 3;
  };

  // Junction records.
  std::vector<int> junction_of(T + 2, -1);
  auto add_junction = [&](int node) {
    Junction j;
    if (node == S_NODE || node == T_NODE) {
      j.triangle = -1;
      for (int i = 0; i < T; ++i)
        if (node_of[i] == node) j.fan.push_back(i);
      // Fan boundary edges: triangle edges not shared inside the fan.
      for (int i : j.fan) {
        const auto& t = tri.triangles[i];
        for (int e = 0; e < 3; ++e) {
          int nb = t.nbr[e];
          if (nb >= 0 && node_of[nb] == node) continue;
          j.edges.push_back({t.v[e], t.v[(e + 1) % 3]});
        }
      }
    } else {
      j.triangle = node;
      j.fan = {node};
      const auto& t = tri.triangles[node];
      for (int e = 0; e < 3; ++e) j.edges.push_back({t.v[e], t.v[(e + 1) % 3]});
    }
    junction_of[node] = static_cast<int>(d.junctions.size());
    d.junctions.push_back(std::move(j));
  };
  add_junction(S_NODE);
  add_junction(T_NODE);
  for (int i = 0; i < T; ++i)
    if (node_of[i] == i && is_junction_node(i)) add_junction(i);
  d.s_junction = junction_of[S_NODE];
  d.t_junction = junction_of[T_NODE];

  // Corridors: walk every junction-incident link through degree-2 nodes.
  std::vector<bool> link_used(links.size(), false);
  auto other_node = [&](const DualLink& ln, int node) {
    return ln.node_a == node ? ln.node_b : ln.node_a;
  };
  auto door_from = [&](const DualLink& ln) {
    Door dr;
    dr.v = ln.edge;
    dr.seg = {tri.vertices[ln.edge[0]], tri.vertices[ln.edge[1]]};
    return dr;
  };

  for (int node = 0; node < T + 2; ++node) {
    if (!is_junction_node(node)) continue;
    for (int li : incident[node]) {
      if (link_used[li]) continue;
      Corridor c;
      c.junctions[0] = junction_of[node];
      c.doors[0] = door_from(links[li]);
      link_used[li] = true;
      int cur = other_node(links[li], node);
      int cur_link = li;
      while (!is_junction_node(cur)) {
        c.triangles.push_back(cur);
        int next_link = -1;
        for (int cand : incident[cur])
          if (cand != cur_link && !link_used[cand]) next_link = cand;
        if (next_link < 0) break; // dead-end pocket
        link_used[next_link] = true;
        c.doors[1] = door_from(links[next_link]);
        cur_link = next_link;
        cur = other_node(links[next_link], cur);
      }
      if (is_junction_node(cur)) {
        c.junctions[1] = junction_of[cur];
        if (c.triangles.empty()) c.doors[1] = c.doors[0];
      } else {
        c.doors[1] = Door{}; // pocket: single door
        c.kind = Corridor::Kind::Closed;
      }
      build_hourglass(tri, c);
      int cid = static_cast<int>(d.corridors.size());
      d.junctions[c.junctions[0]].corridors.push_back(cid);
      if (c.junctions[1] >= 0) d.junctions[c.junctions[1]].corridors.push_back(cid);
      d.corridors.push_back(std::move(c));
    }
  }

  // Ownership map: every triangle in exactly one junction or corridor.
  d.owner.assign(T, INT32_MIN);
  for (std::size_t j = 0; j < d.junctions.size(); ++j)
    for (int t : d.junctions[j].fan) d.owner[t] = static_cast<int>(j);
  for (std::size_t ci = 0; ci < d.corridors.size(); ++ci)
    for (int t : d.corridors[ci].triangles) d.owner[t] = ~static_cast<int>(ci);
  for (int t = 0; t < T; ++t)
    if (d.owner[t] == INT32_MIN) throw std::logic_error("uncovered triangle");

  mark_useful(d);
  return d;
}

void mark_useful(Decomposition& d) {
  // Biconnected components of the corridor multigraph; a corridor lies on
  // a simple s-t path iff its block is on the block-cut tree path between
  // the s and t junctions. Self-loops and pockets are never useful.
  const int n = static_cast<int>(d.junctions.size());
  struct GEdge {
    int u, v, corridor;
  };
  std::vector<GEdge> edges;
  std::vector<std::vector<int>> adj(n); // edge ids
  for (std::size_t ci = 0; ci < d.corridors.size(); ++ci) {
    auto& c = d.corridors[ci];
    c.useful = false;
    if (c.junctions[1] < 0) continue;
    if (c.junctions[0] == c.junctions[1]) continue;
    int id = static_cast<int>(edges.size());
    edges.push_back({c.junctions[0], c.junctions[1], static_cast<int>(ci)});
    adj[c.junctions[0]].push_back(id);
    adj[c.junctions[1]].push_back(id);
  }

  // Tarjan biconnected components (edge stacking).
  std::vector<int> num(n, -1), low(n, 0);
  std::vector<int> estack;
  std::vector<int> block_of_edge(edges.size(), -1);
  int timer = 0, blocks = 0;
  std::vector<std::vector<int>> block_vertices;

  std::function<void(int, int)> dfs = [&](int u, int from_edge) {
    num[u] = low[u] = timer++;
    for (int ei : adj[u]) {
      if (ei == from_edge) continue;
      const auto& e = edges[ei];
      int v = e.u == u ? e.v : e.u;
      if (num[v] == -1) {
        estack.push_back(ei);
        dfs(v, ei);
        low[u] = std::min(low[u], low[v]);
        if (low[v] >= num[u]) {
          std::vector<int> verts;
          while (true) {
            int top = estack.back();
            estack.pop_back();
            block_of_edge[top] = blocks;
            verts.push_back(edges[top].u);
            verts.push_back(edges[top].v);
            if (top == ei) break;
          }
          std::sort(verts.begin(), verts.end());
          verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
          block_vertices.push_back(std::move(verts));
          ++blocks;
        }
      } else if (num[v] < num[u]) {
        estack.push_back(ei);
        low[u] = std::min(low[u], num[v]);
      }
    }
  };
  if (num[d.s_junction] == -1) dfs(d.s_junction, -1);
  if (num[d.t_junction] == -1) throw std::runtime_error("no path exists");
  d.connected = true;

  // Block-cut tree: nodes = blocks + junction vertices; path search from s
  // to t marks the blocks along the way.
  int bct_n = blocks + n;
  std::vector<std::vector<int>> bct(bct_n);
  for (int b = 0; b < blocks; ++b)
    for (int v : block_vertices[b]) {
      bct[b].push_back(blocks + v);
      bct[blocks + v].push_back(b);
    }
  std::vector<int> parent(bct_n, -2);
  std::vector<int> order{blocks + d.s_junction};
  parent[blocks + d.s_junction] = -1;
  for (std::size_t qi = 0; qi < order.size(); ++qi) {
    int u = order[qi];
    for (int v : bct[u])
      if (parent[v] == -2) {
        parent[v] = u;
        order.push_back(v);
      }
  }
  if (parent[blocks + d.t_junction] == -2) throw std::runtime_error("no path exists");

  std::vector<bool> block_on_path(blocks, false);
  for (int u = blocks + d.t_junction; u != -1; u = parent[u])
    if (u < blocks) block_on_path[u] = true;

  for (std::size_t ei = 0; ei < edges.size(); ++ei) {
    int b = block_of_edge[ei];
    if (b >= 0 && block_on_path[b]) d.corridors[edges[ei].corridor].useful = true;
  }
}

std::string dump_decomposition(const Decomposition& d, const Triangulation& tri) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["junctions"] = ordered_json::array();
  for (const auto& jn : d.junctions) {
    ordered_json o;
    o["triangle"] = jn.triangle;
    o["fan"] = jn.fan;
    o["corridors"] = jn.corridors;
    j["junctions"].push_back(o);
  }
  j["corridors"] = ordered_json::array();
  for (const auto& c : d.corridors) {
    ordered_json o;
    o["kind"] = c.kind == Corridor::Kind::Open ? "open" : "closed";
    o["triangles"] = c.triangles;
    o["junctions"] = {c.junctions[0], c.junctions[1]};
    o["useful"] = c.useful;
    ordered_json doors = ordered_json::array();
    for (const auto& dr : c.doors)
      if (dr.valid()) doors.push_back({dr.v[0], dr.v[1]});
    o["doors"] = doors;
    auto chain_json = [&](const Chain& ch) {
      ordered_json arr = ordered_json::array();
      for (std::size_t i = 0; i < ch.size(); ++i)
        arr.push_back({ch.pts[i].x, ch.pts[i].y});
      return arr;
    };
    if (c.kind == Corridor::Kind::Open) {
      o["chains"] = {chain_json(c.chains[0]), chain_json(c.chains[1])};
    } else if (c.doors[1].valid()) {
      o["apex_distance"] = c.apex_distance;
      ordered_json funnels = ordered_json::array();
      for (const auto& f : c.funnels) {
        ordered_json fo;
        fo["apex"] = {f.apex.x, f.apex.y};
        fo["chains"] = {chain_json(f.chains[0]), chain_json(f.chains[1])};
        funnels.push_back(fo);
      }
      o["funnels"] = funnels;
    }
    j["corridors"].push_back(o);
  }
  j["s_junction"] = d.s_junction;
  j["t_junction"] = d.t_junction;
  (void)tri;
  return j.dump(2);
}

} // namespace wavepath
