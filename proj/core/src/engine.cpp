#include "wavepath/engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <queue>
#include <set>

#include "wavepath/oracle.hpp"

namespace wavepath {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool strictly_between(Point a, Point b, Point q) {
  return dot(q - a, b - a) > 0.0 && dot(q - b, a - b) > 0.0;
}

} // namespace

// ------------------------------------------------------------ FreeWalk ----

FreeWalk::FreeWalk(const Triangulation& tri) : tri_(tri) {
  incident_.resize(tri.vertices.size());
  for (std::size_t t = 0; t < tri.triangles.size(); ++t)
    for (int v : tri.triangles[t].v) incident_[static_cast<std::size_t>(v)].push_back(static_cast<int>(t));
}

namespace {

// Crossing step shared by the walk targets: from triangle `cur` entered
// through directed edge (ea left, eb right) of the sightline u->target.
struct WalkState {
  int cur = -1, ea = -1, eb = -1;
  bool done = false, blocked = false;
  int via = -1; // collinear vertex the sightline passes through
};

int third_vertex(const Triangulation::Tri& t, int a, int b) {
  for (int v : t.v)
    if (v != a && v != b) return v;
  return -1;
}

int neighbor_across(const Triangulation& tri, int t, int a, int b) {
  const auto& T = tri.triangles[t];
  for (int e = 0; e < 3; ++e) {
    int x = T.v[e], y = T.v[(e + 1) % 3];
    if ((x == a && y == b) || (x == b && y == a)) return T.nbr[e];
  }
  return -1;
}

// Finds the triangle around u whose wedge contains the sightline to q.
WalkState walk_start(const Triangulation& tri, const std::vector<int>& fan, int u, Point q,
                     int target_vid) {
  WalkState st;
  Point pu = tri.vertices[static_cast<std::size_t>(u)];
  for (int t : fan) {
    const auto& T = tri.triangles[static_cast<std::size_t>(t)];
    int i = 0;
    while (T.v[i] != u) ++i;
    int a = T.v[(i + 1) % 3], b = T.v[(i + 2) % 3];
    if (a == target_vid || b == target_vid) {
      st.done = true;
      return st;
    }
    Point pa = tri.vertices[static_cast<std::size_t>(a)];
    Point pb = tri.vertices[static_cast<std::size_t>(b)];
    int oa = orient(pu, q, pa);
    int ob = orient(pu, q, pb);
    if (oa == 0 && strictly_between(pu, q, pa)) {
      st.via = a;
      return st;
    }
    if (ob == 0 && strictly_between(pu, q, pb)) {
      st.via = b;
      return st;
    }
    if (oa < 0 && ob > 0) {
      st.cur = t;
      st.ea = b;
      st.eb = a;
      return st;
    }
  }
  st.blocked = true;
  return st;
}

} // namespace

bool FreeWalk::vertex_sees_vertex(int u, int v) const {
  if (u == v) return true;
  int guard = static_cast<int>(tri_.vertices.size());
  while (guard-- > 0) {
    Point pu = tri_.vertices[static_cast<std::size_t>(u)];
    Point pv = tri_.vertices[static_cast<std::size_t>(v)];
    WalkState st = walk_start(tri_, incident_[static_cast<std::size_t>(u)], u, pv, v);
    if (st.done) return true;
    if (st.blocked) return false;
    if (st.via >= 0) {
      // Grazing through an intermediate vertex keeps the same length;
      // continue the sight from there.
      u = st.via;
      continue;
    }
    int steps = static_cast<int>(tri_.triangles.size());
    while (steps-- > 0) {
      if (tri_.is_constrained(st.ea, st.eb)) return false;
      int nxt = neighbor_across(tri_, st.cur, st.ea, st.eb);
      if (nxt < 0) return false;
      st.cur = nxt;
      int c = third_vertex(tri_.triangles[static_cast<std::size_t>(st.cur)], st.ea, st.eb);
      if (c == v) return true;
      Point pc = tri_.vertices[static_cast<std::size_t>(c)];
      int oc = orient(pu, pv, pc);
      if (oc == 0) {
        if (strictly_between(pu, pv, pc)) {
          st.via = c;
          break;
        }
        return false;
      }
      if (oc > 0)
        st.ea = c;
      else
        st.eb = c;
    }
    if (st.via >= 0) {
      u = st.via;
      continue;
    }
    return false;
  }
  return false;
}

bool FreeWalk::vertex_sees_edge_point(int u, Point p, int ea, int eb) const {
  if (u == ea || u == eb) return true;
  auto is_target = [&](int a, int b) {
    return (a == ea && b == eb) || (a == eb && b == ea);
  };
  int guard = static_cast<int>(tri_.vertices.size());
  while (guard-- > 0) {
    Point pu = tri_.vertices[static_cast<std::size_t>(u)];
    WalkState st = walk_start(tri_, incident_[static_cast<std::size_t>(u)], u, p, -1);
    if (st.blocked || st.done) return false;
    if (st.via >= 0) {
      if (st.via == ea || st.via == eb) return true;
      u = st.via;
      continue;
    }
    if (is_target(st.ea, st.eb)) return true;
    int steps = static_cast<int>(tri_.triangles.size());
    st.via = -1;
    while (steps-- > 0) {
      if (tri_.is_constrained(st.ea, st.eb)) return false;
      int nxt = neighbor_across(tri_, st.cur, st.ea, st.eb);
      if (nxt < 0) return false;
      st.cur = nxt;
      int c = third_vertex(tri_.triangles[static_cast<std::size_t>(st.cur)], st.ea, st.eb);
      Point pc = tri_.vertices[static_cast<std::size_t>(c)];
      int oc = orient(pu, p, pc);
      if (oc == 0 && strictly_between(pu, p, pc)) {
        if (c == ea || c == eb) return true;
        st.via = c;
        break;
      }
      if (oc >= 0)
        st.ea = c;
      else
        st.eb = c;
      if (is_target(st.ea, st.eb)) return true;
      // Target point reached without meeting the edge pair: blocked.
      if (!strictly_between(pu, p, tri_.vertices[static_cast<std::size_t>(st.ea)]) &&
          orient(tri_.vertices[static_cast<std::size_t>(st.ea)],
                 tri_.vertices[static_cast<std::size_t>(st.eb)], p) == 0)
        return false;
    }
    if (st.via >= 0) {
      u = st.via;
      continue;
    }
    return false;
  }
  return false;
}

// ---------------------------------------------------------- iintersect ----

IIntersectHit iintersect(const Bisector& curve, const std::vector<BoundaryElem>& run) {
  IIntersectHit best;
  for (std::size_t e = 0; e < run.size(); ++e) {
    const auto& el = run[e];
    for (std::size_t i = 0; i + 1 < el.pts.size() || (el.pts.size() == 1 && i == 0); ++i) {
      Segment seg = el.pts.size() == 1 ? Segment{el.pts[0], el.pts[0]}
                                       : Segment{el.pts[i], el.pts[i + 1]};
      auto q = intersect_bisector_segment(curve, seg);
      if (el.pts.size() == 1) i = 1;
      if (!q) continue;
      double reach = dist(*q, curve.left.center) + curve.left.weight;
      if (!best.found || reach < best.reach - kEpsGeom) {
        best.found = true;
        best.elem = e;
        best.point = *q;
        best.reach = reach;
      }
    }
  }
  return best;
}

// -------------------------------------------------------- associations ----

namespace {

double elem_strike(const WeightedSite& s, const BoundaryElem& el) {
  double best = kInf;
  if (el.pts.size() == 1) return strike_distance(s, Segment{el.pts[0], el.pts[0]});
  for (std::size_t i = 0; i + 1 < el.pts.size(); ++i)
    best = std::min(best, strike_distance(s, Segment{el.pts[i], el.pts[i + 1]}));
  return best;
}

} // namespace

void assoc_a_to_b(Association& as, std::size_t split) {
  const std::size_t ne = as.elements.size();
  const std::size_t nb = as.bunches.size();
  as.owner.assign(ne, -1);
  if (ne == 0 || nb == 0) return;

  // Inter-bunch equal-arrival curves of the suffix section, binary-searched
  // against the run; their hit order along the run should be monotone.
  std::vector<long> cut(nb, -1);
  long prev = -1;
  for (std::size_t i = split; i + 1 < nb; ++i) {
    IIntersectHit hit;
    try {
      Bisector curve = make_bisector(as.bunches[i], as.bunches[i + 1]);
      hit = iintersect(curve, as.elements);
    } catch (const std::exception&) {
      // One front swallowed the other: no separating curve.
    }
    cut[i] = hit.found ? static_cast<long>(hit.elem) : -1;
    if (cut[i] >= 0 && cut[i] < prev) ++as.icurve_fallbacks;
    if (cut[i] >= 0) prev = cut[i];
  }

  // Proximity repair: each element goes to the bunch whose front arrives
  // first, ties toward the lower wavefront position.
  for (std::size_t e = 0; e < ne; ++e) {
    double best = kInf;
    int who = -1;
    for (std::size_t b = 0; b < nb; ++b) {
      double v = elem_strike(as.bunches[b], as.elements[e]);
      if (v < best - kEpsGeom) {
        best = v;
        who = static_cast<int>(b);
      }
    }
    as.owner[e] = who;
  }
}

Association merge_sections(std::vector<WeightedSite> a, std::vector<WeightedSite> b,
                           std::vector<BoundaryElem> elems) {
  Association as;
  as.elements = std::move(elems);
  as.bunches = a;
  as.bunches.insert(as.bunches.end(), b.begin(), b.end());

  // The four direction/reversal combinations, then the mirrored roles.
  for (int pass = 0; pass < 8; ++pass) {
    bool rev_a = pass & 1, rev_b = pass & 2, swap_roles = pass & 4;
    std::vector<WeightedSite> first = swap_roles ? b : a;
    std::vector<WeightedSite> second = swap_roles ? a : b;
    if (rev_a) std::reverse(first.begin(), first.end());
    if (rev_b) std::reverse(second.begin(), second.end());
    Association pass_as;
    pass_as.elements = as.elements;
    pass_as.bunches = first;
    pass_as.bunches.insert(pass_as.bunches.end(), second.begin(), second.end());
    assoc_a_to_b(pass_as, first.size());
    as.icurve_fallbacks += pass_as.icurve_fallbacks;
  }
  assoc_a_to_b(as, a.size());
  return as;
}

// ------------------------------------------------------------- Type IV ----

Type4Outcome type4_first_contact(const std::vector<WeightedSite>& bunches, double dnow) {
  Type4Outcome out;
  const std::size_t n = bunches.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 2; j < n; ++j) {
      double D = dist(bunches[i].center, bunches[j].center);
      double d = 0.5 * (D + bunches[i].weight + bunches[j].weight);
      if (d < std::max({dnow, bunches[i].weight, bunches[j].weight})) continue;
      if (out.found && d >= out.d) continue;
      out.found = true;
      out.d = d;
      out.meet = bunches[i].center +
                 (d - bunches[i].weight) * normalized(bunches[j].center - bunches[i].center);
      out.deleted.clear();
      for (std::size_t k = i + 1; k < j; ++k) {
        double rk = d - bunches[k].weight;
        if (rk <= 0) {
          out.deleted.push_back(k);
          continue;
        }
        bool dominated = true;
        for (int s = 0; s < 64 && dominated; ++s) {
          double th = 2.0 * M_PI * s / 64.0;
          Point x = bunches[k].center + rk * Point{std::cos(th), std::sin(th)};
          bool covered = false;
          for (std::size_t l = 0; l < n && !covered; ++l) {
            if (l == k) continue;
            covered = bunches[l].weight + dist(bunches[l].center, x) <= d + kEpsGeom;
          }
          dominated = covered;
        }
        if (dominated) out.deleted.push_back(k);
      }
    }
  }
  return out;
}

// ----------------------------------------------------------------- run ----

namespace {

struct Ev {
  double d = 0.0;
  int type = 3; // 1 junction edge, 2 door, 3 tangent strike
  long seq = 0;
  int src = -1;  // settled source vertex
  int dst = -1;  // type 3: target vertex
  int door = -1; // type 1/2: corridor*2 + side
  bool apex = false;
};

struct EvCmp {
  bool operator()(const Ev& a, const Ev& b) const {
    if (a.d != b.d) return a.d > b.d;
    if (a.type != b.type) return a.type > b.type; // IV handled inline; I<II<III
    return a.seq > b.seq;
  }
};

struct CycleEntry {
  int kind = 0; // 0 door edge, 1 chain run, 2 wall edge
  int id = -1;  // door: corridor*2+side; chain: chain key; wall: packed vids
};

struct Engine {
  const Instance& inst;
  const EngineOptions& opts;
  Triangulation tri;
  Decomposition dec;
  FreeWalk walk;
  PathResult res;

  std::vector<char> reflex;
  std::vector<double> dv;
  std::vector<int> pred;
  std::vector<char> settled;
  std::priority_queue<Ev, std::vector<Ev>, EvCmp> heap;
  long seq = 0;

  // Chains indexed by a packed key: corridor*8 + variant.
  std::map<int, const Chain*> chains;
  std::map<int, std::vector<std::pair<int, std::size_t>>> vid_chains; // vid -> (key, index)
  BunchRegistry bunches;

  // Boundary cycles and bunch bookkeeping.
  std::vector<std::vector<CycleEntry>> cycles;
  std::vector<char> cycle_dead;
  std::vector<std::vector<int>> cycle_bunches;
  std::vector<int> cycle_of_bunch; // per vertex id
  std::map<int, int> door_strikes;     // door id -> count
  std::map<int, int> door_first_side;  // door id -> orient sign of first striker
  struct Gw {
    int corridor = -1;
    double restart = 0.0;
    int pocket_cycle = -1, main_cycle = -1;
  };
  std::vector<Gw> gateways;

  std::vector<int> alive; // live bunch vertices in creation order
  HullTree wst;
  double eps_init = 0.0;

  std::map<std::string, std::uint64_t>& C() { return res.counters; }

  Engine(const Instance& in, const EngineOptions& op)
      : inst(in), opts(op), tri(triangulate(in)), dec(build_decomposition(tri)), walk(tri) {}

  void trace(int type, double d, std::string detail) {
    if (opts.collect_trace) res.trace.push_back({type, d, std::move(detail)});
  }

  void mark_reflex() {
    reflex.assign(tri.vertices.size(), 0);
    auto vid_of = [&](Point p) {
      for (std::size_t i = 0; i < tri.vertices.size(); ++i)
        if (tri.vertices[i] == p) return static_cast<int>(i);
      return -1;
    };
    auto mark_poly = [&](const std::vector<Point>& poly) {
      std::size_t n = poly.size();
      for (std::size_t i = 0; i < n; ++i) {
        Point a = poly[(i + n - 1) % n], v = poly[i], b = poly[(i + 1) % n];
        if (orient(a, v, b) < 0) {
          int id = vid_of(v);
          if (id >= 0) reflex[static_cast<std::size_t>(id)] = 1;
        }
      }
    };
    mark_poly(inst.outer);
    for (const auto& h : inst.holes) mark_poly(h);
  }

  void index_chains() {
    for (std::size_t c = 0; c < dec.corridors.size(); ++c) {
      const auto& cor = dec.corridors[c];
      auto add = [&](const Chain& ch, int variant) {
        if (ch.size() == 0) return;
        int key = static_cast<int>(c) * 8 + variant;
        chains[key] = &ch;
        for (std::size_t i = 0; i < ch.size(); ++i)
          vid_chains[ch.vids[i]].push_back({key, i});
      };
      if (cor.kind == Corridor::Kind::Open) {
        add(cor.chains[0], 0);
        add(cor.chains[1], 1);
      } else {
        add(cor.funnels[0].chains[0], 2);
        add(cor.funnels[0].chains[1], 3);
        add(cor.funnels[1].chains[0], 4);
        add(cor.funnels[1].chains[1], 5);
      }
    }
  }

  void push_strikes_from(int u) {
    for (std::size_t v = 0; v < tri.vertices.size(); ++v) {
      bool target = reflex[v] || static_cast<int>(v) == tri.t_index;
      if (!target || settled[v] || static_cast<int>(v) == u) continue;
      double d = dv[static_cast<std::size_t>(u)] +
                 dist(tri.vertices[static_cast<std::size_t>(u)], tri.vertices[v]);
      heap.push({d, 3, seq++, u, static_cast<int>(v), -1, false});
    }
  }

  void push_door_strikes_from(int u) {
    WeightedSite site{tri.vertices[static_cast<std::size_t>(u)],
                      dv[static_cast<std::size_t>(u)]};
    for (std::size_t c = 0; c < dec.corridors.size(); ++c) {
      for (int side = 0; side < 2; ++side) {
        const Door& door = dec.corridors[c].doors[side];
        if (!door.valid()) continue;
        int id = static_cast<int>(c) * 2 + side;
        if (door_strikes.count(id) && door_strikes[id] >= 2) continue;
        double d = strike_distance(site, door.seg);
        heap.push({d, 2, seq++, u, -1, id, false});
      }
    }
  }

  // Creates a bunch at the settled vertex u and registers everything that
  // depends on it.
  void spawn_bunch(int u, double d) {
    C()["bunches"]++;
    alive.push_back(u);
    C()["peak_bunches"] = std::max(C()["peak_bunches"], static_cast<std::uint64_t>(alive.size()));
    int pc = pred[static_cast<std::size_t>(u)];
    cycle_of_bunch[static_cast<std::size_t>(u)] =
        pc >= 0 ? cycle_of_bunch[static_cast<std::size_t>(pc)] : 0;
    if (!cycles.empty()) {
      int cyc = cycle_of_bunch[static_cast<std::size_t>(u)];
      if (cyc >= 0 && cyc < static_cast<int>(cycle_bunches.size()))
        cycle_bunches[static_cast<std::size_t>(cyc)].push_back(u);
    }
    // Chain-level wavefront bookkeeping.
    for (auto [key, idx] : vid_chains[u]) {
      StrikeAction act = bht_tangent_strike(bunches, key, *chains[key], idx, d,
                                            pred[static_cast<std::size_t>(u)], d);
      if (act == StrikeAction::Built) C()["bht_built"]++;
      if (act == StrikeAction::SplitRebuilt) C()["bht_splits"]++;
    }
    HullUnit unit;
    unit.sites = {{tri.vertices[static_cast<std::size_t>(u)], d}};
    unit.elem_id = u;
    wst.insert(wst.size(), std::move(unit), d);
    push_strikes_from(u);
    push_door_strikes_from(u);
    // Closed-corridor far-apex initiation.
    for (std::size_t c = 0; c < dec.corridors.size(); ++c) {
      const auto& cor = dec.corridors[c];
      if (cor.kind != Corridor::Kind::Closed) continue;
      for (int f = 0; f < 2; ++f) {
        if (cor.funnels[f].apex_vid != u) continue;
        int other = cor.funnels[1 - f].apex_vid;
        if (other >= 0 && !settled[static_cast<std::size_t>(other)]) {
          heap.push({d + cor.apex_distance, 3, seq++, u, other, -1, true});
          C()["apex_inits"]++;
        }
      }
    }
  }

  std::vector<CycleEntry> corridor_far_side(int c, int enter_side) {
    const auto& cor = dec.corridors[static_cast<std::size_t>(c)];
    std::vector<CycleEntry> out;
    if (cor.kind == Corridor::Kind::Open) {
      if (chains.count(c * 8 + 0)) out.push_back({1, c * 8 + 0});
      if (cor.doors[1 - enter_side].valid()) out.push_back({0, c * 2 + (1 - enter_side)});
      if (chains.count(c * 8 + 1)) out.push_back({1, c * 8 + 1});
    } else {
      int base = enter_side == 0 ? 2 : 4;
      if (chains.count(c * 8 + base)) out.push_back({1, c * 8 + base});
      if (chains.count(c * 8 + base + 1)) out.push_back({1, c * 8 + base + 1});
    }
    return out;
  }

  std::vector<CycleEntry> junction_far_side(int j, int via_corridor) {
    std::vector<CycleEntry> out;
    const auto& jn = dec.junctions[static_cast<std::size_t>(j)];
    for (int ci : jn.corridors) {
      if (ci == via_corridor) continue;
      const auto& cor = dec.corridors[static_cast<std::size_t>(ci)];
      for (int side = 0; side < 2; ++side)
        if (cor.junctions[side] == j && cor.doors[side].valid())
          out.push_back({0, ci * 2 + side});
    }
    return out;
  }

  // Replaces the first occurrence of `e` in some live cycle.
  bool replace_entry(const CycleEntry& e, const std::vector<CycleEntry>& with) {
    for (std::size_t c = 0; c < cycles.size(); ++c) {
      if (cycle_dead[c]) continue;
      auto& cyc = cycles[c];
      for (std::size_t i = 0; i < cyc.size(); ++i) {
        if (cyc[i].kind == e.kind && cyc[i].id == e.id) {
          cyc.erase(cyc.begin() + static_cast<long>(i));
          cyc.insert(cyc.begin() + static_cast<long>(i), with.begin(), with.end());
          return true;
        }
      }
    }
    return false;
  }

  std::vector<Point> cycle_points(const std::vector<CycleEntry>& cyc) {
    std::vector<Point> pts;
    for (const auto& e : cyc) {
      if (e.kind == 0) {
        const auto& cor = dec.corridors[static_cast<std::size_t>(e.id / 2)];
        const Door& d = cor.doors[e.id % 2];
        pts.push_back(d.seg.a);
        pts.push_back(d.seg.b);
      } else if (e.kind == 1 && chains.count(e.id)) {
        for (Point p : chains.at(e.id)->pts) pts.push_back(p);
      }
    }
    return pts;
  }

  bool loop_contains(const std::vector<Point>& loop, Point p) {
    if (loop.size() < 3) return false;
    bool in = false;
    for (std::size_t i = 0, j = loop.size() - 1; i < loop.size(); j = i++) {
      if ((loop[i].y > p.y) != (loop[j].y > p.y) &&
          p.x < (loop[j].x - loop[i].x) * (p.y - loop[i].y) / (loop[j].y - loop[i].y) +
                    loop[i].x)
        in = !in;
    }
    return in;
  }

  void boundary_split(std::size_t cyc_id, std::size_t i, std::size_t j, int corridor,
                      double d) {
    auto& cyc = cycles[cyc_id];
    std::vector<CycleEntry> one(cyc.begin() + static_cast<long>(i) + 1,
                                cyc.begin() + static_cast<long>(j));
    std::vector<CycleEntry> two(cyc.begin() + static_cast<long>(j) + 1, cyc.end());
    two.insert(two.end(), cyc.begin(), cyc.begin() + static_cast<long>(i));
    cycle_dead[cyc_id] = 1;
    int id_one = static_cast<int>(cycles.size());
    cycles.push_back(std::move(one));
    cycle_dead.push_back(0);
    cycle_bunches.emplace_back();
    int id_two = static_cast<int>(cycles.size());
    cycles.push_back(std::move(two));
    cycle_dead.push_back(0);
    cycle_bunches.emplace_back();

    // Orientation: the cycle whose outline holds t keeps expanding; the
    // other becomes a pocket behind a gateway at the split corridor.
    Point tpos = tri.vertices[static_cast<std::size_t>(tri.t_index)];
    bool one_has_t = loop_contains(cycle_points(cycles[static_cast<std::size_t>(id_one)]), tpos);
    int pocket = one_has_t ? id_two : id_one;
    int main = one_has_t ? id_one : id_two;
    gateways.push_back({corridor, d, pocket, main});
    C()["boundary_splits"]++;
    C()["gateways"]++;
    // Split the bunch pool by which outline holds each source.
    for (int b : cycle_bunches[cyc_id]) {
      Point pb = tri.vertices[static_cast<std::size_t>(b)];
      int dst = loop_contains(cycle_points(cycles[static_cast<std::size_t>(id_one)]), pb)
                    ? id_one
                    : id_two;
      cycle_bunches[static_cast<std::size_t>(dst)].push_back(b);
      cycle_of_bunch[static_cast<std::size_t>(b)] = dst;
    }
    trace(1, d, "split corridor=" + std::to_string(corridor) +
                    " pocket=" + std::to_string(pocket));
  }

  void merge_cycles(std::size_t ca, std::size_t ia, std::size_t cb, std::size_t ib, double d) {
    auto& A = cycles[ca];
    auto& B = cycles[cb];
    std::vector<CycleEntry> merged(A.begin(), A.begin() + static_cast<long>(ia));
    merged.insert(merged.end(), B.begin() + static_cast<long>(ib) + 1, B.end());
    merged.insert(merged.end(), B.begin(), B.begin() + static_cast<long>(ib));
    merged.insert(merged.end(), A.begin() + static_cast<long>(ia) + 1, A.end());
    cycle_dead[ca] = 1;
    cycle_dead[cb] = 1;
    int id = static_cast<int>(cycles.size());
    cycles.push_back(std::move(merged));
    cycle_dead.push_back(0);
    cycle_bunches.emplace_back();

    // Waveform merger across the shared element.
    std::vector<WeightedSite> sa, sb;
    for (int b : cycle_bunches[ca]) {
      sa.push_back({tri.vertices[static_cast<std::size_t>(b)], dv[static_cast<std::size_t>(b)]});
      cycle_bunches[static_cast<std::size_t>(id)].push_back(b);
      cycle_of_bunch[static_cast<std::size_t>(b)] = id;
    }
    for (int b : cycle_bunches[cb]) {
      sb.push_back({tri.vertices[static_cast<std::size_t>(b)], dv[static_cast<std::size_t>(b)]});
      cycle_bunches[static_cast<std::size_t>(id)].push_back(b);
      cycle_of_bunch[static_cast<std::size_t>(b)] = id;
    }
    std::vector<BoundaryElem> run;
    int eid = 0;
    for (const auto& e : cycles[static_cast<std::size_t>(id)]) {
      if (e.kind == 1 && chains.count(e.id)) run.push_back({eid++, chains.at(e.id)->pts});
      if (e.kind == 0) {
        const auto& cor = dec.corridors[static_cast<std::size_t>(e.id / 2)];
        run.push_back({eid++, {cor.doors[e.id % 2].seg.a, cor.doors[e.id % 2].seg.b}});
      }
    }
    if (!sa.empty() && !sb.empty() && !run.empty()) {
      Association as = merge_sections(sa, sb, run);
      C()["assoc_invocations"] += 9;
      C()["icurve_fallbacks"] += static_cast<std::uint64_t>(as.icurve_fallbacks);
    }
    C()["cycle_merges"]++;
    trace(2, d, "cycle merge -> " + std::to_string(id));
  }

  void handle_door_strike(const Ev& ev) {
    int c = ev.door / 2, side = ev.door % 2;
    const auto& cor = dec.corridors[static_cast<std::size_t>(c)];
    const Door& door = cor.doors[static_cast<std::size_t>(side)];
    Point src = tri.vertices[static_cast<std::size_t>(ev.src)];
    Point cp = closest_point_on_segment(src, door.seg);
    if (!walk.vertex_sees_edge_point(ev.src, cp, door.v[0], door.v[1])) {
      C()["blocked_strikes"]++;
      return;
    }
    int sgn = orient(door.seg.a, door.seg.b, src);
    int& count = door_strikes[ev.door];
    if (count >= 2) {
      C()["stale_events"]++;
      return;
    }
    // Classify by the owner of the triangle on the source side of the
    // door: a junction edge or a corridor door proper.
    int type = dec.owner_is_junction(t_side_of(door, sgn)) ? 1 : 2;

    if (count == 0) {
      count = 1;
      door_first_side[ev.door] = sgn;
      C()[type == 1 ? "events_type1" : "events_type2"]++;
      trace(type, ev.d, "door=" + std::to_string(ev.door) + " first");
      // Evolve the cycle: the struck edge opens into the far side.
      std::vector<CycleEntry> far;
      if (type == 1) {
        far = corridor_far_side(c, side);
      } else {
        int j = cor.junctions[static_cast<std::size_t>(side)];
        if (j >= 0) far = junction_far_side(j, c);
      }
      if (!replace_entry({0, ev.door}, far)) C()["cycle_misses"]++;
      return;
    }
    if (door_first_side[ev.door] == sgn) {
      C()["stale_events"]++;
      return;
    }
    count = 2;
    C()[type == 1 ? "events_type1" : "events_type2"]++;
    trace(type, ev.d, "door=" + std::to_string(ev.door) + " second");
    // Edge struck from both sides: the cycle holding it twice splits, or
    // two cycles holding it merge.
    std::vector<std::pair<std::size_t, std::size_t>> where;
    for (std::size_t cy = 0; cy < cycles.size(); ++cy) {
      if (cycle_dead[cy]) continue;
      for (std::size_t i = 0; i < cycles[cy].size(); ++i)
        if (cycles[cy][i].kind == 0 && cycles[cy][i].id == ev.door) where.push_back({cy, i});
    }
    if (where.size() >= 2 && where[0].first == where[1].first) {
      boundary_split(where[0].first, where[0].second, where[1].second, c, ev.d);
    } else if (where.size() >= 2) {
      merge_cycles(where[0].first, where[0].second, where[1].first, where[1].second, ev.d);
    } else {
      C()["cycle_misses"]++;
    }
  }

  int t_side_of(const Door& door, int sgn) {
    for (std::size_t t = 0; t < tri.triangles.size(); ++t) {
      const auto& T = tri.triangles[t];
      for (int e = 0; e < 3; ++e) {
        int a = T.v[e], b = T.v[(e + 1) % 3];
        if ((a == door.v[0] && b == door.v[1]) || (a == door.v[1] && b == door.v[0])) {
          Point third = tri.vertices[static_cast<std::size_t>(T.v[(e + 2) % 3])];
          if (orient(door.seg.a, door.seg.b, third) == sgn) return static_cast<int>(t);
        }
      }
    }
    return 0;
  }

  void run_type4(double dnow) {
    if (alive.size() < 3) return;
    std::vector<WeightedSite> sites;
    for (int v : alive)
      sites.push_back({tri.vertices[static_cast<std::size_t>(v)], dv[static_cast<std::size_t>(v)]});
    Type4Outcome out = type4_first_contact(sites, 0.0);
    if (!out.found || out.d > dnow || out.deleted.empty()) return;
    C()["events_type4"]++;
    trace(4, out.d, "contact deletes " + std::to_string(out.deleted.size()));
    // Drop dominated bunches; their strikes already propagated.
    std::vector<int> keep;
    std::set<std::size_t> del(out.deleted.begin(), out.deleted.end());
    for (std::size_t i = 0; i < alive.size(); ++i) {
      if (del.count(i)) {
        wst.erase(keep.size(), dnow);
      } else {
        keep.push_back(alive[i]);
      }
    }
    alive = std::move(keep);
    wst.refresh_bridges(dnow);
  }

  PathResult run() {
    mark_reflex();
    index_chains();
    std::size_t n = tri.vertices.size();
    dv.assign(n, kInf);
    pred.assign(n, -1);
    settled.assign(n, 0);
    cycle_of_bunch.assign(n, 0);

    double dx = 0, dy = 0;
    {
      double x0 = kInf, x1 = -kInf, y0 = kInf, y1 = -kInf;
      for (Point p : inst.outer) {
        x0 = std::min(x0, p.x);
        x1 = std::max(x1, p.x);
        y0 = std::min(y0, p.y);
        y1 = std::max(y1, p.y);
      }
      dx = x1 - x0;
      dy = y1 - y0;
    }
    eps_init = 1e-6 * std::sqrt(dx * dx + dy * dy);
    trace(0, eps_init, "init");

    // First boundary cycle: the enclosing junction's rim.
    {
      std::vector<CycleEntry> first;
      const auto& js = dec.junctions[static_cast<std::size_t>(dec.s_junction)];
      for (int ci : js.corridors) {
        const auto& cor = dec.corridors[static_cast<std::size_t>(ci)];
        for (int side = 0; side < 2; ++side)
          if (cor.junctions[side] == dec.s_junction && cor.doors[side].valid())
            first.push_back({0, ci * 2 + side});
      }
      cycles.push_back(std::move(first));
      cycle_dead.push_back(0);
      cycle_bunches.emplace_back();
    }

    dv[static_cast<std::size_t>(tri.s_index)] = 0.0;
    settled[static_cast<std::size_t>(tri.s_index)] = 1;
    pred[static_cast<std::size_t>(tri.s_index)] = -1;
    spawn_bunch(tri.s_index, 0.0);

    int settles_since_cleanup = 0;
    while (!heap.empty()) {
      Ev ev = heap.top();
      heap.pop();
      if (ev.type == 3) {
        if (settled[static_cast<std::size_t>(ev.dst)]) {
          C()["stale_events"]++;
          continue;
        }
        if (!ev.apex && !walk.vertex_sees_vertex(ev.src, ev.dst)) {
          C()["blocked_strikes"]++;
          continue;
        }
        dv[static_cast<std::size_t>(ev.dst)] = ev.d;
        pred[static_cast<std::size_t>(ev.dst)] = ev.src;
        settled[static_cast<std::size_t>(ev.dst)] = 1;
        C()["events_type3"]++;
        {
          char buf[160];
          Point p = tri.vertices[static_cast<std::size_t>(ev.dst)];
          std::snprintf(buf, sizeof buf, "v=%d x=%.17g y=%.17g w=%.17g pred=%d", ev.dst, p.x,
                        p.y, ev.d, ev.src);
          trace(3, ev.d, buf);
        }
        if (ev.dst == tri.t_index && !opts.full_sweep) break;
        spawn_bunch(ev.dst, ev.d);
        if (opts.eager_type4 || ++settles_since_cleanup >= 8) {
          run_type4(ev.d);
          settles_since_cleanup = 0;
        }
      } else {
        handle_door_strike(ev);
      }
    }

    if (!settled[static_cast<std::size_t>(tri.t_index)]) throw DisconnectedError{};

    // Gateway restarts for pockets that were sealed off.
    for (const auto& g : gateways) {
      std::vector<WeightedSite> collected;
      for (int b : cycle_bunches[static_cast<std::size_t>(g.pocket_cycle)])
        collected.push_back(
            {tri.vertices[static_cast<std::size_t>(b)], dv[static_cast<std::size_t>(b)]});
      if (collected.empty()) continue;
      std::vector<HullUnit> units;
      for (const auto& s : collected) {
        HullUnit u;
        u.sites = {s};
        units.push_back(std::move(u));
      }
      HullTree section = HullTree::build(std::move(units), g.restart);
      if (opts.rewind == EngineOptions::Rewind::Offset) {
        section.add_offset(-g.restart);
      } else {
        // Replay: rebuild the section at the restart radius from scratch.
        std::vector<HullUnit> re;
        for (const auto& s : collected) {
          HullUnit u;
          u.sites = {s};
          re.push_back(std::move(u));
        }
        section = HullTree::build(std::move(re), g.restart);
      }
      std::vector<WeightedSite> main_side;
      for (int b : cycle_bunches[static_cast<std::size_t>(g.main_cycle)])
        main_side.push_back(
            {tri.vertices[static_cast<std::size_t>(b)], dv[static_cast<std::size_t>(b)]});
      const auto& cor = dec.corridors[static_cast<std::size_t>(g.corridor)];
      std::vector<BoundaryElem> run;
      if (cor.doors[0].valid()) run.push_back({0, {cor.doors[0].seg.a, cor.doors[0].seg.b}});
      if (!main_side.empty() && !run.empty()) {
        Association as = merge_sections(collected, main_side, run);
        C()["assoc_invocations"] += 9;
        C()["icurve_fallbacks"] += static_cast<std::uint64_t>(as.icurve_fallbacks);
      }
      C()["gateway_restarts"]++;
      trace(2, g.restart, "gateway restart corridor=" + std::to_string(g.corridor));
    }

    // Path extraction through the predecessor chain.
    std::vector<Point> path;
    for (int v = tri.t_index; v >= 0; v = pred[static_cast<std::size_t>(v)])
      path.push_back(tri.vertices[static_cast<std::size_t>(v)]);
    std::reverse(path.begin(), path.end());
    res.distance = dv[static_cast<std::size_t>(tri.t_index)];
    res.path = std::move(path);
    std::uint64_t live_cycles = 0;
    for (std::size_t c = 0; c < cycles.size(); ++c)
      if (!cycle_dead[c]) ++live_cycles;
    C()["cycles_final"] = live_cycles;
    C()["wst_touches"] += wst.take_touches();
    C()["bridge_resplits"] += static_cast<std::uint64_t>(wst.resplit_count());
    return std::move(res);
  }
};

} // namespace

PathResult solve_instance(const Instance& inst, const EngineOptions& opts) {
  Engine eng(inst, opts);
  return eng.run();
}

} // namespace wavepath
