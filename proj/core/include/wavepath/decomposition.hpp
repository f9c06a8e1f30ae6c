#pragma once

#include <array>
#include <string>
#include <vector>

#include "wavepath/triangulate.hpp"

namespace wavepath {

// A convex chain with the triangulation vertex ids backing each point.
struct Chain {
  std::vector<int> vids;
  std::vector<Point> pts;

  std::size_t size() const { return pts.size(); }
  double length() const {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) s += dist(pts[i], pts[i + 1]);
    return s;
  }
  ConvexChain as_convex_chain() const { return {pts, true}; }
};

struct Door {
  std::array<int, 2> v{-1, -1}; // triangulation vertex ids
  Segment seg;
  bool valid() const { return v[0] >= 0; }
};

struct Funnel {
  int apex_vid = -1;
  Point apex;
  // Chains from the door endpoints to the apex (index 0 = door side 0).
  std::array<Chain, 2> chains;
};

struct Corridor {
  enum class Kind { Open, Closed };

  std::vector<int> triangles;      // maximal degree-2 dual path (may be empty)
  Kind kind = Kind::Open;
  std::array<int, 2> junctions{-1, -1}; // incident junction ids; [1] = -1 for pockets
  std::array<Door, 2> doors;            // enter/exit bounding edges
  std::array<Chain, 2> chains;          // hourglass side chains (open kind)
  std::array<Funnel, 2> funnels;        // closed kind: funnel per door
  double apex_distance = 0.0;           // geodesic distance between the two apices
  bool useful = false;
};

struct Junction {
  int triangle = -1;               // -1 for the degenerate s/t junctions
  std::vector<int> fan;            // triangles collapsed into this junction
  std::vector<int> corridors;      // incident corridor ids (with multiplicity)
  std::vector<std::array<int, 2>> edges; // bounding edges (vertex id pairs)
};

struct Decomposition {
  std::vector<Junction> junctions;
  std::vector<Corridor> corridors;
  int s_junction = -1, t_junction = -1; // the degenerate s/t nodes
  std::vector<int> owner;               // triangle -> junction id (>=0) or ~corridor id
  bool connected = false;               // s and t joined in the corridor graph

  bool owner_is_junction(int tri) const { return owner[tri] >= 0; }
  int owner_junction(int tri) const { return owner[tri]; }
  int owner_corridor(int tri) const { return ~owner[tri]; }
};

// Collapses the triangulation dual into junctions (degree-3 dual vertices
// plus the degenerate s/t fans) and corridors (maximal degree-2 paths),
// computes hourglasses/funnels and marks useful corridors.
Decomposition build_decomposition(const Triangulation& tri);

// Geodesic between two boundary points of a triangle sleeve described by
// its portal sequence (each portal oriented (left, right) in walk order).
std::vector<int> sleeve_geodesic(const std::vector<Point>& pts,
                                 const std::vector<std::array<int, 2>>& portals,
                                 int from, int to);

// Marks each corridor useful iff it lies on some simple s-t path in the
// corridor graph (biconnected components / block-cut tree). Throws
// std::runtime_error("no path exists") when s and t are disconnected.
void mark_useful(Decomposition& d);

std::string dump_decomposition(const Decomposition& d, const Triangulation& tri);

} // namespace wavepath
