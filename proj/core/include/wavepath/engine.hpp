#pragma once

#include <vector>

#include "wavepath/decomposition.hpp"
#include "wavepath/hull_trees.hpp"
#include "wavepath/instance.hpp"
#include "wavepath/triangulate.hpp"

namespace wavepath {

// Exact visibility walks across the triangulation. A segment is free when
// it can be traversed from triangle to triangle without crossing a
// constrained edge; passing exactly through an intermediate vertex counts
// as blocked (the same length is always reachable via that vertex).
class FreeWalk {
 public:
  explicit FreeWalk(const Triangulation& tri);

  bool vertex_sees_vertex(int u, int v) const;
  // Visibility of a point on the triangulation edge (ea, eb) from u.
  bool vertex_sees_edge_point(int u, Point p, int ea, int eb) const;

 private:
  const Triangulation& tri_;
  std::vector<std::vector<int>> incident_; // vertex -> triangles
};

// A piece of a contiguous boundary run: a corridor convex chain or a
// (two-point) door segment.
struct BoundaryElem {
  int id = -1;
  std::vector<Point> pts;
};

struct IIntersectHit {
  bool found = false;
  std::size_t elem = 0; // index into the run
  Point point;
  double reach = 0.0; // weighted distance at the hit (curve parameter)
};

// First element of the run hit by the equal-arrival curve, walking the
// curve outward by its weighted-distance parameter.
IIntersectHit iintersect(const Bisector& curve, const std::vector<BoundaryElem>& run);

// Element-to-bunch association over one contiguous boundary run. Bunches
// are in wavefront order; owner[e] indexes the bunch whose wavefront
// reaches element e first.
struct Association {
  std::vector<BoundaryElem> elements;
  std::vector<WeightedSite> bunches;
  std::vector<int> owner;
  int icurve_fallbacks = 0; // binary searches that degraded to linear scans
};

// Reassigns elements between the bunch prefix [0, split) and the suffix,
// binary-searching the suffix's inter-bunch equal-arrival curves, then
// repairing ownership to the per-element proximity optimum.
void assoc_a_to_b(Association& as, std::size_t split);

// Full merger of two wavefront sections over a shared run: the reversal
// combinations of assoc_a_to_b in both directions.
Association merge_sections(std::vector<WeightedSite> a, std::vector<WeightedSite> b,
                           std::vector<BoundaryElem> elems);

// Earliest future contact between non-adjacent grown discs in wavefront
// order, with the bunches strictly between the pair whose whole front is
// already dominated (safe to drop).
struct Type4Outcome {
  bool found = false;
  double d = 0.0;
  Point meet;
  std::vector<std::size_t> deleted;
};
Type4Outcome type4_first_contact(const std::vector<WeightedSite>& bunches, double dnow);

struct EngineOptions {
  enum class Rewind { Offset, Replay };
  Rewind rewind = Rewind::Offset;
  bool collect_trace = false;
  bool eager_type4 = true; // false defers hull-contact cleanup to strikes
  bool full_sweep = false; // propagate past t until the domain is exhausted
};

PathResult solve_instance(const Instance& inst, const EngineOptions& opts = {});

} // namespace wavepath
