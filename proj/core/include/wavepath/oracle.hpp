#pragma once

#include <utility>
#include <vector>

#include "wavepath/instance.hpp"

namespace wavepath {

struct DisconnectedError : std::runtime_error {
  DisconnectedError() : std::runtime_error("no path exists") {}
};

// Nodes are the obstacle vertices plus s and t; edges join mutually
// visible pairs, weighted by Euclidean distance. Grazing contact along an
// obstacle edge counts as visible.
struct VisGraph {
  std::vector<Point> nodes;
  std::vector<std::vector<std::pair<int, double>>> adj; // undirected
  int s_node = -1, t_node = -1;
};

VisGraph visibility_graph(const Instance& inst);

// True if the open segment uv stays in free space (obstacle boundaries
// count as free).
bool segment_visible(const Instance& inst, Point u, Point v);

// Exact shortest path on the visibility graph. Deterministic: equal-length
// alternatives resolve toward the lexicographically smallest predecessor.
// Throws DisconnectedError.
PathResult oracle_distance(const Instance& inst);

} // namespace wavepath
