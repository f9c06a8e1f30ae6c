#pragma once

#include <array>
#include <set>
#include <string>
#include <vector>

#include "wavepath/instance.hpp"

namespace wavepath {

// Constrained triangulation of the free space. Obstacle edges are
// constrained; s and t are triangulation vertices.
struct Triangulation {
  struct Tri {
    std::array<int, 3> v;   // ccw
    std::array<int, 3> nbr; // nbr[e] shares edge (v[e], v[(e+1)%3]); -1 if none
  };

  std::vector<Point> vertices;
  std::vector<Tri> triangles;
  std::set<std::pair<int, int>> constrained; // (min, max) vertex index pairs
  int s_index = -1, t_index = -1;

  bool is_constrained(int a, int b) const {
    return constrained.count({std::min(a, b), std::max(a, b)}) > 0;
  }
};

// insert_sites=false leaves s and t out (raw free-space triangulation).
Triangulation triangulate(const Instance& inst, bool insert_sites = true);

// Id of a triangle containing p, ties broken toward the lowest id.
// Throws std::runtime_error when p is outside the triangulated region.
int locate(const Triangulation& tri, Point p);

// OFF-style vertex/triangle listing.
std::string dump_triangulation(const Triangulation& tri);

} // namespace wavepath
