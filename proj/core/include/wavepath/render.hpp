#pragma once

#include <string>

#include "wavepath/instance.hpp"

namespace wavepath {

// Deterministic SVG renders for inspection and figure generation.
// Obstacles are filled polygons; decomposition triangles are colored by
// owner region; the path is a polyline; the wavefront at radius d is the
// set of live arcs reconstructed from a solver trace.
std::string render_domain(const Instance& inst);
std::string render_decomposition(const Instance& inst);
std::string render_path(const Instance& inst, const PathResult& result);
std::string render_wavefront(const Instance& inst, const PathResult& traced, double d);

} // namespace wavepath
