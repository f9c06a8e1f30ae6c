#include <algorithm>
#include <cmath>
#include <random>

#include "wavepath/instance.hpp"

namespace wavepath {
namespace {

constexpr double kSide = 700.0;   // outer square; diagonal stays under 1000
constexpr double kClear = 2e-3;   // minimum feature separation

// Uniform double in [lo, hi) from the raw engine stream, so the byte
// stream is identical across standard library implementations.
double uni(std::mt19937_64& rng, double lo, double hi) {
  double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + u * (hi - lo);
}

struct Disc {
  Point c;
  double r;
};

} // namespace

Instance random_instance(std::uint64_t seed, std::size_t m, std::size_t k) {
  if (k < 3) throw std::runtime_error("k must be at least 3");
  std::mt19937_64 rng(seed);

  Instance inst;
  inst.outer = {{0.0, 0.0}, {kSide, 0.0}, {kSide, kSide}, {0.0, kSide}};

  double rmax = std::min(80.0, 180.0 / std::sqrt(static_cast<double>(m) + 1.0));
  double rmin = 0.4 * rmax;

  std::vector<Disc> discs;
  for (std::size_t h = 0; h < m; ++h) {
    bool placed = false;
    for (int attempt = 0; attempt < 5000 && !placed; ++attempt) {
      double r = uni(rng, rmin, rmax);
      double margin = r + kClear;
      Point c{uni(rng, margin, kSide - margin), uni(rng, margin, kSide - margin)};
      bool ok = true;
      for (const Disc& d : discs)
        if (dist(c, d.c) < r + d.r + kClear) {
          ok = false;
          break;
        }
      if (!ok) continue;
      discs.push_back({c, r});
      placed = true;
    }
    if (!placed) throw std::runtime_error("could not place");
  }

  double min_gap = 0.25 * (2.0 * M_PI / static_cast<double>(k));
  for (const Disc& d : discs) {
    std::vector<double> angles;
    for (int attempt = 0; attempt < 200; ++attempt) {
      angles.clear();
      for (std::size_t i = 0; i < k; ++i) angles.push_back(uni(rng, 0.0, 2.0 * M_PI));
      std::sort(angles.begin(), angles.end());
      bool ok = true;
      for (std::size_t i = 0; i + 1 < k; ++i)
        if (angles[i + 1] - angles[i] < min_gap) ok = false;
      if (angles.front() + 2.0 * M_PI - angles.back() < min_gap) ok = false;
      if (ok) break;
      angles.clear();
    }
    if (angles.empty()) throw std::runtime_error("could not place");
    // Vertices on a circle in increasing angle are ccw; holes are cw.
    std::vector<Point> hole;
    for (double a : angles)
      hole.push_back({d.c.x + d.r * std::cos(a), d.c.y + d.r * std::sin(a)});
    std::reverse(hole.begin(), hole.end());
    inst.holes.push_back(std::move(hole));
  }

  auto place_point = [&](void) -> Point {
    for (int attempt = 0; attempt < 20000; ++attempt) {
      Point p{uni(rng, kClear, kSide - kClear), uni(rng, kClear, kSide - kClear)};
      bool ok = true;
      for (const Disc& d : discs)
        if (dist(p, d.c) < d.r + kClear) {
          ok = false;
          break;
        }
      if (ok) return p;
    }
    throw std::runtime_error("could not place");
  };
  inst.s = place_point();
  for (int attempt = 0; attempt < 100; ++attempt) {
    inst.t = place_point();
    if (dist(inst.s, inst.t) >= 1.0) break;
  }

  return inst;
}

} // namespace wavepath
