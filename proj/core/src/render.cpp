#include "wavepath/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "wavepath/decomposition.hpp"
#include "wavepath/triangulate.hpp"

namespace wavepath {
namespace {

struct Frame {
  double x0, y0, x1, y1;
};

Frame frame_of(const Instance& inst) {
  Frame f{1e300, 1e300, -1e300, -1e300};
  for (Point p : inst.outer) {
    f.x0 = std::min(f.x0, p.x);
    f.y0 = std::min(f.y0, p.y);
    f.x1 = std::max(f.x1, p.x);
    f.y1 = std::max(f.y1, p.y);
  }
  double mx = 0.05 * (f.x1 - f.x0), my = 0.05 * (f.y1 - f.y0);
  return {f.x0 - mx, f.y0 - my, f.x1 + mx, f.y1 + my};
}

std::ostringstream svg_open(const Frame& f) {
  std::ostringstream os;
  os.precision(12);
  // The y axis is flipped so the geometry reads in math orientation.
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << f.x0 << " " << -f.y1
     << " " << f.x1 - f.x0 << " " << f.y1 - f.y0 << "\">\n"
     << "<g transform=\"scale(1,-1)\" stroke-width=\"" << 0.002 * (f.x1 - f.x0)
     << "\">\n";
  return os;
}

void svg_close(std::ostringstream& os) { os << "</g>\n</svg>\n"; }

void polygon(std::ostringstream& os, const std::vector<Point>& pts, const char* cls,
             const char* fill, const char* stroke) {
  os << "<polygon class=\"" << cls << "\" fill=\"" << fill << "\" stroke=\"" << stroke
     << "\" points=\"";
  for (std::size_t i = 0; i < pts.size(); ++i)
    os << (i ? " " : "") << pts[i].x << "," << pts[i].y;
  os << "\"/>\n";
}

void domain_layers(std::ostringstream& os, const Instance& inst) {
  polygon(os, inst.outer, "outer", "#f4f4f0", "#333333");
  for (const auto& h : inst.holes) polygon(os, h, "hole", "#8a8a8a", "#333333");
}

} // namespace

std::string render_domain(const Instance& inst) {
  auto os = svg_open(frame_of(inst));
  domain_layers(os, inst);
  os << "<circle class=\"site\" cx=\"" << inst.s.x << "\" cy=\"" << inst.s.y
     << "\" r=\"0.5%\" fill=\"#2060c0\"/>\n";
  os << "<circle class=\"site\" cx=\"" << inst.t.x << "\" cy=\"" << inst.t.y
     << "\" r=\"0.5%\" fill=\"#c04020\"/>\n";
  svg_close(os);
  return os.str();
}

std::string render_decomposition(const Instance& inst) {
  auto tri = triangulate(inst);
  auto dec = build_decomposition(tri);
  auto os = svg_open(frame_of(inst));
  domain_layers(os, inst);
  static const char* kJunction = "#e8b84b";
  static const char* kCorridor[] = {"#7db8e8", "#8fd4a8", "#d49ae0", "#e8a98f",
                                    "#a8c4e0", "#c4e08f"};
  for (std::size_t t = 0; t < tri.triangles.size(); ++t) {
    const auto& T = tri.triangles[t];
    std::vector<Point> pts{tri.vertices[static_cast<std::size_t>(T.v[0])],
                           tri.vertices[static_cast<std::size_t>(T.v[1])],
                           tri.vertices[static_cast<std::size_t>(T.v[2])]};
    const char* fill = dec.owner_is_junction(static_cast<int>(t))
                           ? kJunction
                           : kCorridor[dec.owner_corridor(static_cast<int>(t)) % 6];
    polygon(os, pts, "tri", fill, "#666666");
  }
  svg_close(os);
  return os.str();
}

std::string render_path(const Instance& inst, const PathResult& result) {
  auto os = svg_open(frame_of(inst));
  domain_layers(os, inst);
  os << "<polyline class=\"path\" fill=\"none\" stroke=\"#c02020\" points=\"";
  for (std::size_t i = 0; i < result.path.size(); ++i)
    os << (i ? " " : "") << result.path[i].x << "," << result.path[i].y;
  os << "\"/>\n";
  svg_close(os);
  return os.str();
}

std::string render_wavefront(const Instance& inst, const PathResult& traced, double d) {
  auto os = svg_open(frame_of(inst));
  domain_layers(os, inst);
  // Replay the settle records: every source reached before radius d
  // contributes a live arc of radius d - w.
  for (const auto& rec : traced.trace) {
    if (rec.type != 3 && rec.type != 0) continue;
    double x, y, w;
    int v, pred;
    if (rec.type == 0) continue;
    if (std::sscanf(rec.detail.c_str(), "v=%d x=%lf y=%lf w=%lf pred=%d", &v, &x, &y, &w,
                    &pred) != 5)
      continue;
    if (w >= d) continue;
    os << "<circle class=\"arc\" cx=\"" << x << "\" cy=\"" << y << "\" r=\"" << d - w
       << "\" fill=\"none\" stroke=\"#2060c0\"/>\n";
  }
  // The source itself when it was never re-recorded as a settle.
  bool has_origin = false;
  for (const auto& rec : traced.trace)
    if (rec.type == 3 && rec.detail.find("pred=-1") != std::string::npos) has_origin = true;
  if (!has_origin && d > 0) {
    os << "<circle class=\"arc\" cx=\"" << inst.s.x << "\" cy=\"" << inst.s.y << "\" r=\""
       << d << "\" fill=\"none\" stroke=\"#2060c0\"/>\n";
  }
  svg_close(os);
  return os.str();
}

} // namespace wavepath
