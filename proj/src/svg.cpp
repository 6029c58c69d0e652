#include "perc/svg.hpp"

#include <fstream>
#include <stdexcept>

namespace perc {

namespace {

// Site (x, y) maps to center (4x, 4y) in quarter coordinates, matching
// the scaled-by-4 vertices of BoundaryCurve; the canvas flips y so larger
// lattice y is higher on screen. 10 units per quarter, 10-unit margin.
constexpr int kQuarter = 10;
constexpr int kMargin = 10;

struct Canvas {
  int qx0, qy1;  // quarter coords of the left edge / top edge
  int width, height;

  explicit Canvas(const BoxRegion& w) {
    qx0 = 4 * w.lo_x() - 3;
    qy1 = 4 * w.hi_y() + 3;
    width = (4 * (w.hi_x() - w.lo_x()) + 6) * kQuarter + 2 * kMargin;
    height = (4 * (w.hi_y() - w.lo_y()) + 6) * kQuarter + 2 * kMargin;
  }
  int px(int qx) const { return (qx - qx0) * kQuarter + kMargin; }
  int py(int qy) const { return (qy1 - qy) * kQuarter + kMargin; }
};

std::string header(const Canvas& c) {
  std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"";
  s += std::to_string(c.width);
  s += "\" height=\"";
  s += std::to_string(c.height);
  s += "\" viewBox=\"0 0 " + std::to_string(c.width) + " " + std::to_string(c.height) +
       "\" style=\"background:#ffffff\">\n";
  return s;
}

// Filled unit cells (half-width two quarters) for every spin-1 site.
void draw_cells(std::string& s, const Configuration& cfg, const Canvas& c) {
  for (Site p : cfg.window().sites()) {
    if (cfg.spin(p) != 1) continue;
    s += "<rect x=\"" + std::to_string(c.px(4 * p.x - 2)) + "\" y=\"" +
         std::to_string(c.py(4 * p.y + 2)) + "\" width=\"" + std::to_string(4 * kQuarter) +
         "\" height=\"" + std::to_string(4 * kQuarter) + "\" fill=\"#404040\"/>\n";
  }
}

void polyline(std::string& s, const std::vector<Site>& qpts, const Canvas& c, const char* color,
              bool close) {
  if (qpts.empty()) return;
  s += close ? "<polygon points=\"" : "<polyline points=\"";
  for (size_t i = 0; i < qpts.size(); ++i) {
    if (i) s += ' ';
    s += std::to_string(c.px(qpts[i].x)) + "," + std::to_string(c.py(qpts[i].y));
  }
  s += "\" fill=\"none\" stroke=\"";
  s += color;
  s += "\" stroke-width=\"4\"/>\n";
}

}  // namespace

std::string svg_render(const Configuration& cfg) {
  Canvas c(cfg.window());
  std::string s = header(c);
  draw_cells(s, cfg, c);
  s += "</svg>\n";
  return s;
}

std::string svg_render(const Configuration& cfg, const BoundaryCurve& curve) {
  Canvas c(cfg.window());
  std::string s = header(c);
  draw_cells(s, cfg, c);
  for (const BoundaryLoop& loop : curve.loops) {
    // Vertices are closed with the front repeated; the polygon closes itself.
    std::vector<Site> pts(loop.vertices.begin(),
                          loop.vertices.end() - (loop.vertices.size() > 1 ? 1 : 0));
    polyline(s, pts, c, loop.hole ? "#2060c0" : "#c03020", true);
  }
  s += "</svg>\n";
  return s;
}

std::string svg_render(const Configuration& cfg, const Necklet& necklet) {
  Canvas c(cfg.window());
  std::string s = header(c);
  draw_cells(s, cfg, c);
  std::vector<Site> pts;
  pts.reserve(necklet.circuit.sites.size());
  for (Site p : necklet.circuit.sites) pts.push_back({4 * p.x, 4 * p.y});
  polyline(s, pts, c, "#c03020", true);
  for (Site p : necklet.pearls)
    s += "<circle cx=\"" + std::to_string(c.px(4 * p.x)) + "\" cy=\"" +
         std::to_string(c.py(4 * p.y)) + "\" r=\"" + std::to_string(kQuarter) +
         "\" fill=\"#c03020\"/>\n";
  s += "</svg>\n";
  return s;
}

void write_svg(const std::string& svg, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << svg;
}

}  // namespace perc
