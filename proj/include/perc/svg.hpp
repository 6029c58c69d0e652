#pragma once

#include <filesystem>
#include <string>

#include "perc/clusters.hpp"
#include "perc/flows.hpp"
#include "perc/lattice.hpp"

namespace perc {

// Deterministic SVG rendering. One lattice step is 40 user units (so one
// quarter step of a boundary curve is 10); every emitted coordinate is an
// integer, so output is byte-stable across platforms. Spin-1 sites become
// filled <rect> cells; curves and circuits are overlaid as polylines.
std::string svg_render(const Configuration& cfg);
std::string svg_render(const Configuration& cfg, const BoundaryCurve& curve);
std::string svg_render(const Configuration& cfg, const Necklet& necklet);

void write_svg(const std::string& svg, const std::filesystem::path& path);

}  // namespace perc
