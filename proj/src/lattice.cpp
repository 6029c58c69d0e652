#include "perc/lattice.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <set>

namespace perc {

bool adjacent(Site a, Site b, Kind kind) {
  int dx = std::abs(a.x - b.x);
  int dy = std::abs(a.y - b.y);
  if (dx == 0 && dy == 0) return false;  // no self-adjacency
  if (kind == Kind::nearest) return dx + dy == 1;
  return dx <= 1 && dy <= 1;
}

std::span<const Site> neighbor_offsets(Kind kind) {
  static const std::array<Site, 4> near = {{{0, -1}, {-1, 0}, {1, 0}, {0, 1}}};
  static const std::array<Site, 8> star = {
      {{-1, -1}, {0, -1}, {1, -1}, {-1, 0}, {1, 0}, {-1, 1}, {0, 1}, {1, 1}}};
  if (kind == Kind::nearest) return near;
  return star;
}

std::vector<Site> ring_sites(int r, Site center) {
  if (r < 0) throw std::invalid_argument("ring radius must be >= 0");
  if (r == 0) return {center};
  std::vector<Site> out;
  out.reserve((size_t)8 * r);
  for (int x = center.x - r; x <= center.x + r; ++x) out.push_back({x, center.y - r});
  for (int y = center.y - r + 1; y <= center.y + r - 1; ++y) {
    out.push_back({center.x - r, y});
    out.push_back({center.x + r, y});
  }
  for (int x = center.x - r; x <= center.x + r; ++x) out.push_back({x, center.y + r});
  return out;
}

std::vector<Site> BoxRegion::sites() const {
  std::vector<Site> out;
  out.reserve((size_t)site_count());
  for (int y = lo_y(); y <= hi_y(); ++y)
    for (int x = lo_x(); x <= hi_x(); ++x) out.push_back({x, y});
  return out;
}

Annulus::Annulus(BoxRegion in, BoxRegion out) : inner(in), outer(out) {
  // The inner box together with its star boundary must lie strictly inside
  // the outer box, so circuits in the annulus have room on both sides.
  BoxRegion grown{in.half_width + 1, in.center};
  bool ok = grown.lo_x() > out.lo_x() && grown.hi_x() < out.hi_x() &&
            grown.lo_y() > out.lo_y() && grown.hi_y() < out.hi_y();
  if (!ok) throw std::invalid_argument("annulus: inner box plus star boundary must sit strictly inside outer box");
}

std::vector<Site> Annulus::sites() const {
  std::vector<Site> out;
  out.reserve((size_t)(outer.site_count() - inner.site_count()));
  for (int y = outer.lo_y(); y <= outer.hi_y(); ++y)
    for (int x = outer.lo_x(); x <= outer.hi_x(); ++x)
      if (!inner.contains({x, y})) out.push_back({x, y});
  return out;
}

bool is_path(std::span<const Site> sites, Kind kind) {
  if (sites.empty()) return false;
  for (size_t i = 0; i + 1 < sites.size(); ++i)
    if (!adjacent(sites[i], sites[i + 1], kind)) return false;
  return true;
}

bool is_self_avoiding(std::span<const Site> sites) {
  std::vector<Site> v(sites.begin(), sites.end());
  std::sort(v.begin(), v.end());
  return std::adjacent_find(v.begin(), v.end()) == v.end();
}

bool is_circuit(std::span<const Site> sites, Kind kind) {
  if (sites.size() < 2) return false;
  return is_path(sites, kind) && adjacent(sites.back(), sites.front(), kind);
}

bool is_self_avoiding_circuit(std::span<const Site> sites, Kind kind) {
  return is_circuit(sites, kind) && is_self_avoiding(sites);
}

std::vector<Site> boundary(std::span<const Site> b, Kind kind) {
  std::vector<Site> members(b.begin(), b.end());
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  std::set<Site> out;
  for (Site s : members)
    for (Site d : neighbor_offsets(kind)) {
      Site n{s.x + d.x, s.y + d.y};
      if (!std::binary_search(members.begin(), members.end(), n)) out.insert(n);
    }
  return {out.begin(), out.end()};
}

PathTrace row_path(int h, int m) {
  if (m < 0) throw std::invalid_argument("row_path: m must be >= 0");
  PathTrace p;
  p.kind = Kind::nearest;
  for (int x = -(m + 1); x <= m + 1; ++x) p.sites.push_back({x, h});
  return p;
}

bool contains_site(std::span<const Site> sorted_sites, Site s) {
  return std::binary_search(sorted_sites.begin(), sorted_sites.end(), s);
}

std::vector<Site> sorted_unique(std::vector<Site> sites) {
  std::sort(sites.begin(), sites.end());
  sites.erase(std::unique(sites.begin(), sites.end()), sites.end());
  return sites;
}

namespace {

// Flood fill on the half-integer refinement of the lattice. A circuit's
// curve is the union of the straight segments between consecutive sites;
// in doubled coordinates each segment covers its two endpoints and its
// midpoint. Unit axis moves between uncovered doubled points never cross
// the curve. A unit diagonal move crosses it exactly when the opposite
// diagonal of its grid square is half of a diagonal curve segment, so those
// pairs are recorded and checked. Everything is integer arithmetic; the
// result is the exact set of enclosed lattice sites.
struct DoubledFill {
  int x0, y0, w, h;  // doubled-coordinate bounds and extents
  std::vector<std::uint8_t> covered, reached;
  std::vector<std::uint8_t> diag_mask;  // per point: blocked square-diagonals

  // Direction encoding for diag_mask bits: index over (sx,sy) in
  // {(+,+),(+,-),(-,+),(-,-)}; bit set at odd-odd midpoint M means the
  // half-segment from M to M+(sx,sy) belongs to a diagonal curve step.
  static int dir_bit(int sx, int sy) { return (sx < 0 ? 2 : 0) | (sy < 0 ? 1 : 0); }

  size_t idx(int x, int y) const { return (size_t)(y - y0) * w + (size_t)(x - x0); }
  bool inside(int x, int y) const { return x >= x0 && x < x0 + w && y >= y0 && y < y0 + h; }

  explicit DoubledFill(std::span<const Site> circuit, Kind kind) {
    int minx = circuit[0].x, maxx = circuit[0].x, miny = circuit[0].y, maxy = circuit[0].y;
    for (Site s : circuit) {
      minx = std::min(minx, s.x);
      maxx = std::max(maxx, s.x);
      miny = std::min(miny, s.y);
      maxy = std::max(maxy, s.y);
    }
    x0 = 2 * (minx - 1);
    y0 = 2 * (miny - 1);
    w = 2 * (maxx - minx + 2) + 1;
    h = 2 * (maxy - miny + 2) + 1;
    covered.assign((size_t)w * h, 0);
    reached.assign((size_t)w * h, 0);
    diag_mask.assign((size_t)w * h, 0);

    for (size_t i = 0; i < circuit.size(); ++i) {
      Site a = circuit[i];
      Site b = circuit[(i + 1) % circuit.size()];
      if (!adjacent(a, b, kind)) throw std::invalid_argument("circuit_interior: sequence is not a circuit");
      int ax = 2 * a.x, ay = 2 * a.y, bx = 2 * b.x, by = 2 * b.y;
      int mx = a.x + b.x, my = a.y + b.y;
      covered[idx(ax, ay)] = covered[idx(bx, by)] = covered[idx(mx, my)] = 1;
      if (a.x != b.x && a.y != b.y) {
        // Diagonal step: record both half-segments at the midpoint and at
        // each endpoint, keyed by the point the half-segment leaves from.
        int sx = bx > ax ? 1 : -1, sy = by > ay ? 1 : -1;
        diag_mask[idx(ax, ay)] |= (std::uint8_t)(1 << dir_bit(sx, sy));
        diag_mask[idx(mx, my)] |= (std::uint8_t)(1 << dir_bit(sx, sy));
        diag_mask[idx(mx, my)] |= (std::uint8_t)(1 << dir_bit(-sx, -sy));
        diag_mask[idx(bx, by)] |= (std::uint8_t)(1 << dir_bit(-sx, -sy));
      }
    }

    // Flood from the padded border; it lies strictly outside the curve.
    std::vector<std::pair<int, int>> stack;
    auto push = [&](int x, int y) {
      size_t i = idx(x, y);
      if (!covered[i] && !reached[i]) {
        reached[i] = 1;
        stack.emplace_back(x, y);
      }
    };
    for (int x = x0; x < x0 + w; ++x) {
      push(x, y0);
      push(x, y0 + h - 1);
    }
    for (int y = y0; y < y0 + h; ++y) {
      push(x0, y);
      push(x0 + w - 1, y);
    }
    while (!stack.empty()) {
      auto [x, y] = stack.back();
      stack.pop_back();
      static const int ax4[4] = {1, -1, 0, 0};
      static const int ay4[4] = {0, 0, 1, -1};
      for (int k = 0; k < 4; ++k) {
        int nx = x + ax4[k], ny = y + ay4[k];
        if (inside(nx, ny)) push(nx, ny);
      }
      for (int sx = -1; sx <= 1; sx += 2)
        for (int sy = -1; sy <= 1; sy += 2) {
          int nx = x + sx, ny = y + sy;
          if (!inside(nx, ny)) continue;
          // The opposite diagonal of this unit square runs from (x+sx,y)
          // to (x,y+sy); the move is barred iff that pair is half of a
          // diagonal curve step.
          if (diag_mask[idx(x + sx, y)] & (1 << dir_bit(-sx, sy))) continue;
          push(nx, ny);
        }
    }
  }

  bool enclosed_site(Site s) const {
    int dx = 2 * s.x, dy = 2 * s.y;
    if (!inside(dx, dy)) return false;
    size_t i = idx(dx, dy);
    return !covered[i] && !reached[i];
  }
};

}  // namespace

std::vector<Site> circuit_interior(const Circuit& c) {
  if (!is_self_avoiding_circuit(c.sites, c.kind))
    throw std::invalid_argument("circuit_interior: not a self-avoiding circuit");
  DoubledFill fill(c.sites, c.kind);
  std::vector<Site> out;
  for (int y = fill.y0 / 2; y <= (fill.y0 + fill.h - 1) / 2; ++y)
    for (int x = fill.x0 / 2; x <= (fill.x0 + fill.w - 1) / 2; ++x)
      if (fill.enclosed_site({x, y})) out.push_back({x, y});
  return out;
}

CircuitRegions interior_exterior(const Circuit& c, const BoxRegion& window) {
  if (!is_self_avoiding_circuit(c.sites, c.kind))
    throw std::invalid_argument("interior_exterior: not a self-avoiding circuit");
  DoubledFill fill(c.sites, c.kind);
  std::vector<Site> on = sorted_unique(c.sites);
  CircuitRegions out;
  for (int y = window.lo_y(); y <= window.hi_y(); ++y)
    for (int x = window.lo_x(); x <= window.hi_x(); ++x) {
      Site s{x, y};
      if (contains_site(on, s)) continue;
      if (fill.enclosed_site(s))
        out.interior.push_back(s);
      else
        out.exterior.push_back(s);
    }
  return out;
}

}  // namespace perc
