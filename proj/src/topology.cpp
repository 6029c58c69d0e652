#include "perc/topology.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

namespace perc {

namespace {

long long cross2(Site a, Site b, Site c) {
  return (long long)(a.x - c.x) * (b.y - c.y) - (long long)(b.x - c.x) * (a.y - c.y);
}

// Octant index of p around c when the offset is axis or diagonal aligned,
// -1 otherwise. Octant k corresponds to the exact angle k * pi/4.
int exact_octant(Site p, Site c) {
  int dx = p.x - c.x, dy = p.y - c.y;
  if (dx == 0 && dy == 0) throw std::invalid_argument("winding: walk touches the center");
  if (dy == 0) return dx > 0 ? 0 : 4;
  if (dx == 0) return dy > 0 ? 2 : 6;
  if (std::abs(dx) != std::abs(dy)) return -1;
  if (dx > 0) return dy > 0 ? 1 : 7;
  return dy > 0 ? 3 : 5;
}

double angle_of(Site p, Site c) {
  double a = std::atan2((double)(p.y - c.y), (double)(p.x - c.x));
  if (a < 0) a += 2.0 * std::numbers::pi;
  return a;
}

}  // namespace

int ray_crossing_sign(Site a, Site b, Site center) {
  if (a == center || b == center)
    throw std::invalid_argument("winding: walk touches the center");
  bool above_a = a.y >= center.y;  // on-line points count as above
  bool above_b = b.y >= center.y;
  if (above_a == above_b) return 0;
  long long r = cross2(a, b, center);
  if (r == 0) throw std::invalid_argument("winding: segment passes through the center");
  int dy = b.y - a.y;
  if (dy > 0) return r > 0 ? 1 : 0;
  return r < 0 ? -1 : 0;
}

long long winding_closed(std::span<const Site> walk, Site center) {
  if (walk.empty()) throw std::invalid_argument("winding: empty walk");
  for (Site s : walk)
    if (s == center) throw std::invalid_argument("winding: walk touches the center");
  long long total = 0;
  for (size_t i = 0; i < walk.size(); ++i)
    total += ray_crossing_sign(walk[i], walk[(i + 1) % walk.size()], center);
  return total;
}

WindingValue angle_fraction(Site from, Site to, Site center) {
  WindingValue w;
  int oa = exact_octant(from, center);
  int ob = exact_octant(to, center);
  if (oa >= 0 && ob >= 0) {
    w.exact = true;
    w.eighths = ob - oa;
    w.fraction = w.eighths / 8.0;
  } else {
    w.exact = false;
    w.eighths = 0;
    w.fraction = (angle_of(to, center) - angle_of(from, center)) / (2.0 * std::numbers::pi);
  }
  return w;
}

WindingValue winding_open(std::span<const Site> walk, Site center) {
  if (walk.empty()) throw std::invalid_argument("winding: empty walk");
  WindingValue w = angle_fraction(walk.front(), walk.back(), center);
  for (Site s : walk)
    if (s == center) throw std::invalid_argument("winding: walk touches the center");
  for (size_t i = 0; i + 1 < walk.size(); ++i)
    w.crossings += ray_crossing_sign(walk[i], walk[i + 1], center);
  return w;
}

Orientation classify(const WindingValue& w) {
  if (w.exact) {
    long long v = w.crossings * 8 + w.eighths;
    if (v < 0) return Orientation::clockwise;
    if (v > 0) return Orientation::counterclockwise;
    return Orientation::neutral;
  }
  double t = w.total();
  if (t < -kOrientationGuard) return Orientation::clockwise;
  if (t > kOrientationGuard) return Orientation::counterclockwise;
  return Orientation::neutral;
}

Orientation orientation_around(std::span<const Site> walk, Site center) {
  long long w = winding_closed(walk, center);
  if (w < 0) return Orientation::clockwise;
  if (w > 0) return Orientation::counterclockwise;
  return Orientation::neutral;
}

std::vector<Site> erase_loops_keep_winding(std::vector<Site> walk, Site center) {
  if (winding_closed(walk, center) == 0)
    throw std::invalid_argument("loop erasure needs a walk with nonzero winding");
  while (true) {
    // Earliest revisit: smallest j whose site already occurred, paired with
    // its latest earlier occurrence i.
    std::map<Site, int> seen;
    int i = -1, j = -1;
    for (int k = 0; k < (int)walk.size(); ++k) {
      auto it = seen.find(walk[k]);
      if (it != seen.end()) {
        i = it->second;
        j = k;
        break;
      }
      seen[walk[k]] = k;
    }
    if (j < 0) return walk;  // self-avoiding

    std::vector<Site> loop(walk.begin() + i, walk.begin() + j);
    std::vector<Site> rest(walk.begin(), walk.begin() + i + 1);
    rest.insert(rest.end(), walk.begin() + j + 1, walk.end());

    long long w_loop = winding_closed(loop, center);
    long long w_rest = rest.empty() ? 0 : winding_closed(rest, center);
    // Their windings add up to the original. Site-avoidance does not stop a
    // diagonal step from crossing another one geometrically, so a terminal
    // circuit with EVEN winding would not enclose the center by parity; keep
    // an odd-winding sub-walk whenever one exists (odd = odd + even, so odd
    // input always offers one and parity is preserved to the end), otherwise
    // any nonzero one.
    const bool loop_odd = (w_loop % 2) != 0;
    const bool rest_odd = (w_rest % 2) != 0;
    if (loop_odd != rest_odd)
      walk = loop_odd ? std::move(loop) : std::move(rest);
    else if (w_loop != 0 && w_rest != 0)
      walk = loop.size() < rest.size() ? std::move(loop) : std::move(rest);
    else if (w_rest != 0)
      walk = std::move(rest);
    else
      walk = std::move(loop);
  }
}

bool encircles_box(const Circuit& c, const BoxRegion& box) {
  for (Site s : c.sites)
    if (box.contains(s)) return false;
  return winding_closed(c.sites, box.center) != 0;
}

namespace {

// Dense allow-grid over a bounding box; cells index row-major.
struct AllowGrid {
  BoxRegion bounds;
  std::vector<std::uint8_t> ok;

  explicit AllowGrid(BoxRegion b) : bounds(b), ok((size_t)b.site_count(), 0) {}

  size_t cell(Site s) const {
    return (size_t)(s.y - bounds.lo_y()) * bounds.side() + (size_t)(s.x - bounds.lo_x());
  }
  bool allowed(Site s) const { return bounds.contains(s) && ok[cell(s)]; }
  Site site_of(size_t c) const {
    return {bounds.lo_x() + (int)(c % bounds.side()), bounds.lo_y() + (int)(c / bounds.side())};
  }
};

// Cut sites: allowed sites on the +x ray from the center, ascending x.
// Every walk that winds around the center crosses the ray, and each
// crossing segment has an endpoint on the ray line; for unit and diagonal
// steps that endpoint lies at the crossing itself, so it is a cut site.
std::vector<Site> cut_sites(const AllowGrid& g, Site center) {
  std::vector<Site> cuts;
  for (int x = std::max(center.x + 1, g.bounds.lo_x()); x <= g.bounds.hi_x(); ++x)
    if (center.y >= g.bounds.lo_y() && center.y <= g.bounds.hi_y() && g.allowed({x, center.y}))
      cuts.push_back({x, center.y});
  return cuts;
}

void require_in_window(const Configuration& cfg, const BoxRegion& box, const char* what) {
  if (!cfg.window().contains({box.lo_x(), box.lo_y()}) ||
      !cfg.window().contains({box.hi_x(), box.hi_y()}))
    throw std::invalid_argument(std::string(what) + ": region extends beyond the configuration window");
}

}  // namespace

namespace {

void require_box_inside(const BoxRegion& small, const BoxRegion& big, const char* what) {
  if (!big.contains({small.lo_x(), small.lo_y()}) || !big.contains({small.hi_x(), small.hi_y()}))
    throw std::invalid_argument(std::string(what) + ": delta must lie inside the inner box");
}

}  // namespace

std::optional<Circuit> find_monochrome_circuit(const Configuration& cfg, const BoxRegion& delta,
                                               const Annulus& region, std::uint8_t spin,
                                               Kind kind) {
  require_in_window(cfg, region.outer, "find_monochrome_circuit");
  require_box_inside(delta, region.inner, "find_monochrome_circuit");
  const Site center = delta.center;

  AllowGrid grid(region.outer);
  for (int y = region.outer.lo_y(); y <= region.outer.hi_y(); ++y)
    for (int x = region.outer.lo_x(); x <= region.outer.hi_x(); ++x) {
      Site s{x, y};
      if (region.contains(s) && cfg.spin(s) == spin) grid.ok[grid.cell(s)] = 1;
    }

  std::vector<Site> cuts = cut_sites(grid, center);
  if (cuts.empty()) return std::nullopt;

  const int max_level = (int)cuts.size() + 2;
  const int nlevels = 2 * max_level + 1;
  const size_t ncells = grid.ok.size();
  auto state_of = [&](size_t cell, int level) { return cell * nlevels + (size_t)(level + max_level); };

  std::vector<int> parent(ncells * nlevels);
  std::vector<size_t> queue;

  for (Site start : cuts) {
    std::fill(parent.begin(), parent.end(), -1);
    queue.clear();
    const size_t start_cell = grid.cell(start);
    const size_t start_state = state_of(start_cell, 0);
    parent[start_state] = (int)start_state;  // self-parent marks the root
    queue.push_back(start_state);

    size_t found = SIZE_MAX;
    for (size_t head = 0; head < queue.size() && found == SIZE_MAX; ++head) {
      size_t st = queue[head];
      size_t cell = st / nlevels;
      int level = (int)(st % nlevels) - max_level;
      Site here = grid.site_of(cell);
      for (Site d : neighbor_offsets(kind)) {
        Site next{here.x + d.x, here.y + d.y};
        if (!grid.allowed(next)) continue;
        int nl = level + ray_crossing_sign(here, next, center);
        if (nl < -max_level || nl > max_level) continue;
        size_t ns = state_of(grid.cell(next), nl);
        if (parent[ns] >= 0) continue;
        parent[ns] = (int)st;
        // Odd net crossing only: an even-winding walk can loop-erase to a
        // circuit that fails to enclose the center by parity, and whenever
        // any enclosing circuit exists a winding +-1 one does too.
        if (next == start && (nl % 2) != 0) {
          found = ns;
          break;
        }
        queue.push_back(ns);
      }
    }
    if (found == SIZE_MAX) continue;

    std::vector<Site> walk;
    for (size_t st = found; st != start_state; st = (size_t)parent[st])
      walk.push_back(grid.site_of(st / nlevels));
    walk.push_back(start);
    std::reverse(walk.begin(), walk.end());
    walk.pop_back();  // closed-walk convention: front not repeated at back

    std::vector<Site> circuit = erase_loops_keep_winding(std::move(walk), center);
    if (winding_closed(circuit, center) < 0) std::reverse(circuit.begin(), circuit.end());
    return Circuit{std::move(circuit), kind};
  }
  return std::nullopt;
}

std::optional<MixedCircuit> find_mixed_circuit(const Configuration& cfg, const BoxRegion& delta,
                                               const Annulus& region) {
  require_in_window(cfg, region.outer, "find_mixed_circuit");
  require_box_inside(delta, region.inner, "find_mixed_circuit");
  const Site center = delta.center;

  AllowGrid grid(region.outer);
  for (int y = region.outer.lo_y(); y <= region.outer.hi_y(); ++y)
    for (int x = region.outer.lo_x(); x <= region.outer.hi_x(); ++x)
      if (region.contains({x, y})) grid.ok[grid.cell({x, y})] = 1;

  std::vector<Site> cuts = cut_sites(grid, center);
  if (cuts.empty()) return std::nullopt;

  // Steps: star everywhere except between two 0s, which must be nearest
  // (a 0 segment is a nearest path; junction adjacencies are star).
  auto step_ok = [&](Site a, Site b) {
    if (cfg.spin(a) == 0 && cfg.spin(b) == 0) return adjacent(a, b, Kind::nearest);
    return true;  // caller iterates star offsets
  };

  const int max_level = (int)cuts.size() + 2;
  const int nlevels = 2 * max_level + 1;
  const size_t ncells = grid.ok.size();
  // State = (cell, level, spin switches so far); switch budget is 2.
  auto state_of = [&](size_t cell, int level, int sw) {
    return (cell * nlevels + (size_t)(level + max_level)) * 3 + (size_t)sw;
  };

  std::vector<int> parent(ncells * nlevels * 3);
  std::vector<size_t> queue;

  for (Site start : cuts) {
    std::fill(parent.begin(), parent.end(), -1);
    queue.clear();
    const size_t start_state = state_of(grid.cell(start), 0, 0);
    parent[start_state] = (int)start_state;
    queue.push_back(start_state);

    size_t found = SIZE_MAX;
    for (size_t head = 0; head < queue.size() && found == SIZE_MAX; ++head) {
      size_t st = queue[head];
      int sw = (int)(st % 3);
      size_t cell = (st / 3) / nlevels;
      int level = (int)((st / 3) % nlevels) - max_level;
      Site here = grid.site_of(cell);
      for (Site d : neighbor_offsets(Kind::star)) {
        Site next{here.x + d.x, here.y + d.y};
        if (!grid.allowed(next) || !step_ok(here, next)) continue;
        int nsw = sw + (cfg.spin(next) != cfg.spin(here) ? 1 : 0);
        if (nsw > 2) continue;
        int nl = level + ray_crossing_sign(here, next, center);
        if (nl < -max_level || nl > max_level) continue;
        size_t ns = state_of(grid.cell(next), nl, nsw);
        if (parent[ns] >= 0) continue;
        parent[ns] = (int)st;
        // Odd net crossing only, for the same parity reason as the
        // monochrome search; nsw must close an even number of spin switches.
        if (next == start && (nl % 2) != 0 && nsw != 1) {
          found = ns;
          break;
        }
        queue.push_back(ns);
      }
    }
    if (found == SIZE_MAX) continue;

    std::vector<Site> walk;
    for (size_t st = found; st != start_state; st = (size_t)parent[st])
      walk.push_back(grid.site_of((st / 3) / nlevels));
    walk.push_back(start);
    std::reverse(walk.begin(), walk.end());
    walk.pop_back();

    std::vector<Site> circuit = erase_loops_keep_winding(std::move(walk), center);
    if (winding_closed(circuit, center) < 0) std::reverse(circuit.begin(), circuit.end());

    int switches = 0;
    for (size_t i = 0; i < circuit.size(); ++i)
      if (cfg.spin(circuit[i]) != cfg.spin(circuit[(i + 1) % circuit.size()])) ++switches;
    if (switches != 0 && switches != 2)
      throw std::logic_error("find_mixed_circuit: loop erasure produced more than two spin switches");

    MixedCircuit out;
    out.switch_count = switches;
    out.one_segment.kind = Kind::star;
    out.zero_segment.kind = Kind::nearest;
    if (switches == 0) {
      // Monochrome cycle: rotate so the smallest site leads, for stable output.
      size_t lead = std::min_element(circuit.begin(), circuit.end()) - circuit.begin();
      std::rotate(circuit.begin(), circuit.begin() + lead, circuit.end());
      (cfg.spin(circuit.front()) == 1 ? out.one_segment : out.zero_segment).sites =
          std::move(circuit);
    } else {
      // Rotate so the cycle starts right after the unique 0 -> 1 junction.
      size_t lead = 0;
      for (size_t i = 0; i < circuit.size(); ++i)
        if (cfg.spin(circuit[i]) == 0 && cfg.spin(circuit[(i + 1) % circuit.size()]) == 1)
          lead = (i + 1) % circuit.size();
      std::rotate(circuit.begin(), circuit.begin() + lead, circuit.end());
      size_t cut = 0;
      while (cut < circuit.size() && cfg.spin(circuit[cut]) == 1) ++cut;
      out.one_segment.sites.assign(circuit.begin(), circuit.begin() + cut);
      out.zero_segment.sites.assign(circuit.begin() + cut, circuit.end());
    }
    return out;
  }
  return std::nullopt;
}

OrientedConnectivity oriented_connections(const Configuration& cfg, Site from, Site to,
                                          std::uint8_t spin, Kind kind, const BoxRegion& avoid,
                                          Site center) {
  OrientedConnectivity out;
  AllowGrid grid(cfg.window());
  for (int y = grid.bounds.lo_y(); y <= grid.bounds.hi_y(); ++y)
    for (int x = grid.bounds.lo_x(); x <= grid.bounds.hi_x(); ++x) {
      Site s{x, y};
      if (!avoid.contains(s) && s != center && cfg.spin(s) == spin) grid.ok[grid.cell(s)] = 1;
    }
  if (!grid.allowed(from) || !grid.allowed(to)) return out;

  std::vector<Site> cuts = cut_sites(grid, center);
  const int max_level = (int)cuts.size() + 2;
  const int nlevels = 2 * max_level + 1;
  auto state_of = [&](size_t cell, int level) { return cell * nlevels + (size_t)(level + max_level); };

  std::vector<std::uint8_t> seen(grid.ok.size() * nlevels, 0);
  std::vector<size_t> queue;
  seen[state_of(grid.cell(from), 0)] = 1;
  queue.push_back(state_of(grid.cell(from), 0));
  for (size_t head = 0; head < queue.size(); ++head) {
    size_t st = queue[head];
    size_t cell = st / nlevels;
    int level = (int)(st % nlevels) - max_level;
    Site here = grid.site_of(cell);
    for (Site d : neighbor_offsets(kind)) {
      Site next{here.x + d.x, here.y + d.y};
      if (!grid.allowed(next)) continue;
      int nl = level + ray_crossing_sign(here, next, center);
      if (nl < -max_level || nl > max_level) continue;
      size_t ns = state_of(grid.cell(next), nl);
      if (seen[ns]) continue;
      seen[ns] = 1;
      queue.push_back(ns);
    }
  }

  WindingValue frac = angle_fraction(from, to, center);
  size_t to_cell = grid.cell(to);
  for (int level = -max_level; level <= max_level; ++level) {
    if (!seen[state_of(to_cell, level)]) continue;
    out.connected = true;
    WindingValue w = frac;
    w.crossings = level;
    switch (classify(w)) {
      case Orientation::clockwise: out.clockwise = true; break;
      case Orientation::counterclockwise: out.counterclockwise = true; break;
      case Orientation::neutral: out.neutral = true; break;
    }
  }
  return out;
}

Circuit circuit_from_opposed_paths(const PathTrace& p, const PathTrace& q,
                                   const BoxRegion& delta) {
  const Site center = delta.center;
  if (p.kind != q.kind)
    throw std::invalid_argument("opposed paths must use the same adjacency");
  if (p.sites.size() < 2 || q.sites.size() < 2)
    throw std::invalid_argument("opposed paths need at least two sites each");
  if (p.sites.front() != q.sites.front() || p.sites.back() != q.sites.back())
    throw std::invalid_argument("opposed paths must share both endpoints");
  if (!is_path(p.sites, p.kind) || !is_path(q.sites, q.kind))
    throw std::invalid_argument("opposed path input is not a path");
  for (const PathTrace* t : {&p, &q})
    for (Site s : t->sites)
      if (delta.contains(s)) throw std::invalid_argument("opposed paths must avoid delta");
  Orientation op = classify(winding_open(p.sites, center));
  Orientation oq = classify(winding_open(q.sites, center));
  bool opposed = (op == Orientation::clockwise && oq == Orientation::counterclockwise) ||
                 (op == Orientation::counterclockwise && oq == Orientation::clockwise);
  if (!opposed)
    throw std::invalid_argument("opposed paths must wind with opposite signs around delta");

  // Out along p, back along reversed q. The two winding totals share their
  // fractional part, so the closed walk's winding is their (nonzero)
  // integer difference W(p) - W(q).
  std::vector<Site> walk = p.sites;
  for (size_t i = q.sites.size() - 1; i >= 2; --i) walk.push_back(q.sites[i - 1]);

  // The difference is usually +-1 and the erasure then keeps the winding
  // odd, which is what makes the result enclose delta by crossing parity.
  // An even difference (one path already spirals) gives the erasure no
  // parity guarantee; the reversed traversal splits loops differently, so
  // try it before reporting the walk as inextractable.
  std::vector<Site> circuit = erase_loops_keep_winding(walk, center);
  if (winding_closed(circuit, center) % 2 == 0) {
    std::reverse(walk.begin(), walk.end());
    circuit = erase_loops_keep_winding(std::move(walk), center);
    if (winding_closed(circuit, center) % 2 == 0)
      throw std::logic_error(
          "circuit_from_opposed_paths: loop erasure kept an even winding; "
          "the extracted circuit would not enclose delta");
  }
  if (winding_closed(circuit, center) < 0) std::reverse(circuit.begin(), circuit.end());
  return Circuit{std::move(circuit), p.kind};
}

DualityReport duality_check(const Configuration& cfg, const Annulus& region) {
  require_in_window(cfg, region.outer, "duality_check");
  DualityReport report;

  report.zero_circuit = find_monochrome_circuit(cfg, region.inner, region, 0, Kind::nearest);
  report.zero_circuit_exists = report.zero_circuit.has_value();

  // Star path of 1s from the inner box's star boundary to the outer box's
  // edge ring, staying inside the annulus.
  AllowGrid grid(region.outer);
  for (int y = region.outer.lo_y(); y <= region.outer.hi_y(); ++y)
    for (int x = region.outer.lo_x(); x <= region.outer.hi_x(); ++x) {
      Site s{x, y};
      if (region.contains(s) && cfg.spin(s) == 1) grid.ok[grid.cell(s)] = 1;
    }
  auto on_outer_ring = [&](Site s) {
    return std::max(std::abs(s.x - region.outer.center.x), std::abs(s.y - region.outer.center.y)) ==
           region.outer.half_width;
  };

  std::vector<int> parent(grid.ok.size(), -1);
  std::vector<size_t> queue;
  size_t found = SIZE_MAX;
  for (Site s : ring_sites(region.inner.half_width + 1, region.inner.center)) {
    if (!grid.allowed(s)) continue;
    size_t c = grid.cell(s);
    if (parent[c] >= 0) continue;
    parent[c] = (int)c;
    queue.push_back(c);
  }
  for (size_t head = 0; head < queue.size() && found == SIZE_MAX; ++head) {
    Site here = grid.site_of(queue[head]);
    for (Site d : neighbor_offsets(Kind::star)) {
      Site next{here.x + d.x, here.y + d.y};
      if (!grid.allowed(next)) continue;
      size_t nc = grid.cell(next);
      if (parent[nc] >= 0) continue;
      parent[nc] = (int)queue[head];
      if (on_outer_ring(next)) {
        found = nc;
        break;
      }
      queue.push_back(nc);
    }
  }
  if (found != SIZE_MAX) {
    std::vector<Site> path;
    size_t c = found;
    while ((size_t)parent[c] != c) {
      path.push_back(grid.site_of(c));
      c = (size_t)parent[c];
    }
    path.push_back(grid.site_of(c));
    std::reverse(path.begin(), path.end());
    report.one_connection_exists = true;
    report.one_connection = PathTrace{std::move(path), Kind::star};
  }

  if (report.zero_circuit_exists == report.one_connection_exists)
    throw DualityViolation(report.zero_circuit_exists
                               ? "duality violated: the annulus carries both a nearest 0 circuit "
                                 "and a star 1 connection"
                               : "duality violated: the annulus carries neither a nearest 0 "
                                 "circuit nor a star 1 connection");
  return report;
}

}  // namespace perc
