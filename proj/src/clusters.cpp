#include "perc/clusters.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

namespace perc {

int ClusterLabeling::label_at(Site s) const {
  if (!window.contains(s)) throw std::out_of_range("label_at: site outside window");
  return labels[(size_t)(s.y - window.lo_y()) * window.side() + (size_t)(s.x - window.lo_x())];
}

std::vector<Site> ClusterLabeling::sites_of(int cluster_id) const {
  std::vector<Site> out;
  size_t i = 0;
  for (int y = window.lo_y(); y <= window.hi_y(); ++y)
    for (int x = window.lo_x(); x <= window.hi_x(); ++x, ++i)
      if (labels[i] == cluster_id) out.push_back({x, y});
  return out;
}

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(size_t n) : parent(n) {
    for (size_t i = 0; i < n; ++i) parent[i] = (int)i;
  }
  int find(int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

ClusterLabeling label_clusters(const Configuration& cfg, std::uint8_t spin, Kind kind) {
  ClusterLabeling out;
  out.window = cfg.window();
  out.spin = spin;
  out.kind = kind;

  const int side = out.window.side();
  const size_t n = (size_t)out.window.site_count();
  out.labels.assign(n, -1);

  UnionFind uf(n);
  // Backward half of the neighborhood: cells already visited in a
  // row-major scan.
  static const std::array<Site, 2> back_near = {{{0, -1}, {-1, 0}}};
  static const std::array<Site, 4> back_star = {{{-1, -1}, {0, -1}, {1, -1}, {-1, 0}}};
  std::span<const Site> back =
      kind == Kind::nearest ? std::span<const Site>(back_near) : std::span<const Site>(back_star);

  size_t i = 0;
  for (int y = out.window.lo_y(); y <= out.window.hi_y(); ++y)
    for (int x = out.window.lo_x(); x <= out.window.hi_x(); ++x, ++i) {
      if (cfg.spin({x, y}) != spin) continue;
      for (Site d : back) {
        Site nb{x + d.x, y + d.y};
        if (!out.window.contains(nb) || cfg.spin(nb) != spin) continue;
        uf.unite((int)i, (int)cfg.index(nb));
      }
    }

  // Ids in order of first (row-major smallest) member.
  std::vector<int> root_id(n, -1);
  i = 0;
  for (int y = out.window.lo_y(); y <= out.window.hi_y(); ++y)
    for (int x = out.window.lo_x(); x <= out.window.hi_x(); ++x, ++i) {
      if (cfg.spin({x, y}) != spin) continue;
      int root = uf.find((int)i);
      int id = root_id[root];
      if (id < 0) {
        id = (int)out.clusters.size();
        root_id[root] = id;
        out.clusters.push_back(ClusterInfo{0, {x, y}, 0});
      }
      out.labels[i] = id;
      ClusterInfo& info = out.clusters[id];
      info.size += 1;
      if (x == out.window.lo_x()) info.touch_mask |= kTouchLeft;
      if (x == out.window.hi_x()) info.touch_mask |= kTouchRight;
      if (y == out.window.lo_y()) info.touch_mask |= kTouchBottom;
      if (y == out.window.hi_y()) info.touch_mask |= kTouchTop;
    }
  (void)side;
  return out;
}

std::vector<int> spanning_clusters(const Configuration& cfg, std::uint8_t spin, Kind kind) {
  ClusterLabeling labeling = label_clusters(cfg, spin, kind);
  std::vector<int> ids;
  for (int id = 0; id < (int)labeling.clusters.size(); ++id)
    if (labeling.clusters[id].spans()) ids.push_back(id);
  return ids;
}

int largest_cluster(const ClusterLabeling& labeling) {
  int best = -1;
  for (int id = 0; id < (int)labeling.clusters.size(); ++id)
    if (best < 0 || labeling.clusters[id].size > labeling.clusters[best].size) best = id;
  return best;
}

int largest_spanning_cluster(const ClusterLabeling& labeling) {
  int best = -1;
  for (int id = 0; id < (int)labeling.clusters.size(); ++id)
    if (labeling.clusters[id].spans() &&
        (best < 0 || labeling.clusters[id].size > labeling.clusters[best].size))
      best = id;
  return best;
}

Configuration fill_holes(const Configuration& cfg, int one_star_cluster_id) {
  ClusterLabeling ones = label_clusters(cfg, 1, Kind::star);
  if (one_star_cluster_id < 0 || one_star_cluster_id >= (int)ones.clusters.size())
    throw std::invalid_argument("fill_holes: no 1*cluster with that id");
  ClusterLabeling zeros = label_clusters(cfg, 0, Kind::nearest);

  std::vector<std::uint8_t> flip(zeros.clusters.size(), 0);
  for (int id = 0; id < (int)zeros.clusters.size(); ++id)
    flip[id] = zeros.clusters[id].touch_mask == 0;
  // A hole's in-window boundary consists of 1s; require all of them in the
  // designated cluster.
  size_t i = 0;
  for (int y = cfg.window().lo_y(); y <= cfg.window().hi_y(); ++y)
    for (int x = cfg.window().lo_x(); x <= cfg.window().hi_x(); ++x, ++i) {
      int zid = zeros.labels[i];
      if (zid < 0 || !flip[zid]) continue;
      for (Site d : neighbor_offsets(Kind::nearest)) {
        Site nb{x + d.x, y + d.y};
        if (!cfg.window().contains(nb) || cfg.spin(nb) != 1) continue;
        if (ones.label_at(nb) != one_star_cluster_id) {
          flip[zid] = 0;
          break;
        }
      }
    }

  Configuration out = cfg;
  i = 0;
  for (int y = cfg.window().lo_y(); y <= cfg.window().hi_y(); ++y)
    for (int x = cfg.window().lo_x(); x <= cfg.window().hi_x(); ++x, ++i)
      if (zeros.labels[i] >= 0 && flip[zeros.labels[i]]) out.set_spin({x, y}, 1);
  return out;
}

namespace {

// Quarter-grid raster of the union of side-3/2 squares; cell (i,j) covers
// the quarter-unit square with corners (i,j)..(i+1,j+1) in quarter coords.
struct QuarterRaster {
  int qx0, qy0, w, h;
  std::vector<std::uint8_t> covered;

  explicit QuarterRaster(std::span<const Site> sites) {
    int minx = sites[0].x, maxx = sites[0].x, miny = sites[0].y, maxy = sites[0].y;
    for (Site s : sites) {
      minx = std::min(minx, s.x);
      maxx = std::max(maxx, s.x);
      miny = std::min(miny, s.y);
      maxy = std::max(maxy, s.y);
    }
    qx0 = 4 * minx - 3;
    qy0 = 4 * miny - 3;
    w = 4 * (maxx - minx) + 6;
    h = 4 * (maxy - miny) + 6;
    covered.assign((size_t)w * h, 0);
    for (Site s : sites)
      for (int j = 0; j < 6; ++j)
        for (int i = 0; i < 6; ++i)
          covered[(size_t)(4 * (s.y - miny) + j) * w + (size_t)(4 * (s.x - minx) + i)] = 1;
  }

  bool at(int i, int j) const {  // local cell indices, false outside
    if (i < 0 || i >= w || j < 0 || j >= h) return false;
    return covered[(size_t)j * w + (size_t)i] != 0;
  }
};

}  // namespace

BoundaryCurve trace_squares_boundary(std::span<const Site> sites) {
  if (sites.empty()) throw std::invalid_argument("trace_squares_boundary: empty site set");
  QuarterRaster raster(sites);
  const int cw = raster.w + 1, ch = raster.h + 1;  // corner grid

  // One outgoing directed boundary edge per corner (covered side on the
  // left); square overlaps of *adjacent sites rule out ambiguous corners.
  // Directions: 0 +x, 1 +y, 2 -x, 3 -y.
  std::vector<std::int8_t> out_dir((size_t)cw * ch, -1);
  auto corner = [&](int a, int b) { return (size_t)b * cw + (size_t)a; };
  auto set_dir = [&](int a, int b, std::int8_t dir) {
    std::int8_t& slot = out_dir[corner(a, b)];
    if (slot >= 0) throw std::logic_error("trace_squares_boundary: ambiguous corner");
    slot = dir;
  };
  for (int j = 0; j < raster.h; ++j)
    for (int i = 0; i < raster.w; ++i) {
      if (!raster.at(i, j)) continue;
      if (!raster.at(i, j - 1)) set_dir(i, j, 0);          // bottom side, walk +x
      if (!raster.at(i + 1, j)) set_dir(i + 1, j, 1);      // right side, walk +y
      if (!raster.at(i, j + 1)) set_dir(i + 1, j + 1, 2);  // top side, walk -x
      if (!raster.at(i - 1, j)) set_dir(i, j + 1, 3);      // left side, walk -y
    }

  static const int step_x[4] = {1, 0, -1, 0};
  static const int step_y[4] = {0, 1, 0, -1};

  BoundaryCurve curve;
  std::vector<std::uint8_t> consumed((size_t)cw * ch, 0);
  for (int b = 0; b < ch; ++b)
    for (int a = 0; a < cw; ++a) {
      if (out_dir[corner(a, b)] < 0 || consumed[corner(a, b)]) continue;

      // Walk the loop once to collect corners and directions.
      std::vector<std::pair<int, int>> pts;
      std::vector<std::int8_t> dirs;
      int x = a, y = b;
      do {
        std::int8_t dir = out_dir[corner(x, y)];
        consumed[corner(x, y)] = 1;
        pts.emplace_back(x, y);
        dirs.push_back(dir);
        x += step_x[dir];
        y += step_y[dir];
      } while (!(x == a && y == b));

      BoundaryLoop loop;
      loop.length_quarters = (long long)pts.size();
      // Keep only turning corners, starting from one.
      size_t n = pts.size();
      size_t first_turn = 0;
      while (dirs[first_turn] == dirs[(first_turn + n - 1) % n]) ++first_turn;
      long long area2 = 0;
      for (size_t k = 0; k < n; ++k) {
        size_t idx = (first_turn + k) % n;
        if (dirs[idx] != dirs[(idx + n - 1) % n])
          loop.vertices.push_back(
              {raster.qx0 + pts[idx].first, raster.qy0 + pts[idx].second});
        auto [px, py] = pts[idx];
        auto [qx, qy] = pts[(idx + 1) % n];
        area2 += (long long)px * qy - (long long)qx * py;
      }
      loop.vertices.push_back(loop.vertices.front());
      loop.hole = area2 < 0;
      curve.length_quarters += loop.length_quarters;
      curve.loops.push_back(std::move(loop));
    }
  return curve;
}

BoundaryCurve boundary_curve(const Configuration& cfg, int one_star_cluster_id) {
  ClusterLabeling ones = label_clusters(cfg, 1, Kind::star);
  if (one_star_cluster_id < 0 || one_star_cluster_id >= (int)ones.clusters.size())
    throw std::invalid_argument("boundary_curve: no 1*cluster with that id");
  return trace_squares_boundary(ones.sites_of(one_star_cluster_id));
}

SideDecomposition side_decomposition(const Configuration& cfg, int zero_cluster_id,
                                     int one_star_cluster_id) {
  ClusterLabeling zeros = label_clusters(cfg, 0, Kind::nearest);
  ClusterLabeling ones = label_clusters(cfg, 1, Kind::star);
  if (zero_cluster_id < 0 || zero_cluster_id >= (int)zeros.clusters.size())
    throw std::invalid_argument("side_decomposition: no 0cluster with that id");
  if (one_star_cluster_id < 0 || one_star_cluster_id >= (int)ones.clusters.size())
    throw std::invalid_argument("side_decomposition: no 1*cluster with that id");
  if (!zeros.clusters[zero_cluster_id].spans() || !ones.clusters[one_star_cluster_id].spans())
    throw std::invalid_argument("side_decomposition: both designated clusters must span the window");

  Configuration filled = fill_holes(cfg, one_star_cluster_id);
  ClusterLabeling filled_ones = label_clusters(filled, 1, Kind::star);
  int filled_id = filled_ones.label_at(ones.clusters[one_star_cluster_id].min_site);

  SideDecomposition out;
  for (int y = cfg.window().lo_y(); y <= cfg.window().hi_y(); ++y)
    for (int x = cfg.window().lo_x(); x <= cfg.window().hi_x(); ++x) {
      if (filled_ones.label_at({x, y}) == filled_id)
        out.s1star.push_back({x, y});
      else
        out.s0.push_back({x, y});
    }
  return out;
}

}  // namespace perc
