#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace perc {

// Adjacency on the matching pair: "nearest" joins sites at distance 1,
// "star" joins sites at distance 1 or sqrt(2). A site is never adjacent
// to itself.
enum class Kind : std::uint8_t { nearest, star };

struct Site {
  int x = 0;
  int y = 0;

  friend bool operator==(const Site&, const Site&) = default;
  // Row-major order: by y, then x. Cluster labels and all "deterministic
  // order" guarantees in this library are stated in terms of this order.
  friend auto operator<=>(const Site& a, const Site& b) {
    if (auto c = a.y <=> b.y; c != 0) return c;
    return a.x <=> b.x;
  }
};

// Axis-aligned square block of sites {c.x-d..c.x+d} x {c.y-d..c.y+d}.
struct BoxRegion {
  int half_width = 0;
  Site center = {0, 0};

  int lo_x() const { return center.x - half_width; }
  int hi_x() const { return center.x + half_width; }
  int lo_y() const { return center.y - half_width; }
  int hi_y() const { return center.y + half_width; }
  int side() const { return 2 * half_width + 1; }
  long long site_count() const { return (long long)side() * side(); }

  bool contains(Site s) const {
    return s.x >= lo_x() && s.x <= hi_x() && s.y >= lo_y() && s.y <= hi_y();
  }
  // Strict interior: sites at L-inf distance >= 1 from the box edge.
  bool strictly_contains(Site s) const {
    return s.x > lo_x() && s.x < hi_x() && s.y > lo_y() && s.y < hi_y();
  }
  std::vector<Site> sites() const;

  friend bool operator==(const BoxRegion&, const BoxRegion&) = default;
};

bool adjacent(Site a, Site b, Kind kind);

// Neighbor displacement table in ascending row-major order; every breadth
// first search in the library walks neighbors in this order, which is what
// makes results reproducible across runs and thread counts.
std::span<const Site> neighbor_offsets(Kind kind);

// Sites at L-inf distance exactly r from the center, row-major order.
// For a box {c-d..c+d}^2 the star boundary is ring_sites(d+1, c).
std::vector<Site> ring_sites(int r, Site center);

// Concentric-or-not pair of boxes; the inner box together with its star
// boundary must sit strictly inside the outer box.
struct Annulus {
  BoxRegion inner;
  BoxRegion outer;

  Annulus(BoxRegion in, BoxRegion out);

  bool contains(Site s) const { return outer.contains(s) && !inner.contains(s); }
  std::vector<Site> sites() const;  // outer \ inner, row-major order
};

// Spins {0,1} on a square window. Reads outside the window are rejected:
// every operation in this library is windowed and must not silently
// invent spins beyond it.
class Configuration {
 public:
  Configuration() = default;
  Configuration(BoxRegion window, std::uint8_t fill = 0)
      : window_(window), spins_((size_t)window.site_count(), fill) {}

  const BoxRegion& window() const { return window_; }

  bool in_window(Site s) const { return window_.contains(s); }

  std::uint8_t spin(Site s) const {
    return spins_[index_checked(s)];
  }
  void set_spin(Site s, std::uint8_t v) {
    if (v > 1) throw std::invalid_argument("spin must be 0 or 1");
    spins_[index_checked(s)] = v;
  }

  // Row-major offset of an in-window site (row 0 = lowest y).
  size_t index(Site s) const {
    return (size_t)(s.y - window_.lo_y()) * window_.side() + (size_t)(s.x - window_.lo_x());
  }
  const std::vector<std::uint8_t>& raw() const { return spins_; }
  std::vector<std::uint8_t>& raw() { return spins_; }

  friend bool operator==(const Configuration&, const Configuration&) = default;

 private:
  size_t index_checked(Site s) const {
    if (!window_.contains(s))
      throw std::out_of_range("site (" + std::to_string(s.x) + "," + std::to_string(s.y) +
                              ") outside configuration window");
    return index(s);
  }

  BoxRegion window_;
  std::vector<std::uint8_t> spins_;
};

// Finite ordered site sequence with consecutive sites adjacent under
// `kind`. A circuit is additionally closed: last site adjacent to first.
// A single site is a valid path but never a circuit.
struct PathTrace {
  std::vector<Site> sites;
  Kind kind = Kind::nearest;
};

struct Circuit {
  std::vector<Site> sites;  // cyclic; sites.back() adjacent to sites.front()
  Kind kind = Kind::nearest;
};

bool is_path(std::span<const Site> sites, Kind kind);
bool is_self_avoiding(std::span<const Site> sites);
bool is_circuit(std::span<const Site> sites, Kind kind);  // closed path, any repeats allowed
bool is_self_avoiding_circuit(std::span<const Site> sites, Kind kind);

// Sites outside B adjacent to some site of B, ascending row-major order.
std::vector<Site> boundary(std::span<const Site> b, Kind kind);

// Horizontal path ((-m-1,h),(-m,h),...,(m,h),(m+1,h)).
PathTrace row_path(int h, int m);

// Exact partition of the plane minus a self-avoiding circuit's curve into
// enclosed and non-enclosed lattice sites. The curve joins consecutive
// sites (diagonal steps included for star circuits); enclosed means lying
// in a bounded component of the plane minus the curve. Computed by a flood
// fill on the half-integer refinement of the lattice, integer arithmetic
// only.
std::vector<Site> circuit_interior(const Circuit& c);

struct CircuitRegions {
  std::vector<Site> interior;
  std::vector<Site> exterior;  // window sites neither on the circuit nor enclosed
};
CircuitRegions interior_exterior(const Circuit& c, const BoxRegion& window);

// Convenience predicates used throughout.
bool contains_site(std::span<const Site> sorted_sites, Site s);
std::vector<Site> sorted_unique(std::vector<Site> sites);

}  // namespace perc
