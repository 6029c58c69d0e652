#pragma once

#include <optional>
#include <span>
#include <stdexcept>

#include "perc/lattice.hpp"

namespace perc {

// Winding numbers are computed from signed crossings of the horizontal ray
// that leaves `center` in the +x direction. Points on the ray's line are
// treated as lying infinitesimally above it, which makes every count exact
// integer arithmetic with no epsilon in sight.

// Signed crossing of the directed segment a->b with the ray: +1 upward,
// -1 downward, 0 if the segment misses the ray. Throws if the segment
// passes through `center` itself.
int ray_crossing_sign(Site a, Site b, Site center);

enum class Orientation { clockwise, counterclockwise, neutral };

// Winding of an open walk: integer ray crossings plus the angular offset
// of the endpoints. When both endpoints sit on an axis or diagonal through
// the center the offset is an exact multiple of 1/8 turn and `exact` is
// set; orientation decisions are then pure integer comparisons.
struct WindingValue {
  long long crossings = 0;
  int eighths = 0;       // endpoint angle difference in 1/8 turns (exact case)
  double fraction = 0.0; // endpoint angle difference as a fraction of a turn
  bool exact = true;

  double total() const {
    return (double)crossings + (exact ? eighths / 8.0 : fraction);
  }
};

// Guard band for orientation decisions that involve a floating-point
// angular part; exact values are classified by integer sign alone.
inline constexpr double kOrientationGuard = 1e-6;

// Total winding of a closed walk (front implicitly joined to back).
// Exact integer. Throws if the walk touches or encircles through `center`
// with a segment.
long long winding_closed(std::span<const Site> walk, Site center);

// Winding of an open walk; crossings from the segments, fraction from the
// endpoint angles (on-ray endpoints count as angle zero).
WindingValue winding_open(std::span<const Site> walk, Site center);

// Angular offset (angle(to) - angle(from)) / 2pi with no crossings; the
// fractional part shared by every walk between the two endpoints.
WindingValue angle_fraction(Site from, Site to, Site center);

Orientation classify(const WindingValue& w);

// Orientation of a closed walk around `center`.
Orientation orientation_around(std::span<const Site> walk, Site center);

// Removes loops from a closed walk while keeping its winding around
// `center` nonzero. At each duplicate site the walk splits into the loop
// and the remainder; the piece with nonzero winding survives (both
// nonzero: the shorter one, ties favor the remainder). Input must have
// nonzero winding; the result is a self-avoiding closed walk whose winding
// is +1 or -1 and whose steps are steps of the input.
std::vector<Site> erase_loops_keep_winding(std::vector<Site> closed_walk, Site center);

// True iff the circuit avoids every site of `box` and winds around its
// center; for unit/diagonal steps that forces the whole box into the
// circuit's interior.
bool encircles_box(const Circuit& c, const BoxRegion& box);

// Searches the annulus for a self-avoiding circuit of the given spin and
// adjacency whose interior contains `delta` (a box inside the inner box).
// Exact: returns a circuit iff one exists. Found circuits are normalized
// to counterclockwise orientation. The search runs over the cyclic cover
// of the annulus cut along the +x ray from delta's center, so spirals and
// multiple ray crossings are handled correctly.
std::optional<Circuit> find_monochrome_circuit(const Configuration& cfg, const BoxRegion& delta,
                                               const Annulus& region, std::uint8_t spin,
                                               Kind kind);

// Circuit around `delta` made of one self-avoiding star path on spin-1
// sites and one self-avoiding nearest path on spin-0 sites, joined by star
// adjacencies; either segment may be empty (a monochrome circuit counts).
// The concatenation one_segment + zero_segment traversed cyclically is a
// star circuit.
struct MixedCircuit {
  PathTrace one_segment;   // star kind, spin-1 sites
  PathTrace zero_segment;  // nearest kind, spin-0 sites
  int switch_count = 0;    // spin changes along the cycle: 0 or 2

  std::vector<Site> cycle() const {
    std::vector<Site> s = one_segment.sites;
    s.insert(s.end(), zero_segment.sites.begin(), zero_segment.sites.end());
    return s;
  }
};
std::optional<MixedCircuit> find_mixed_circuit(const Configuration& cfg, const BoxRegion& delta,
                                               const Annulus& region);

// Existence of monochrome paths from -> to inside the window, avoiding
// every site of `avoid`, classified by winding orientation around
// `center`. All three flags are decided exactly against the full cyclic
// cover (a connection may be clockwise and counterclockwise at once via
// different routes).
struct OrientedConnectivity {
  bool connected = false;
  bool clockwise = false;
  bool counterclockwise = false;
  bool neutral = false;
};
OrientedConnectivity oriented_connections(const Configuration& cfg, Site from, Site to,
                                          std::uint8_t spin, Kind kind, const BoxRegion& avoid,
                                          Site center);

// Welds two opposedly oriented walks with common endpoints (one clockwise,
// one counterclockwise around delta's center, both avoiding delta) into a
// self-avoiding circuit through sites of the two walks with delta in its
// interior. The closed walk p + reverse(q) has winding W(p) - W(q), which
// the orientation gap forces nonzero; loop erasure then keeps it nonzero.
Circuit circuit_from_opposed_paths(const PathTrace& p, const PathTrace& q,
                                   const BoxRegion& delta);

// One-sided dichotomy on an annulus: either a nearest circuit of 0s winds
// around the inner box, or a star path of 1s joins the inner box's star
// boundary to the outer box's edge ring. Exactly one of the two must hold;
// DualityViolation reports a configuration violating that.
struct DualityViolation : std::logic_error {
  using std::logic_error::logic_error;
};

struct DualityReport {
  bool zero_circuit_exists = false;
  bool one_connection_exists = false;
  std::optional<Circuit> zero_circuit;
  std::optional<PathTrace> one_connection;
};
DualityReport duality_check(const Configuration& cfg, const Annulus& region);

}  // namespace perc
