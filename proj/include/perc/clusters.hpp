#pragma once

#include <span>

#include "perc/lattice.hpp"

namespace perc {

// Window edge bits for cluster/edge contact.
inline constexpr unsigned kTouchLeft = 1, kTouchRight = 2, kTouchBottom = 4, kTouchTop = 8;

struct ClusterInfo {
  int size = 0;
  Site min_site;           // smallest member in row-major order
  unsigned touch_mask = 0; // window edges the cluster reaches

  // Finite-window stand-in for an infinite cluster: reaches two opposite
  // window edges.
  bool spans() const {
    return ((touch_mask & kTouchLeft) && (touch_mask & kTouchRight)) ||
           ((touch_mask & kTouchBottom) && (touch_mask & kTouchTop));
  }
};

// Partition of the window's sites of one spin into maximal connected
// clusters under the given adjacency. Cluster ids are assigned in
// ascending order of each cluster's smallest site (row-major), so the
// labeling is a pure function of the configuration.
struct ClusterLabeling {
  BoxRegion window;
  std::uint8_t spin = 1;
  Kind kind = Kind::star;
  std::vector<int> labels;  // per window cell, row-major; -1 = other spin
  std::vector<ClusterInfo> clusters;

  int label_at(Site s) const;
  std::vector<Site> sites_of(int cluster_id) const;
};

ClusterLabeling label_clusters(const Configuration& cfg, std::uint8_t spin, Kind kind);

// Ids of clusters touching two opposite window edges.
std::vector<int> spanning_clusters(const Configuration& cfg, std::uint8_t spin, Kind kind);

// Largest cluster id in a labeling (ties to the smaller id), or -1 when
// the labeling is empty; same restricted to spanning clusters.
int largest_cluster(const ClusterLabeling& labeling);
int largest_spanning_cluster(const ClusterLabeling& labeling);

// Flips to spin 1 every nearest 0cluster that stays off the window edge
// and whose in-window boundary touches only the given star 1cluster (the
// finite-window reading of being encircled by it). Idempotent.
Configuration fill_holes(const Configuration& cfg, int one_star_cluster_id);

// Boundary of the union of axis-aligned squares of side 3/2 centered at
// the sites of a 1*cluster. Squares of *adjacent sites overlap with area,
// so the union's connectivity mirrors the cluster's and the tracing never
// meets an ambiguous corner. All coordinates are quarter-integers, stored
// scaled by 4.
struct BoundaryLoop {
  std::vector<Site> vertices;  // quarter-integer coordinates x4; closed, front repeated at back
  bool hole = false;           // true: clockwise, encloses uncovered area
  long long length_quarters = 0;
};

struct BoundaryCurve {
  std::vector<BoundaryLoop> loops;
  long long length_quarters = 0;

  double length() const { return length_quarters / 4.0; }
};

// Trace the boundary for an arbitrary nonempty site set (the cluster
// operation below and the test oracles share this).
BoundaryCurve trace_squares_boundary(std::span<const Site> sites);

// Curve around the 1*cluster with this id (label_clusters(cfg, 1, star)
// numbering); meant for hole-filled configurations.
BoundaryCurve boundary_curve(const Configuration& cfg, int one_star_cluster_id);

// Split of the window into the designated 1*cluster plus its filled holes
// (S1star) and everything else (S0). Both designated clusters must span.
struct SideDecomposition {
  std::vector<Site> s0;
  std::vector<Site> s1star;
};
SideDecomposition side_decomposition(const Configuration& cfg, int zero_cluster_id,
                                     int one_star_cluster_id);

}  // namespace perc
