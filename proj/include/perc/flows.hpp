#pragma once

#include <string>
#include <vector>

#include "perc/lattice.hpp"

namespace perc {

// Undirected unit-or-zero capacity arc between two star-adjacent network
// sites. In FlowNetwork::arcs the endpoints are normalized to row-major
// order (a before b); in a cut the orientation is meaningful and a is the
// endpoint on the source side.
struct Arc {
  Site a;
  Site b;
  int capacity = 0;

  friend bool operator==(const Arc&, const Arc&) = default;
};

// Crossing network between two concentric square rings: sources are the
// star boundary of {-s..s}^2, sinks the star boundary of {-t..t}^2,
// intermediates everything strictly between. Arcs join star-adjacent
// network sites and carry capacity 1 exactly when both endpoints have
// spin 1.
struct FlowNetwork {
  int s = 0;
  int t = 0;
  std::vector<Site> sources;        // ring at L-inf radius s+1, row-major
  std::vector<Site> sinks;          // ring at L-inf radius t+1, row-major
  std::vector<Site> intermediates;  // L-inf radius in [s+2, t], row-major
  std::vector<Arc> arcs;            // deterministic row-major enumeration
};

// Requires 0 <= s < t and the sink ring inside the window (the boxes are
// centered at the origin).
FlowNetwork build_network(const Configuration& cfg, int s, int t);

struct MaxFlowResult {
  int value = 0;
  // Every arc with exactly one endpoint reachable from the sources in the
  // final residual graph, zero-capacity arcs included; the sum of their
  // capacities equals value.
  std::vector<Arc> cut;
  std::vector<Site> source_side;  // residual-reachable network sites, row-major
};

// Integral max flow by shortest augmenting paths with a fixed arc order,
// so the flow, the cut, and the source side are reproducible.
MaxFlowResult max_flow_min_cut(const FlowNetwork& net);

// Maximum number of pairwise site-disjoint 1*paths inside
// {-i..i}^2 \ {-k..k}^2 from the star boundary of {-k..k}^2 to the star
// boundary of {-i+1..i-1}^2. Site-disjointness is enforced by splitting
// each spin-1 site into a unit-capacity in/out pair. Requires 0 <= k < i-1
// and {-i..i}^2 inside the window.
int disjoint_path_count(const Configuration& cfg, int k, int i);

// Nearest-kind circuit around a target region; the pearls are its spin-1
// sites in circuit order.
struct Necklet {
  Circuit circuit{{}, Kind::nearest};
  std::vector<Site> pearls;
};

// Everything the construction derived from the max-flow cut, kept for
// inspection whether or not the construction succeeded. b_outer is filled
// only when some component of the boundary of b_sites is certified to be
// a self-avoiding nearest circuit around the source ring; d/e/f split the
// two boundary layers by spin and adjacency exactly as the construction
// uses them. site_disjoint_paths counts site-disjoint 1*paths across the
// same annulus, so a gap between it and flow_value (possible, since arcs
// through a shared site are arc-disjoint but not site-disjoint) is visible
// in every report.
struct CutDecomposition {
  int flow_value = 0;
  std::vector<Arc> cut;
  std::vector<Site> b_sites;  // source-side sites plus the enclosed core box
  std::vector<Site> b_outer;  // certified boundary circuit, cyclic order
  std::vector<Site> b_inner;  // sites inside b_outer star-adjacent to it
  std::vector<Site> d_sites;  // b_inner with spin 0
  std::vector<Site> e_sites;  // b_inner spin 1, star-adjacent to spin-1 b_outer
  std::vector<Site> f_sites;  // b_outer star-adjacent to b_inner \ (d u e)
  int site_disjoint_paths = 0;
};

struct NeckletResult {
  bool valid = false;
  std::string failure;  // empty when valid
  Necklet necklet;      // best attempt; empty circuit if none was found
  CutDecomposition decomposition;
};

// Builds the s/t network, takes its min cut, and searches the two-layer
// shell around the source-side region for a nearest circuit around gamma
// whose spin-1 count equals the flow value. Requires gamma inside
// {-s..s}^2. Failure to achieve the exact pearl count is reported, never
// patched over.
NeckletResult necklet_construct(const Configuration& cfg, const BoxRegion& gamma, int s, int t);

// Sites in the necklet's interior star-adjacent to a pearl, ascending
// row-major. Checks |result| <= 5 * |pearls| and that flipping the result
// to spin 0 leaves a 0circuit around gamma; either check failing throws.
std::vector<Site> pearl_blocking_set(const Configuration& cfg, const Necklet& necklet,
                                     const BoxRegion& gamma);

}  // namespace perc
