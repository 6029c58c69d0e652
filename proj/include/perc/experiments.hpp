#pragma once

#include <optional>
#include <string>
#include <vector>

#include "perc/report.hpp"

namespace perc {

// Every experiment is a pure function of (sampler spec, parameters): the
// i-th trial always draws substream i, aggregation is commutative, and
// results land in slots indexed by trial, so any --jobs value produces the
// same report byte for byte.

// Dichotomy sweep: for each outer half-width d, every configuration is
// checked on the annulus from the center site to {-d..d}^2 — exactly one
// of {nearest 0circuit around the center, star 1path inner ring -> outer
// edge} may hold. Exhaustive mode enumerates all spin assignments of the
// annulus sites instead of sampling (supported for d = 2: 2^24 cases).
struct DualityParams {
  std::vector<int> outer_halfwidths = {2, 3};
  long long trials = 1000;
  bool exhaustive = false;
  int jobs = 1;
};
ExperimentReport exp_duality_sweep(const SamplerSpec& spec, const DualityParams& par);

// Connection chain: per window half-width, estimates the finite analogues
// of the steps that chain pointwise cluster density into a circuit:
//   c_hat        min over probe sites of P(site lies in a spanning 1*cluster)
//   pair         P(some shifted pair x_h <->1* y_h connects off Delta)
//   cw / ccw     same, restricted to connections of that orientation
//   circuit      P(a 1*circuit surrounds Delta)
// Probe sites are the row-path endpoints x_h = center + (-(d+2), h) and
// y_h = center + (d+2, h) for |h| <= d+1, d = delta half-width. The chain
// flags (pair >= c_hat^2/2, max(cw,ccw) >= c_hat^2/4, circuit >= c_hat^4/16)
// are reported, never asserted: watching which link breaks per sampler is
// the purpose of the experiment.
struct ChainParams {
  int delta_halfwidth = 2;
  std::vector<int> window_halfwidths = {8};
  long long trials = 400;
  int jobs = 1;
};
ExperimentReport exp_connection_chain(const SamplerSpec& spec, const ChainParams& par);

// Coexistence decay: P(a spanning nearest 0cluster and a spanning star
// 1*cluster exist simultaneously), per window half-width.
struct CoexistParams {
  std::vector<int> window_halfwidths = {8, 16};
  long long trials = 1000;
  int jobs = 1;
};
ExperimentReport exp_coexistence_decay(const SamplerSpec& spec, const CoexistParams& par);

// Necklet census: per trial builds the flow network between the rings of
// {-s..s}^2 and {-t..t}^2, constructs a necklet around gamma's star
// closure (the box one larger than gamma), validates the pearl count
// against the flow value, and checks the pearl-blocking set around gamma
// itself. Validation failures are recorded (first few configurations are
// dumped into the notes) and counted as violations; the run continues.
struct NeckletParams {
  int gamma_halfwidth = 1;
  int s = 2;
  int t = 3;
  long long trials = 200;
  int jobs = 1;
};
ExperimentReport exp_necklet_census(const SamplerSpec& spec, const NeckletParams& par);

// Boundary shift: conditioned on coexistence of spanning clusters, takes
// the largest spanning 1*cluster, fills its holes, extracts the squares
// boundary, and measures how often it separates the endpoints of a probe
// edge — a vertical edge for axis 'ns' (shifted along y), a horizontal
// one for 'ew' (shifted along x). The spread across shifts is reported as
// a diagnostic; finite windows are not translation invariant near edges,
// so nothing is asserted.
struct BoundaryShiftParams {
  char axis = 'n';  // 'n': vertical probe edge, shifts in y; 'e': horizontal, shifts in x
  std::vector<int> shifts = {-2, -1, 0, 1, 2};
  long long trials = 1000;
  int jobs = 1;
};
ExperimentReport exp_boundary_shift(const SamplerSpec& spec, const BoundaryShiftParams& par);

// Correlation table for the increasing-event catalogue (used by the self
// test and the FKG-style checks): covariance of every catalogue pair.
struct CorrelationParams {
  long long trials = 1000;
  int jobs = 1;
};
ExperimentReport exp_event_correlations(const SamplerSpec& spec, const CorrelationParams& par);

// One configuration's contribution to the shift experiment: whether the
// spanning clusters coexist and, if so, which probe edges the extracted
// boundary separates. Exposed so tests can drive hand-built
// configurations through the exact code path the experiment uses.
struct EdgeHitProbe {
  bool coexists = false;
  std::vector<std::uint8_t> hits;  // one flag per shift; empty unless coexists
};
EdgeHitProbe boundary_shift_probe(const Configuration& cfg, char axis,
                                  const std::vector<int>& shifts);

}  // namespace perc
