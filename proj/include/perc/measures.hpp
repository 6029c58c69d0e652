#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "perc/lattice.hpp"

namespace perc {

enum class SamplerFamily : std::uint8_t { bernoulli, ising };
enum class IsingBoundary : std::uint8_t { free, plus, minus };

// Everything a sampler needs; identical specs (seed included) produce
// bit-identical configuration sequences.
struct SamplerSpec {
  SamplerFamily family = SamplerFamily::bernoulli;
  BoxRegion window{0, {0, 0}};
  std::uint64_t seed = 0;

  double p = 0.5;  // bernoulli: P(spin 1)

  double beta = 0.0;    // ising: inverse temperature
  double h_field = 0.0; // ising: external field, in units of beta
  IsingBoundary boundary = IsingBoundary::free;
  int sweeps = 0;  // ising: heat-bath sweeps; 0 selects the 100 * side default
};

void validate_spec(const SamplerSpec& spec);
int effective_sweeps(const SamplerSpec& spec);

// One configuration from the given substream. Bernoulli draws one counter
// per site; ising starts from a random assignment (counters 0..nsites-1)
// and runs heat-bath sweeps (sweep s, site j uses counter
// nsites + s*nsites + j), then maps {-1,+1} to {0,1}.
Configuration sample_one(const SamplerSpec& spec, std::uint64_t stream);

// Streams 0..count-1 in order.
std::vector<Configuration> sample(const SamplerSpec& spec, int count);

// Lower envelope of local conditional probabilities: for each patch size
// n, the minimum over random probes (patch, local values, sampled
// exterior) of the exact conditional probability the sampler assigns.
struct EnergyCell {
  int n = 0;
  double c_min = 1.0;  // minimum probed conditional
  double mean = 0.0;   // mean probed conditional
  double se = 0.0;     // standard error of that mean
  long long probes = 0;
  bool insufficient = false;  // no usable probe (window smaller than n)
};

struct EnergyProfile {
  std::vector<EnergyCell> cells;  // sizes 1..n_max in order
};

// Conditionals are computed in closed form: a product for bernoulli, and
// for ising the exact Gibbs conditional of the patch given its sampled
// exterior (enumeration of the at most 2^4 patch states).
EnergyProfile estimate_energy_profile(const SamplerSpec& spec, int n_max, long long probes);

// Fixed catalogue of increasing events; increasing is guaranteed by
// construction of each definition, not checked at runtime.
enum class IncreasingEvent : std::uint8_t {
  origin_spin,          // spin 1 at the window center
  left_right_crossing,  // some 1*cluster touches both vertical edges
  bottom_top_crossing,  // some 1*cluster touches both horizontal edges
  circuit_in_annulus,   // a 1*circuit around the centered box of a third the half-width
};

inline constexpr std::array<IncreasingEvent, 4> kEventCatalogue = {
    IncreasingEvent::origin_spin,
    IncreasingEvent::left_right_crossing,
    IncreasingEvent::bottom_top_crossing,
    IncreasingEvent::circuit_in_annulus,
};

const char* event_name(IncreasingEvent e);
bool event_occurs(const Configuration& cfg, IncreasingEvent e);

struct CorrelationReport {
  IncreasingEvent event_a{};
  IncreasingEvent event_b{};
  long long trials = 0;
  double p_a = 0.0;
  double p_b = 0.0;
  double p_ab = 0.0;
  double covariance = 0.0;  // p_ab - p_a * p_b
  double se = 0.0;          // plug-in standard error of the covariance
};

CorrelationReport increasing_event_correlation(const SamplerSpec& spec, IncreasingEvent a,
                                               IncreasingEvent b, long long trials);

// 95% Wilson score interval; well-behaved at frequencies 0 and 1.
struct WilsonInterval {
  double lo = 0.0;
  double hi = 1.0;
};
WilsonInterval wilson95(long long successes, long long trials);

}  // namespace perc
