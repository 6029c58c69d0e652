#pragma once

#include <filesystem>
#include <string>

#include "perc/lattice.hpp"
#include "perc/measures.hpp"

namespace perc {

// Text grid format: first line "width height", then height rows of '0'/'1'
// characters, lowest-y row first. Only square odd-sided windows are
// representable (they are the only windows the lattice types admit).
std::string configuration_to_text(const Configuration& cfg);
Configuration configuration_from_text(const std::string& text, Site center = {0, 0});

// save_configuration writes the grid to `path` and a JSON sidecar to
// `path` + ".json" recording the window center (plus optional seed and
// sampler id, when given). load_configuration reads the grid and, if the
// sidecar exists, restores the center from it.
struct ConfigSidecar {
  Site center{0, 0};
  bool has_seed = false;
  std::uint64_t seed = 0;
  std::string sampler;  // empty when unknown
};

void save_configuration(const Configuration& cfg, const std::filesystem::path& path,
                        const ConfigSidecar& meta = {});
Configuration load_configuration(const std::filesystem::path& path);

// Sampler specs as key=value lines ('#' starts a comment). Keys:
//   family     bernoulli | ising
//   half_width nonnegative int          center_x / center_y  ints
//   seed       u64                      p                    double
//   beta       double                   h                    double
//   boundary   free | plus | minus      sweeps               int
// Unknown keys are rejected so typos fail loudly.
SamplerSpec sampler_from_keyvalues(const std::string& text);
std::string sampler_to_keyvalues(const SamplerSpec& spec);

SamplerSpec load_sampler(const std::filesystem::path& path);
void save_sampler(const SamplerSpec& spec, const std::filesystem::path& path);

const char* family_name(SamplerFamily f);
const char* boundary_name(IsingBoundary b);

}  // namespace perc
