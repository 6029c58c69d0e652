#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "perc/measures.hpp"

namespace perc {

// One reported quantity. Frequencies carry their raw counts so the Wilson
// interval can be recomputed; derived quantities (covariances, means) set
// successes = -1 and report value/se only.
struct Estimate {
  std::string quantity;
  std::string group;  // e.g. a window size or shift label; empty when ungrouped
  double value = 0.0;
  double se = 0.0;
  long long successes = -1;
  long long trials = 0;
};

// Experiment output. Everything here is a pure function of the sampler
// spec, the parameters and the master seed; builders only ever append.
// Wall-clock time never enters this struct — write_report puts it in the
// sidecar log so the JSON and CSV stay bit-reproducible.
struct ExperimentReport {
  std::string experiment;
  SamplerSpec spec;
  long long trials = 0;
  long long violations = 0;  // property violations observed (drives exit code 2)
  std::vector<Estimate> estimates;
  std::vector<std::string> notes;
  std::vector<std::string> table_columns;            // per-trial / per-size CSV table
  std::vector<std::vector<std::string>> table_rows;  // same width as table_columns

  void add_frequency(std::string quantity, std::string group, long long successes,
                     long long trials);
  void add_value(std::string quantity, std::string group, double value, double se,
                 long long trials);
};

// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

std::string report_to_json(const ExperimentReport& rep);
std::string report_to_csv(const ExperimentReport& rep);

// Writes <name>.json, <name>.csv and <name>.log under out_dir, where
// <name> is the experiment id. Only the .log mentions elapsed time.
void write_report(const ExperimentReport& rep, const std::filesystem::path& out_dir,
                  double elapsed_seconds);

}  // namespace perc
