#include "perc/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "json.hpp"
#include "perc/config_io.hpp"

namespace perc {

namespace {
using ordered_json = nlohmann::ordered_json;
}

void ExperimentReport::add_frequency(std::string quantity, std::string group,
                                     long long successes, long long n) {
  Estimate e;
  e.quantity = std::move(quantity);
  e.group = std::move(group);
  e.successes = successes;
  e.trials = n;
  e.value = n > 0 ? (double)successes / (double)n : 0.0;
  e.se = n > 0 ? std::sqrt(e.value * (1.0 - e.value) / (double)n) : 0.0;
  estimates.push_back(std::move(e));
}

void ExperimentReport::add_value(std::string quantity, std::string group, double value,
                                 double se, long long n) {
  Estimate e;
  e.quantity = std::move(quantity);
  e.group = std::move(group);
  e.value = value;
  e.se = se;
  e.trials = n;
  estimates.push_back(std::move(e));
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string report_to_json(const ExperimentReport& rep) {
  ordered_json j;
  j["experiment"] = rep.experiment;

  ordered_json sampler;
  sampler["family"] = family_name(rep.spec.family);
  sampler["half_width"] = rep.spec.window.half_width;
  sampler["center"] = {rep.spec.window.center.x, rep.spec.window.center.y};
  sampler["seed"] = rep.spec.seed;
  if (rep.spec.family == SamplerFamily::bernoulli) {
    sampler["p"] = rep.spec.p;
  } else {
    sampler["beta"] = rep.spec.beta;
    sampler["h"] = rep.spec.h_field;
    sampler["boundary"] = boundary_name(rep.spec.boundary);
    sampler["sweeps"] = effective_sweeps(rep.spec);
  }
  j["sampler"] = std::move(sampler);

  j["seed"] = rep.spec.seed;
  j["trials"] = rep.trials;
  j["violations"] = rep.violations;

  ordered_json ests = ordered_json::array();
  for (const Estimate& e : rep.estimates) {
    ordered_json je;
    je["quantity"] = e.quantity;
    je["group"] = e.group;
    je["value"] = e.value;
    je["se"] = e.se;
    je["trials"] = e.trials;
    if (e.successes >= 0) {
      WilsonInterval w = wilson95(e.successes, e.trials);
      je["successes"] = e.successes;
      je["wilson_lo"] = w.lo;
      je["wilson_hi"] = w.hi;
    }
    ests.push_back(std::move(je));
  }
  j["estimates"] = std::move(ests);
  j["notes"] = rep.notes;

  ordered_json table;
  table["columns"] = rep.table_columns;
  table["rows"] = rep.table_rows;
  j["table"] = std::move(table);

  return j.dump(2) + "\n";
}

namespace {

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::string report_to_csv(const ExperimentReport& rep) {
  std::string out;
  for (size_t i = 0; i < rep.table_columns.size(); ++i) {
    if (i) out += ',';
    out += csv_escape(rep.table_columns[i]);
  }
  out += '\n';
  for (const auto& row : rep.table_rows) {
    if (row.size() != rep.table_columns.size())
      throw std::logic_error("report: table row width mismatch");
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += csv_escape(row[i]);
    }
    out += '\n';
  }
  return out;
}

void write_report(const ExperimentReport& rep, const std::filesystem::path& out_dir,
                  double elapsed_seconds) {
  std::filesystem::create_directories(out_dir);
  auto write = [&](const std::string& ext, const std::string& text) {
    std::filesystem::path p = out_dir / (rep.experiment + ext);
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << text;
  };
  write(".json", report_to_json(rep));
  write(".csv", report_to_csv(rep));
  write(".log", "experiment " + rep.experiment + " finished in " +
                    format_double(elapsed_seconds) + " s\n");
}

}  // namespace perc
