// perclab: finite-window experiments for dependent site percolation on the
// matching pair of square lattices (nearest adjacency vs. star adjacency).
// One binary, scriptable subcommands, bit-reproducible reports.
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "perc/clusters.hpp"
#include "perc/config_io.hpp"
#include "perc/experiments.hpp"
#include "perc/flows.hpp"
#include "perc/report.hpp"
#include "perc/svg.hpp"

namespace {

using namespace perc;

void print_summary(const ExperimentReport& rep, const std::filesystem::path& out_dir) {
  std::cout << "experiment " << rep.experiment << " (" << rep.trials << " trials, seed "
            << rep.spec.seed << ")\n";
  for (const Estimate& e : rep.estimates) {
    std::cout << "  " << e.quantity;
    if (!e.group.empty()) std::cout << "[" << e.group << "]";
    std::cout << " = " << format_double(e.value);
    if (e.successes >= 0) {
      WilsonInterval w = wilson95(e.successes, e.trials);
      std::cout << "  (wilson95 " << format_double(w.lo) << ".." << format_double(w.hi) << ", n="
                << e.trials << ")";
    } else {
      std::cout << "  (se " << format_double(e.se) << ", n=" << e.trials << ")";
    }
    std::cout << "\n";
  }
  for (const std::string& n : rep.notes) std::cout << "  note: " << n << "\n";
  std::cout << "  wrote " << (out_dir / (rep.experiment + ".json")).string() << " and .csv\n";
}

template <class Fn>
int run_experiment(Fn&& fn, const std::filesystem::path& out_dir) {
  auto t0 = std::chrono::steady_clock::now();
  ExperimentReport rep = fn();
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_report(rep, out_dir, secs);
  print_summary(rep, out_dir);
  if (rep.violations > 0) {
    std::cerr << "property violation: " << rep.violations << " failures recorded\n";
    return 2;
  }
  return 0;
}

struct Check {
  int failures = 0;
  int total = 0;

  void expect(bool ok, const std::string& what) {
    ++total;
    if (ok) {
      std::cout << "[ok]   " << what << "\n";
    } else {
      ++failures;
      std::cout << "[FAIL] " << what << "\n";
    }
  }
};

SamplerSpec bernoulli_spec(int hw, double p, std::uint64_t seed) {
  SamplerSpec s;
  s.family = SamplerFamily::bernoulli;
  s.window = BoxRegion{hw, {0, 0}};
  s.p = p;
  s.seed = seed;
  return s;
}

double estimate_value(const ExperimentReport& rep, const std::string& quantity,
                      const std::string& group) {
  for (const Estimate& e : rep.estimates)
    if (e.quantity == quantity && e.group == group) return e.value;
  throw std::logic_error("selftest: missing estimate " + quantity + "[" + group + "]");
}

int selftest(long long trials, int jobs) {
  Check check;

  {
    DualityParams par;
    par.outer_halfwidths = {2, 3};
    par.trials = std::min<long long>(trials, 500);
    par.jobs = jobs;
    SamplerSpec spec = bernoulli_spec(3, 0.5, 1);
    ExperimentReport rep = exp_duality_sweep(spec, par);
    check.expect(rep.violations == 0, "duality dichotomy holds on sampled configurations");
    ExperimentReport again = exp_duality_sweep(spec, par);
    check.expect(report_to_json(rep) == report_to_json(again),
                 "duality report reproduces bit-exactly");
    DualityParams other = par;
    other.jobs = jobs == 1 ? 4 : 1;
    ExperimentReport parallel = exp_duality_sweep(spec, other);
    check.expect(report_to_json(rep) == report_to_json(parallel),
                 "duality report independent of job count");
  }

  {
    DualityParams par;
    par.outer_halfwidths = {2, 3};
    par.trials = 50;
    par.jobs = jobs;
    ExperimentReport all0 = exp_duality_sweep(bernoulli_spec(3, 0.0, 1), par);
    ExperimentReport all1 = exp_duality_sweep(bernoulli_spec(3, 1.0, 1), par);
    check.expect(estimate_value(all0, "zero_circuit", "d=2") == 1.0 &&
                     estimate_value(all0, "zero_circuit", "d=3") == 1.0,
                 "all-zero configurations always carry the blocking 0circuit");
    check.expect(estimate_value(all1, "one_connection", "d=2") == 1.0 &&
                     estimate_value(all1, "one_connection", "d=3") == 1.0,
                 "all-one configurations always carry the crossing 1*path");
  }

  {
    CoexistParams par;
    par.window_halfwidths = {3, 4};
    par.trials = std::min<long long>(trials, 100);
    par.jobs = jobs;
    ExperimentReport rep = exp_coexistence_decay(bernoulli_spec(4, 1.0, 1), par);
    check.expect(estimate_value(rep, "coexistence", "hw=3") == 0.0 &&
                     estimate_value(rep, "coexistence", "hw=4") == 0.0,
                 "no coexistence without spin-0 sites");
  }

  {
    ChainParams par;
    par.delta_halfwidth = 1;
    par.window_halfwidths = {3};
    par.trials = 50;
    par.jobs = jobs;
    ExperimentReport rep = exp_connection_chain(bernoulli_spec(3, 1.0, 1), par);
    bool all_one = estimate_value(rep, "c_hat", "hw=3") == 1.0 &&
                   estimate_value(rep, "pair_connection", "hw=3") == 1.0 &&
                   estimate_value(rep, "one_star_circuit", "hw=3") == 1.0;
    bool flags = estimate_value(rep, "flag_pair_ge_c2_half", "hw=3") == 1.0 &&
                 estimate_value(rep, "flag_oriented_ge_c2_quarter", "hw=3") == 1.0 &&
                 estimate_value(rep, "flag_circuit_ge_c4_sixteenth", "hw=3") == 1.0;
    check.expect(all_one && flags, "fully occupied chain estimates all reach 1");
  }

  {
    NeckletParams par;
    par.trials = std::min<long long>(trials, 100);
    par.jobs = jobs;
    SamplerSpec empty = bernoulli_spec(7, 0.0, 1);
    ExperimentReport rep0 = exp_necklet_census(empty, par);
    check.expect(rep0.violations == 0 && estimate_value(rep0, "flow_count", "N=0") == 1.0,
                 "empty configurations give flow 0 and a pearl-free necklet");
    NeckletParams dense = par;
    dense.t = 4;
    ExperimentReport rep = exp_necklet_census(bernoulli_spec(5, 0.25, 1), dense);
    bool conditional_ok = rep.violations == 0;
    for (const auto& row : rep.table_rows) {
      const bool regular = row[1] == row[2];   // flow == site-disjoint path count
      const bool constructed = row[4] == "1";
      if (regular && !constructed) conditional_ok = false;
      if (constructed && (row[3] != row[1] || row[5] != "pass")) conditional_ok = false;
    }
    check.expect(conditional_ok,
                 "flow-regular instances always construct; necklets carry flow-many pearls "
                 "and block");
  }

  {
    // Split window: spin 1 on rows y >= 1, spin 0 below. The extracted
    // boundary must separate exactly the vertical edge straddling the
    // interface.
    Configuration cfg(BoxRegion{3, {0, 0}});
    for (Site s : cfg.window().sites())
      if (s.y >= 1) cfg.set_spin(s, 1);
    EdgeHitProbe probe = boundary_shift_probe(cfg, 'n', {-2, -1, 0, 1, 2});
    bool good = probe.coexists && probe.hits == std::vector<std::uint8_t>{0, 0, 1, 0, 0};
    check.expect(good, "split configuration separates only the interface edge");
  }

  {
    CorrelationParams par;
    par.trials = std::min<long long>(trials, 200);
    par.jobs = jobs;
    ExperimentReport rep = exp_event_correlations(bernoulli_spec(3, 0.5, 1), par);
    bool ok = true;
    for (const Estimate& e : rep.estimates)
      if (e.quantity == "covariance" && e.value < -3.0 * e.se) ok = false;
    check.expect(ok, "catalogue events positively associated within three standard errors");
  }

  {
    SamplerSpec spec = bernoulli_spec(4, 0.3, 99);
    Configuration a = sample_one(spec, 5);
    Configuration b = sample_one(spec, 5);
    Configuration c = sample_one(spec, 6);
    check.expect(a == b && !(a == c), "sampling is a pure function of (spec, stream)");
  }

  std::cout << (check.failures == 0 ? "selftest passed" : "selftest FAILED") << " ("
            << (check.total - check.failures) << "/" << check.total << " checks)\n";
  return check.failures == 0 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite-window laboratory for site percolation on the matching square lattices"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path, "sampler spec file (key=value lines)");
  std::uint64_t seed = 1;
  auto* seed_opt = app.add_option("--seed", seed, "master seed");
  long long trials = 0;
  auto* trials_opt = app.add_option("--trials", trials, "number of trials");
  std::string out_dir = "out";
  app.add_option("--out", out_dir, "output directory for reports");
  int jobs = 1;
  app.add_option("--jobs", jobs, "worker threads (results are identical for any value)")
      ->check(CLI::PositiveNumber);
  bool exhaustive = false;
  app.add_flag("--exhaustive", exhaustive, "duality: enumerate all annulus configurations");

  std::string family_str;
  auto* family_opt = app.add_option("--family", family_str, "sampler family")
                         ->check(CLI::IsMember({"bernoulli", "ising"}));
  int hw = 7;
  auto* hw_opt = app.add_option("--hw", hw, "window half-width")->check(CLI::NonNegativeNumber);
  double p = 0.5;
  auto* p_opt = app.add_option("--p", p, "bernoulli spin-1 probability");
  double beta = 0.6;
  auto* beta_opt = app.add_option("--beta", beta, "ising inverse temperature");
  double h_field = 0.0;
  auto* h_opt = app.add_option("--field", h_field, "ising external field (units of beta)");
  std::string boundary_str;
  auto* boundary_opt = app.add_option("--boundary", boundary_str, "ising boundary condition")
                           ->check(CLI::IsMember({"free", "plus", "minus"}));
  int sweeps = 0;
  auto* sweeps_opt = app.add_option("--sweeps", sweeps, "ising heat-bath sweeps (0 = default)");

  auto* cmd_sample = app.add_subcommand("sample", "draw configurations and write grid files");
  auto* cmd_duality = app.add_subcommand("duality", "annulus dichotomy sweep");
  std::vector<int> outer_hws = {2, 3};
  cmd_duality->add_option("--outer", outer_hws, "annulus outer half-widths");
  auto* cmd_chain = app.add_subcommand("chain", "pointwise density to circuit chain");
  int delta_hw = 2;
  cmd_chain->add_option("--delta-hw", delta_hw, "avoided box half-width");
  std::vector<int> window_hws;
  cmd_chain->add_option("--window-hw", window_hws, "window half-widths");
  auto* cmd_coexist = app.add_subcommand("coexist", "spanning cluster coexistence frequency");
  cmd_coexist->add_option("--window-hw", window_hws, "window half-widths");
  auto* cmd_necklet = app.add_subcommand("necklet", "min-cut necklet census");
  int gamma_hw = 1, ring_s = 2, ring_t = 3;
  cmd_necklet->add_option("--gamma-hw", gamma_hw, "blocked box half-width");
  cmd_necklet->add_option("--s", ring_s, "source ring box half-width");
  cmd_necklet->add_option("--t", ring_t, "sink ring box half-width");
  auto* cmd_boundary = app.add_subcommand("boundary", "boundary curve edge-separation shifts");
  std::string axis_str = "ns";
  cmd_boundary->add_option("--axis", axis_str, "probe edge axis")
      ->check(CLI::IsMember({"ns", "ew"}));
  std::vector<int> shifts = {-2, -1, 0, 1, 2};
  cmd_boundary->add_option("--shift", shifts, "edge translations along the axis");
  auto* cmd_render = app.add_subcommand("render", "write an SVG rendering");
  std::string grid_path, overlay = "cells", out_file;
  cmd_render->add_option("--grid", grid_path, "configuration grid file to render");
  cmd_render->add_option("--overlay", overlay, "overlay kind")
      ->check(CLI::IsMember({"cells", "boundary", "necklet"}));
  cmd_render->add_option("--gamma-hw", gamma_hw, "necklet overlay: blocked box half-width");
  cmd_render->add_option("--s", ring_s, "necklet overlay: source ring half-width");
  cmd_render->add_option("--t", ring_t, "necklet overlay: sink ring half-width");
  cmd_render->add_option("--out-file", out_file, "SVG path (default <out>/render.svg)");
  auto* cmd_selftest = app.add_subcommand("selftest", "deterministic end-to-end smoke checks");

  for (auto* sub : {cmd_sample, cmd_duality, cmd_chain, cmd_coexist, cmd_necklet, cmd_boundary,
                    cmd_render, cmd_selftest})
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    SamplerSpec spec;
    spec.window = BoxRegion{7, {0, 0}};
    if (!config_path.empty()) spec = load_sampler(config_path);
    if (family_opt->count())
      spec.family = family_str == "ising" ? SamplerFamily::ising : SamplerFamily::bernoulli;
    if (hw_opt->count()) spec.window = BoxRegion{hw, spec.window.center};
    if (seed_opt->count() || config_path.empty()) spec.seed = seed;
    if (p_opt->count()) spec.p = p;
    if (beta_opt->count()) spec.beta = beta;
    if (h_opt->count()) spec.h_field = h_field;
    if (boundary_opt->count())
      spec.boundary = boundary_str == "plus"    ? IsingBoundary::plus
                      : boundary_str == "minus" ? IsingBoundary::minus
                                                : IsingBoundary::free;
    if (sweeps_opt->count()) spec.sweeps = sweeps;
    validate_spec(spec);

    if (*cmd_sample) {
      long long count = trials_opt->count() ? trials : 1;
      std::filesystem::create_directories(out_dir);
      for (long long i = 0; i < count; ++i) {
        Configuration cfg = sample_one(spec, (std::uint64_t)i);
        ConfigSidecar meta;
        meta.center = spec.window.center;
        meta.has_seed = true;
        meta.seed = spec.seed;
        meta.sampler = family_name(spec.family);
        std::filesystem::path path =
            std::filesystem::path(out_dir) / ("sample_" + std::to_string(i) + ".txt");
        save_configuration(cfg, path, meta);
        std::cout << path.string() << "\n";
      }
      return 0;
    }

    if (*cmd_duality) {
      DualityParams par;
      par.outer_halfwidths = outer_hws;
      if (trials_opt->count()) par.trials = trials;
      par.exhaustive = exhaustive;
      par.jobs = jobs;
      return run_experiment([&] { return exp_duality_sweep(spec, par); }, out_dir);
    }

    if (*cmd_chain) {
      ChainParams par;
      par.delta_halfwidth = delta_hw;
      par.window_halfwidths =
          window_hws.empty() ? std::vector<int>{spec.window.half_width} : window_hws;
      if (trials_opt->count()) par.trials = trials;
      par.jobs = jobs;
      return run_experiment([&] { return exp_connection_chain(spec, par); }, out_dir);
    }

    if (*cmd_coexist) {
      CoexistParams par;
      par.window_halfwidths =
          window_hws.empty() ? std::vector<int>{spec.window.half_width} : window_hws;
      if (trials_opt->count()) par.trials = trials;
      par.jobs = jobs;
      return run_experiment([&] { return exp_coexistence_decay(spec, par); }, out_dir);
    }

    if (*cmd_necklet) {
      NeckletParams par;
      par.gamma_halfwidth = gamma_hw;
      par.s = ring_s;
      par.t = ring_t;
      if (trials_opt->count()) par.trials = trials;
      par.jobs = jobs;
      return run_experiment([&] { return exp_necklet_census(spec, par); }, out_dir);
    }

    if (*cmd_boundary) {
      BoundaryShiftParams par;
      par.axis = axis_str == "ew" ? 'e' : 'n';
      par.shifts = shifts;
      if (trials_opt->count()) par.trials = trials;
      par.jobs = jobs;
      return run_experiment([&] { return exp_boundary_shift(spec, par); }, out_dir);
    }

    if (*cmd_render) {
      Configuration cfg =
          grid_path.empty() ? sample_one(spec, 0) : load_configuration(grid_path);
      std::string svg;
      if (overlay == "cells") {
        svg = svg_render(cfg);
      } else if (overlay == "boundary") {
        ClusterLabeling ones = label_clusters(cfg, 1, Kind::star);
        int id = largest_spanning_cluster(ones);
        if (id < 0) id = largest_cluster(ones);
        if (id < 0) {
          svg = svg_render(cfg);  // nothing to outline
        } else {
          Configuration filled = fill_holes(cfg, id);
          ClusterLabeling refilled = label_clusters(filled, 1, Kind::star);
          int fid = refilled.label_at(ones.clusters[(size_t)id].min_site);
          svg = svg_render(cfg, boundary_curve(filled, fid));
        }
      } else {
        NeckletResult res =
            necklet_construct(cfg, BoxRegion{gamma_hw + 1, cfg.window().center}, ring_s, ring_t);
        if (!res.valid) {
          std::cerr << "necklet construction failed: " << res.failure << "\n";
          return 2;
        }
        svg = svg_render(cfg, res.necklet);
      }
      std::filesystem::path path = out_file.empty()
                                       ? std::filesystem::path(out_dir) / "render.svg"
                                       : std::filesystem::path(out_file);
      if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
      write_svg(svg, path);
      std::cout << path.string() << "\n";
      return 0;
    }

    if (*cmd_selftest) return selftest(trials_opt->count() ? trials : 200, jobs);
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
