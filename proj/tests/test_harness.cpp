#include <sys/wait.h>

#include <array>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "oracles.hpp"
#include "perc/clusters.hpp"
#include "perc/config_io.hpp"
#include "perc/experiments.hpp"
#include "perc/flows.hpp"
#include "perc/report.hpp"
#include "perc/svg.hpp"

using namespace perc;
namespace fs = std::filesystem;

namespace {

SamplerSpec bern(int half_width, double p, std::uint64_t seed) {
  SamplerSpec s;
  s.family = SamplerFamily::bernoulli;
  s.window = BoxRegion{half_width, {0, 0}};
  s.p = p;
  s.seed = seed;
  return s;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE_MESSAGE(in.good(), "missing file ", path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int count_substr(const std::string& hay, const std::string& needle) {
  int n = 0;
  for (size_t pos = hay.find(needle); pos != std::string::npos;
       pos = hay.find(needle, pos + needle.size()))
    ++n;
  return n;
}

const Estimate& find_estimate(const ExperimentReport& rep, const std::string& quantity,
                              const std::string& group) {
  for (const Estimate& e : rep.estimates)
    if (e.quantity == quantity && e.group == group) return e;
  REQUIRE_MESSAGE(false, "estimate ", quantity, "[", group, "] not in report");
  static Estimate dummy;
  return dummy;
}

fs::path fresh_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(PERC_CLI_BIN) + " " + args + " >/dev/null 2>/dev/null";
  int rc = std::system(cmd.c_str());
  REQUIRE(rc != -1);
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

bool throws_mentioning(const std::function<void()>& fn, const std::string& fragment) {
  try {
    fn();
  } catch (const std::invalid_argument& e) {
    return std::string(e.what()).find(fragment) != std::string::npos;
  }
  return false;
}

}  // namespace

TEST_CASE("grid text format round-trips and rejects malformed input") {
  Configuration cfg = oracle::random_configuration(BoxRegion{3, {0, 0}}, 0.4, 12345);
  Configuration back = configuration_from_text(configuration_to_text(cfg));
  CHECK(back == cfg);
  CHECK(back.window().half_width == 3);

  Configuration one = configuration_from_text("1 1\n1\n");
  CHECK(one.window().site_count() == 1);
  CHECK(one.spin({0, 0}) == 1);

  // The grid stores rows lowest-y first.
  Configuration bottom_row = configuration_from_text("3 3\n111\n000\n000\n");
  for (int x = -1; x <= 1; ++x) {
    CHECK(bottom_row.spin({x, -1}) == 1);
    CHECK(bottom_row.spin({x, 1}) == 0);
  }

  CHECK_THROWS_AS(configuration_from_text(""), std::invalid_argument);
  CHECK_THROWS_AS(configuration_from_text("4 4\n0000\n0000\n0000\n0000\n"),
                  std::invalid_argument);
  CHECK_THROWS_AS(configuration_from_text("3 5\n000\n000\n000\n"), std::invalid_argument);
  CHECK_THROWS_AS(configuration_from_text("3 3\n000\n00\n000\n"), std::invalid_argument);
  CHECK_THROWS_AS(configuration_from_text("3 3\n000\n0x0\n000\n"), std::invalid_argument);
  CHECK_THROWS_AS(configuration_from_text("3 3\n000\n000\n000\nextra"), std::invalid_argument);
  CHECK_THROWS_AS(configuration_from_text("3 3\n000\n000\n"), std::invalid_argument);
  CHECK(throws_mentioning([] { (void)configuration_from_text("3 3\n000\n00\n000\n"); },
                          "row 1"));
}

TEST_CASE("configuration files carry their sidecar metadata") {
  const fs::path dir = fresh_dir("perc_test_sidecar");
  Configuration cfg = oracle::random_configuration(BoxRegion{2, {5, -7}}, 0.5, 99);

  ConfigSidecar meta;
  meta.center = {5, -7};
  meta.has_seed = true;
  meta.seed = 424242;
  meta.sampler = "bernoulli";
  save_configuration(cfg, dir / "grid.txt", meta);
  CHECK(fs::exists(dir / "grid.txt.json"));

  Configuration loaded = load_configuration(dir / "grid.txt");
  CHECK(loaded == cfg);
  CHECK(loaded.window().center == Site{5, -7});

  // Without the sidecar the window centers on the origin.
  fs::remove(dir / "grid.txt.json");
  Configuration recentered = load_configuration(dir / "grid.txt");
  CHECK(recentered.window().center == Site{0, 0});
  CHECK(recentered.raw() == cfg.raw());

  CHECK_THROWS_AS(load_configuration(dir / "absent.txt"), std::runtime_error);
}

TEST_CASE("sampler key=value files round-trip and fail loudly with line numbers") {
  SamplerSpec ising;
  ising.family = SamplerFamily::ising;
  ising.window = BoxRegion{9, {3, -2}};
  ising.seed = 0xFEEDFACEull;
  ising.beta = 0.75;
  ising.h_field = -0.125;
  ising.boundary = IsingBoundary::minus;
  ising.sweeps = 42;
  SamplerSpec back = sampler_from_keyvalues(sampler_to_keyvalues(ising));
  CHECK(back.family == SamplerFamily::ising);
  CHECK(back.window.half_width == 9);
  CHECK(back.window.center == Site{3, -2});
  CHECK(back.seed == ising.seed);
  CHECK(back.beta == ising.beta);
  CHECK(back.h_field == ising.h_field);
  CHECK(back.boundary == IsingBoundary::minus);
  CHECK(back.sweeps == 42);

  SamplerSpec b = bern(4, 0.375, 77);
  SamplerSpec b2 = sampler_from_keyvalues(sampler_to_keyvalues(b));
  CHECK(b2.family == SamplerFamily::bernoulli);
  CHECK(b2.p == 0.375);
  CHECK(b2.window.half_width == 4);
  CHECK(b2.seed == 77);

  // Comments, blank lines and whitespace are tolerated.
  SamplerSpec relaxed = sampler_from_keyvalues(
      "# a comment line\n  family = bernoulli  # trailing comment\n\np=0.25\nhalf_width = 2\n");
  CHECK(relaxed.p == 0.25);
  CHECK(relaxed.window.half_width == 2);

  // Typos and bad values are rejected with the offending line number.
  CHECK(throws_mentioning([] { (void)sampler_from_keyvalues("familly = bernoulli\n"); },
                          "line 1"));
  CHECK(throws_mentioning([] { (void)sampler_from_keyvalues("familly = bernoulli\n"); },
                          "unknown key"));
  CHECK(throws_mentioning([] { (void)sampler_from_keyvalues("p = 0.5\nbogus line\n"); },
                          "line 2"));
  CHECK(throws_mentioning([] { (void)sampler_from_keyvalues("p =\n"); }, "empty key or value"));
  CHECK(throws_mentioning([] { (void)sampler_from_keyvalues("family = gauss\n"); },
                          "unknown family"));
  CHECK(throws_mentioning(
      [] { (void)sampler_from_keyvalues("seed = 99999999999999999999999999\n"); },
      "out of range"));
  // Structurally fine but semantically invalid specs fail validation.
  CHECK_THROWS_AS((void)sampler_from_keyvalues("family = bernoulli\np = 1.5\n"),
                  std::invalid_argument);

  const fs::path dir = fresh_dir("perc_test_sampler_io");
  save_sampler(ising, dir / "spec.cfg");
  SamplerSpec from_disk = load_sampler(dir / "spec.cfg");
  CHECK(from_disk.beta == ising.beta);
  CHECK(from_disk.sweeps == ising.sweeps);
}

TEST_CASE("reports serialize to recomputable json and csv") {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 6.02214076e23, -2.5, 0.30000000000000004, 0.0}) {
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(0.00390625) == "0.00390625");

  ExperimentReport rep;
  rep.experiment = "duality";
  rep.spec = bern(3, 0.25, 7);
  rep.trials = 10;
  rep.add_frequency("hits", "d=2", 3, 10);
  rep.add_value("derived", "", 1.5, 0.25, 7);
  rep.notes.push_back("a note");
  rep.table_columns = {"c1", "c2"};
  rep.table_rows.push_back({"plain", "has,comma\"and quote"});

  CHECK(rep.estimates[0].value == 0.3);
  CHECK(rep.estimates[0].successes == 3);
  CHECK(rep.estimates[1].successes == -1);

  nlohmann::json j = nlohmann::json::parse(report_to_json(rep));
  CHECK(j["experiment"] == "duality");
  CHECK(j["sampler"]["family"] == "bernoulli");
  CHECK(j["sampler"]["p"].get<double>() == 0.25);
  CHECK(j["sampler"]["half_width"] == 3);
  CHECK(j["seed"] == 7);
  CHECK(j["trials"] == 10);
  CHECK(j["violations"] == 0);
  REQUIRE(j["estimates"].size() == 2);
  CHECK(j["estimates"][0]["successes"] == 3);
  CHECK(j["estimates"][0].contains("wilson_lo"));
  CHECK(j["estimates"][0]["value"].get<double>() == 0.3);
  CHECK_FALSE(j["estimates"][1].contains("successes"));
  CHECK(j["notes"][0] == "a note");
  CHECK(j["table"]["columns"].size() == 2);

  // Ising specs serialize their own parameter block.
  ExperimentReport irep;
  irep.experiment = "coexist";
  irep.spec.family = SamplerFamily::ising;
  irep.spec.window = BoxRegion{4, {0, 0}};
  irep.spec.beta = 1.0;
  irep.spec.boundary = IsingBoundary::plus;
  nlohmann::json ij = nlohmann::json::parse(report_to_json(irep));
  CHECK(ij["sampler"]["beta"].get<double>() == 1.0);
  CHECK(ij["sampler"]["boundary"] == "plus");
  CHECK(ij["sampler"]["sweeps"] == 900);
  CHECK_FALSE(ij["sampler"].contains("p"));

  CHECK(report_to_csv(rep) == "c1,c2\nplain,\"has,comma\"\"and quote\"\n");
  ExperimentReport bad = rep;
  bad.table_rows.push_back({"only one"});
  CHECK_THROWS_AS((void)report_to_csv(bad), std::logic_error);

  // write_report emits json/csv/log; wall clock only ever touches the log.
  const fs::path dir = fresh_dir("perc_test_report");
  write_report(rep, dir / "a", 1.25);
  write_report(rep, dir / "b", 99.5);
  CHECK(slurp(dir / "a/duality.json") == report_to_json(rep));
  CHECK(slurp(dir / "a/duality.csv") == report_to_csv(rep));
  CHECK(slurp(dir / "a/duality.json") == slurp(dir / "b/duality.json"));
  CHECK(slurp(dir / "a/duality.csv") == slurp(dir / "b/duality.csv"));
  CHECK(slurp(dir / "a/duality.log") != slurp(dir / "b/duality.log"));
  CHECK(count_substr(slurp(dir / "a/duality.log"), "finished in") == 1);

  // The documented schema ships with the repo and is itself valid JSON.
  nlohmann::json schema =
      nlohmann::json::parse(slurp(fs::path(PERC_TEST_DATA_DIR) / "../docs/report.schema.json"));
  for (const char* key : {"experiment", "sampler", "seed", "trials", "violations", "estimates",
                          "notes", "table"}) {
    bool required = false;
    for (const auto& r : schema["required"]) required |= r == key;
    CHECK_MESSAGE(required, "schema misses required key ", key);
    CHECK(j.contains(key));
  }
}

TEST_CASE("experiments are pure functions of spec, parameters and seed") {
  const SamplerSpec spec = bern(3, 0.5, 31337);

  DualityParams dpar;
  dpar.outer_halfwidths = {2, 3};
  dpar.trials = 300;
  ExperimentReport d1 = exp_duality_sweep(spec, dpar);
  DualityParams dpar4 = dpar;
  dpar4.jobs = 4;
  CHECK(report_to_json(d1) == report_to_json(exp_duality_sweep(spec, dpar)));
  CHECK(report_to_json(d1) == report_to_json(exp_duality_sweep(spec, dpar4)));
  CHECK(d1.violations == 0);
  // The dichotomy is exactly-one per configuration, so the two sides
  // partition every trial.
  for (int d : {2, 3}) {
    const std::string g = "d=" + std::to_string(d);
    CHECK(find_estimate(d1, "zero_circuit", g).successes +
              find_estimate(d1, "one_connection", g).successes ==
          300);
  }

  ChainParams cpar;
  cpar.delta_halfwidth = 1;
  cpar.window_halfwidths = {4};
  cpar.trials = 60;
  ChainParams cpar3 = cpar;
  cpar3.jobs = 3;
  CHECK(report_to_json(exp_connection_chain(spec, cpar)) ==
        report_to_json(exp_connection_chain(spec, cpar3)));

  CoexistParams xpar;
  xpar.window_halfwidths = {2, 3};
  xpar.trials = 200;
  CoexistParams xpar4 = xpar;
  xpar4.jobs = 4;
  CHECK(report_to_json(exp_coexistence_decay(spec, xpar)) ==
        report_to_json(exp_coexistence_decay(spec, xpar4)));

  NeckletParams npar;
  npar.gamma_halfwidth = 1;
  npar.s = 2;
  npar.t = 4;
  npar.trials = 60;
  NeckletParams npar4 = npar;
  npar4.jobs = 4;
  const SamplerSpec nspec = bern(5, 0.25, 8);
  ExperimentReport n1 = exp_necklet_census(nspec, npar);
  ExperimentReport n4 = exp_necklet_census(nspec, npar4);
  CHECK(report_to_json(n1) == report_to_json(n4));
  CHECK(report_to_csv(n1) == report_to_csv(n4));

  BoundaryShiftParams bpar;
  bpar.axis = 'n';
  bpar.shifts = {-1, 0, 1};
  bpar.trials = 150;
  BoundaryShiftParams bpar4 = bpar;
  bpar4.jobs = 4;
  const SamplerSpec bspec = bern(4, 0.55, 17);
  CHECK(report_to_json(exp_boundary_shift(bspec, bpar)) ==
        report_to_json(exp_boundary_shift(bspec, bpar4)));

  CorrelationParams kpar;
  kpar.trials = 150;
  CorrelationParams kpar4 = kpar;
  kpar4.jobs = 4;
  CHECK(report_to_json(exp_event_correlations(bspec, kpar)) ==
        report_to_json(exp_event_correlations(bspec, kpar4)));
}

TEST_CASE("experiment trivial laws hold") {
  DualityParams dpar;
  dpar.outer_halfwidths = {2, 3};
  dpar.trials = 40;
  ExperimentReport all0 = exp_duality_sweep(bern(3, 0.0, 1), dpar);
  ExperimentReport all1 = exp_duality_sweep(bern(3, 1.0, 1), dpar);
  for (int d : {2, 3}) {
    const std::string g = "d=" + std::to_string(d);
    CHECK(find_estimate(all0, "zero_circuit", g).value == 1.0);
    CHECK(find_estimate(all0, "one_connection", g).value == 0.0);
    CHECK(find_estimate(all1, "zero_circuit", g).value == 0.0);
    CHECK(find_estimate(all1, "one_connection", g).value == 1.0);
  }
  CHECK_THROWS_AS(exp_duality_sweep(bern(3, 0.5, 1), DualityParams{{2, 9}, 10, false, 1}),
                  std::invalid_argument);
  CHECK_THROWS_AS(exp_duality_sweep(bern(3, 0.5, 1), DualityParams{{2}, 0, false, 1}),
                  std::invalid_argument);

  // Fully occupied window: every chain estimate is 1 and every flag holds.
  ChainParams cpar;
  cpar.delta_halfwidth = 1;
  cpar.window_halfwidths = {3};
  cpar.trials = 30;
  ExperimentReport chain = exp_connection_chain(bern(3, 1.0, 1), cpar);
  for (const char* q : {"c_hat", "pair_connection", "cw_connection", "ccw_connection",
                        "one_star_circuit", "flag_pair_ge_c2_half",
                        "flag_oriented_ge_c2_quarter", "flag_circuit_ge_c4_sixteenth"})
    CHECK(find_estimate(chain, q, "hw=3").value == 1.0);

  // Threshold arithmetic: the reported thresholds are powers of the
  // reported density, and a density of one half puts the circuit
  // threshold at exactly 1/256 of 0.5^0 / 16 = 0.00390625.
  ExperimentReport mid = exp_connection_chain(bern(4, 0.55, 99), ChainParams{1, {4}, 300, 1});
  const double c_hat = find_estimate(mid, "c_hat", "hw=4").value;
  CHECK(find_estimate(mid, "threshold_c2_half", "hw=4").value == c_hat * c_hat / 2.0);
  CHECK(find_estimate(mid, "threshold_c2_quarter", "hw=4").value == c_hat * c_hat / 4.0);
  CHECK(find_estimate(mid, "threshold_c4_sixteenth", "hw=4").value ==
        c_hat * c_hat * c_hat * c_hat / 16.0);
  CHECK(0.5 * 0.5 * 0.5 * 0.5 / 16.0 == 0.00390625);
  CHECK(find_estimate(mid, "flag_pair_ge_c2_half", "hw=4").value ==
        ((find_estimate(mid, "pair_connection", "hw=4").value >= c_hat * c_hat / 2.0) ? 1.0
                                                                                      : 0.0));

  // Coexistence requires both spin values.
  CoexistParams xpar;
  xpar.window_halfwidths = {2, 3};
  xpar.trials = 50;
  ExperimentReport cx1 = exp_coexistence_decay(bern(3, 1.0, 1), xpar);
  ExperimentReport cx0 = exp_coexistence_decay(bern(3, 0.0, 1), xpar);
  for (int hw : {2, 3}) {
    const std::string g = "hw=" + std::to_string(hw);
    CHECK(find_estimate(cx1, "coexistence", g).value == 0.0);
    CHECK(find_estimate(cx0, "coexistence", g).value == 0.0);
  }

  // 3x3 window: the sampled coexistence frequency sits within four sigma
  // of the exact probability enumerated over all 512 configurations.
  double exact = 0.0;
  {
    const BoxRegion w{1, {0, 0}};
    const std::vector<Site> sites = w.sites();
    for (std::uint32_t mask = 0; mask < 512; ++mask) {
      Configuration cfg(w);
      for (std::size_t j = 0; j < sites.size(); ++j)
        if (mask >> j & 1u) cfg.set_spin(sites[j], 1);
      if (!spanning_clusters(cfg, 0, Kind::nearest).empty() &&
          !spanning_clusters(cfg, 1, Kind::star).empty())
        exact += 1.0 / 512.0;
    }
  }
  CoexistParams tiny;
  tiny.window_halfwidths = {1};
  tiny.trials = 4000;
  const double est = find_estimate(exp_coexistence_decay(bern(1, 0.5, 2718), tiny),
                                   "coexistence", "hw=1")
                         .value;
  const double sigma = std::sqrt(exact * (1.0 - exact) / 4000.0);
  CHECK(std::abs(est - exact) <= 4.0 * sigma + 1e-12);
  CHECK(exact > 0.0);

  // Empty configurations: flow zero, a pearl-free necklet, every
  // validation passes.
  NeckletParams npar;
  npar.trials = 50;
  ExperimentReport nk = exp_necklet_census(bern(7, 0.0, 1), npar);
  CHECK(nk.violations == 0);
  CHECK(find_estimate(nk, "construct_pass", "").value == 1.0);
  CHECK(find_estimate(nk, "blocking_pass", "").value == 1.0);
  CHECK(find_estimate(nk, "blocking_pass", "").trials == 50);
  CHECK(find_estimate(nk, "flow_count", "N=0").value == 1.0);
  CHECK(find_estimate(nk, "mean_flow", "").value == 0.0);
  CHECK(nk.table_rows.size() == 50);
  for (const auto& row : nk.table_rows) {
    CHECK(row[1] == "0");
    CHECK(row[4] == "1");
    CHECK(row[5] == "pass");
  }
  CHECK_THROWS_AS(exp_necklet_census(bern(3, 0.5, 1), NeckletParams{1, 2, 3, 10, 1}),
                  std::invalid_argument);  // window too small for t + 1
  CHECK_THROWS_AS(exp_necklet_census(bern(7, 0.5, 1), NeckletParams{2, 2, 4, 10, 1}),
                  std::invalid_argument);  // gamma + 1 > s
  CHECK_THROWS_AS(exp_necklet_census(bern(7, 0.5, 1), NeckletParams{1, 4, 3, 10, 1}),
                  std::invalid_argument);  // s >= t

  // Split window: the extracted boundary separates exactly the probe edge
  // on the interface, on both axes.
  Configuration split_n(BoxRegion{3, {0, 0}});
  for (Site s : split_n.window().sites())
    if (s.y >= 1) split_n.set_spin(s, 1);
  EdgeHitProbe pn = boundary_shift_probe(split_n, 'n', {-2, -1, 0, 1, 2});
  CHECK(pn.coexists);
  CHECK(pn.hits == std::vector<std::uint8_t>{0, 0, 1, 0, 0});

  Configuration split_e(BoxRegion{3, {0, 0}});
  for (Site s : split_e.window().sites())
    if (s.x >= 1) split_e.set_spin(s, 1);
  EdgeHitProbe pe = boundary_shift_probe(split_e, 'e', {-2, -1, 0, 1, 2});
  CHECK(pe.coexists);
  CHECK(pe.hits == std::vector<std::uint8_t>{0, 0, 1, 0, 0});

  CHECK_FALSE(boundary_shift_probe(Configuration(BoxRegion{3, {0, 0}}), 'n', {0}).coexists);
  CHECK_THROWS_AS(boundary_shift_probe(split_n, 'x', {0}), std::invalid_argument);
  CHECK_THROWS_AS(boundary_shift_probe(split_n, 'n', {3}), std::invalid_argument);

  // The shift experiment's per-edge frequencies condition on coexistence:
  // their trial counts equal the coexistence successes, and the reported
  // spread is the range of the per-shift values.
  BoundaryShiftParams bpar;
  bpar.shifts = {-1, 0, 1};
  bpar.trials = 300;
  ExperimentReport bs = exp_boundary_shift(bern(4, 0.55, 12), bpar);
  const long long coex = find_estimate(bs, "coexistence", "").successes;
  CHECK(coex > 10);
  double lo = 1.0, hi = 0.0;
  for (int k : {-1, 0, 1}) {
    const Estimate& e = find_estimate(bs, "edge_separation", "shift=" + std::to_string(k));
    CHECK(e.trials == coex);
    CHECK((0.0 <= e.value && e.value <= 1.0));
    lo = std::min(lo, e.value);
    hi = std::max(hi, e.value);
  }
  CHECK(find_estimate(bs, "separation_spread", "").value == hi - lo);
}

TEST_CASE("exhaustive duality sweep enumerates every annulus configuration") {
  // All 2^24 spin assignments of the annulus between the center site and
  // the 5x5 box, checked one by one: the dichotomy never fails, and the
  // two sides partition the count. The split (131848 blocking 0circuits)
  // is frozen from the first audited enumeration; any change to the
  // search code that shifts it is a regression.
  DualityParams par;
  par.outer_halfwidths = {2};
  par.exhaustive = true;
  par.jobs = 2;
  ExperimentReport rep = exp_duality_sweep(bern(2, 0.5, 1), par);
  CHECK(rep.trials == (1ll << 24));
  CHECK(rep.violations == 0);
  const Estimate& zero = find_estimate(rep, "zero_circuit", "d=2");
  const Estimate& one = find_estimate(rep, "one_connection", "d=2");
  CHECK(zero.successes == 131848);
  CHECK(one.successes == 16645368);
  CHECK(zero.successes + one.successes == (1ll << 24));

  DualityParams bad = par;
  bad.outer_halfwidths = {2, 3};
  CHECK_THROWS_AS(exp_duality_sweep(bern(3, 0.5, 1), bad), std::invalid_argument);
}

TEST_CASE("svg rendering is deterministic, countable and matches the goldens") {
  // One filled cell per spin-1 site.
  Configuration one(BoxRegion{0, {0, 0}});
  one.set_spin({0, 0}, 1);
  CHECK(count_substr(svg_render(one), "<rect") == 1);
  CHECK(count_substr(svg_render(Configuration(BoxRegion{0, {0, 0}})), "<rect") == 0);

  Configuration mixed = oracle::random_configuration(BoxRegion{3, {0, 0}}, 0.5, 4242);
  int ones = 0;
  for (std::uint8_t s : mixed.raw()) ones += s;
  CHECK(count_substr(svg_render(mixed), "<rect") == ones);

  // An 8-site circuit overlay becomes one closed polygon with 8 vertices.
  Necklet ring;
  ring.circuit.kind = Kind::nearest;
  ring.circuit.sites = {{1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1}};
  const std::string ring_svg = svg_render(Configuration(BoxRegion{1, {0, 0}}), ring);
  CHECK(count_substr(ring_svg, "<polygon") == 1);
  CHECK(count_substr(ring_svg, "<circle") == 0);
  const size_t beg = ring_svg.find("points=\"") + 8;
  const std::string points = ring_svg.substr(beg, ring_svg.find('"', beg) - beg);
  CHECK(count_substr(points, ",") == 8);
  CHECK(count_substr(points, " ") == 7);

  // Pearls render as one circle each.
  ring.pearls = {{1, 0}, {-1, 0}};
  CHECK(count_substr(svg_render(Configuration(BoxRegion{1, {0, 0}}), ring), "<circle") == 2);

  CHECK_THROWS_AS(write_svg("<svg/>", "/nonexistent_dir_7q3/x.svg"), std::runtime_error);

  // Golden files, generated once through the CLI and committed: a seeded
  // sample and a constructed necklet must reproduce byte for byte.
  const fs::path golden = fs::path(PERC_TEST_DATA_DIR) / "golden";
  Configuration sampled = sample_one(bern(3, 0.5, 616), 0);
  CHECK(svg_render(sampled) == slurp(golden / "cells_bernoulli_7x7.svg"));

  Configuration two_ray = load_configuration(golden / "two_ray_11x11.txt");
  NeckletResult res = necklet_construct(two_ray, BoxRegion{1, {0, 0}}, 2, 4);
  REQUIRE(res.valid);
  CHECK(res.necklet.pearls.size() == 2);
  const std::string necklet_svg = svg_render(two_ray, res.necklet);
  CHECK(count_substr(necklet_svg, "<circle") == 2);
  CHECK(necklet_svg == slurp(golden / "necklet_two_ray.svg"));
}

TEST_CASE("the command line runs end to end") {
  const fs::path dir = fresh_dir("perc_test_cli");

  CHECK(run_cli("selftest --trials 120") == 0);
  CHECK(run_cli("--bogus-flag duality") == 1);
  CHECK(run_cli("duality --family bernoulli --hw 1 --outer 2 --trials 5 --seed 1 --out " +
                (dir / "bad").string()) == 1);  // annulus does not fit the window

  // A small sweep writes the three report files; the JSON equals the
  // library's own serialization for the same spec and parameters.
  CHECK(run_cli("duality --family bernoulli --hw 3 --p 0.5 --seed 5 --trials 40 --outer 2 "
                "--out " +
                (dir / "d").string()) == 0);
  CHECK(fs::exists(dir / "d/duality.csv"));
  CHECK(fs::exists(dir / "d/duality.log"));
  DualityParams par;
  par.outer_halfwidths = {2};
  par.trials = 40;
  CHECK(slurp(dir / "d/duality.json") == report_to_json(exp_duality_sweep(bern(3, 0.5, 5), par)));

  // Sampled grids round-trip through the files the CLI writes.
  CHECK(run_cli("sample --family bernoulli --hw 2 --p 0.3 --seed 9 --trials 2 --out " +
                (dir / "s").string()) == 0);
  CHECK(fs::exists(dir / "s/sample_0.txt.json"));
  Configuration c1 = load_configuration(dir / "s/sample_1.txt");
  CHECK(c1 == sample_one(bern(2, 0.3, 9), 1));

  // Rendering a one-cell grid through the CLI matches the library call.
  std::ofstream(dir / "one.txt") << "1 1\n1\n";
  CHECK(run_cli("render --grid " + (dir / "one.txt").string() + " --out-file " +
                (dir / "one.svg").string()) == 0);
  Configuration one(BoxRegion{0, {0, 0}});
  one.set_spin({0, 0}, 1);
  CHECK(slurp(dir / "one.svg") == svg_render(one));
}
