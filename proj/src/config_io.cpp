#include "perc/config_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace perc {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

}  // namespace

std::string configuration_to_text(const Configuration& cfg) {
  const BoxRegion& w = cfg.window();
  const int side = w.side();
  std::string out = std::to_string(side) + " " + std::to_string(side) + "\n";
  for (int iy = 0; iy < side; ++iy) {
    for (int ix = 0; ix < side; ++ix)
      out += cfg.raw()[(size_t)iy * (size_t)side + (size_t)ix] ? '1' : '0';
    out += '\n';
  }
  return out;
}

Configuration configuration_from_text(const std::string& text, Site center) {
  std::istringstream in(text);
  long long width = -1, height = -1;
  if (!(in >> width >> height)) throw std::invalid_argument("grid: missing \"width height\" header");
  if (width != height || width < 1 || width % 2 == 0)
    throw std::invalid_argument("grid: window must be square with odd side, got " +
                                std::to_string(width) + "x" + std::to_string(height));
  const int side = (int)width;
  Configuration cfg(BoxRegion{(side - 1) / 2, center});
  std::string row;
  for (int iy = 0; iy < side; ++iy) {
    if (!(in >> row)) throw std::invalid_argument("grid: expected " + std::to_string(side) +
                                                  " rows, got " + std::to_string(iy));
    if ((int)row.size() != side)
      throw std::invalid_argument("grid: row " + std::to_string(iy) + " has " +
                                  std::to_string(row.size()) + " cells, expected " +
                                  std::to_string(side));
    for (int ix = 0; ix < side; ++ix) {
      char c = row[(size_t)ix];
      if (c != '0' && c != '1')
        throw std::invalid_argument(std::string("grid: invalid cell '") + c + "'");
      cfg.raw()[(size_t)iy * (size_t)side + (size_t)ix] = c == '1' ? 1 : 0;
    }
  }
  std::string extra;
  if (in >> extra) throw std::invalid_argument("grid: trailing content after last row");
  return cfg;
}

void save_configuration(const Configuration& cfg, const std::filesystem::path& path,
                        const ConfigSidecar& meta) {
  write_file(path, configuration_to_text(cfg));
  ordered_json j;
  j["center"] = {meta.center.x, meta.center.y};
  if (meta.has_seed) j["seed"] = meta.seed;
  if (!meta.sampler.empty()) j["sampler"] = meta.sampler;
  write_file(path.string() + ".json", j.dump(2) + "\n");
}

Configuration load_configuration(const std::filesystem::path& path) {
  Site center{0, 0};
  std::filesystem::path sidecar = path.string() + ".json";
  if (std::filesystem::exists(sidecar)) {
    ordered_json j = ordered_json::parse(read_file(sidecar));
    if (j.contains("center")) {
      center.x = j["center"].at(0).get<int>();
      center.y = j["center"].at(1).get<int>();
    }
  }
  return configuration_from_text(read_file(path), center);
}

const char* family_name(SamplerFamily f) {
  return f == SamplerFamily::bernoulli ? "bernoulli" : "ising";
}

const char* boundary_name(IsingBoundary b) {
  switch (b) {
    case IsingBoundary::free: return "free";
    case IsingBoundary::plus: return "plus";
    case IsingBoundary::minus: return "minus";
  }
  return "free";
}

SamplerSpec sampler_from_keyvalues(const std::string& text) {
  SamplerSpec spec;
  int center_x = 0, center_y = 0, half_width = 0;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto eq = line.find('=');
    auto trim = [](std::string s) {
      size_t a = s.find_first_not_of(" \t\r");
      size_t b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    if (eq == std::string::npos) {
      if (!trim(line).empty())
        throw std::invalid_argument("sampler file line " + std::to_string(lineno) +
                                    ": expected key=value");
      continue;
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw std::invalid_argument("sampler file line " + std::to_string(lineno) +
                                  ": empty key or value");
    try {
      if (key == "family") {
        if (value == "bernoulli") spec.family = SamplerFamily::bernoulli;
        else if (value == "ising") spec.family = SamplerFamily::ising;
        else throw std::invalid_argument("unknown family \"" + value + "\"");
      } else if (key == "half_width") half_width = std::stoi(value);
      else if (key == "center_x") center_x = std::stoi(value);
      else if (key == "center_y") center_y = std::stoi(value);
      else if (key == "seed") spec.seed = std::stoull(value);
      else if (key == "p") spec.p = std::stod(value);
      else if (key == "beta") spec.beta = std::stod(value);
      else if (key == "h") spec.h_field = std::stod(value);
      else if (key == "boundary") {
        if (value == "free") spec.boundary = IsingBoundary::free;
        else if (value == "plus") spec.boundary = IsingBoundary::plus;
        else if (value == "minus") spec.boundary = IsingBoundary::minus;
        else throw std::invalid_argument("unknown boundary \"" + value + "\"");
      } else if (key == "sweeps") spec.sweeps = std::stoi(value);
      else throw std::invalid_argument("unknown key \"" + key + "\"");
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("sampler file line " + std::to_string(lineno) + ": " + e.what());
    } catch (const std::out_of_range&) {
      throw std::invalid_argument("sampler file line " + std::to_string(lineno) +
                                  ": value out of range");
    }
  }
  spec.window = BoxRegion{half_width, Site{center_x, center_y}};
  validate_spec(spec);
  return spec;
}

std::string sampler_to_keyvalues(const SamplerSpec& spec) {
  std::ostringstream out;
  out << "family = " << family_name(spec.family) << "\n";
  out << "half_width = " << spec.window.half_width << "\n";
  out << "center_x = " << spec.window.center.x << "\n";
  out << "center_y = " << spec.window.center.y << "\n";
  out << "seed = " << spec.seed << "\n";
  if (spec.family == SamplerFamily::bernoulli) {
    out << "p = " << spec.p << "\n";
  } else {
    out << "beta = " << spec.beta << "\n";
    out << "h = " << spec.h_field << "\n";
    out << "boundary = " << boundary_name(spec.boundary) << "\n";
    out << "sweeps = " << spec.sweeps << "\n";
  }
  return out.str();
}

SamplerSpec load_sampler(const std::filesystem::path& path) {
  return sampler_from_keyvalues(read_file(path));
}

void save_sampler(const SamplerSpec& spec, const std::filesystem::path& path) {
  write_file(path, sampler_to_keyvalues(spec));
}

}  // namespace perc
