#include "rombp/config.hpp"

#include "rombp/error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace rombp {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& value) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (value.empty() || ec != std::errc() || ptr != value.data() + value.size() ||
      !std::isfinite(out)) {
    throw ValidationError("config key '" + key + "': expected a number, got '" + value + "'");
  }
  return out;
}

long long to_integer(const std::string& key, const std::string& value) {
  long long out = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (value.empty() || ec != std::errc() || ptr != value.data() + value.size()) {
    throw ValidationError("config key '" + key + "': expected an integer, got '" + value + "'");
  }
  return out;
}

Preset to_preset(const std::string& value) {
  if (value == "two-layer") return Preset::kTwoLayer;
  if (value == "smoothed") return Preset::kSmoothed;
  if (value == "constant") return Preset::kConstant;
  if (value == "random") return Preset::kRandom;
  throw ValidationError("unknown preset '" + value +
                        "' (expected two-layer, smoothed, constant or random)");
}

// "depth:velocity,depth:velocity"; an empty string means no interfaces.
std::vector<Interface> to_interfaces(const std::string& key, const std::string& value) {
  std::vector<Interface> out;
  if (value.empty() || value == "none") return out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) {
      throw ValidationError("config key '" + key + "': expected depth:velocity, got '" + item +
                            "'");
    }
    out.push_back({to_double(key, trim(item.substr(0, colon))),
                   to_double(key, trim(item.substr(colon + 1)))});
  }
  return out;
}

PropagatorChoice to_propagator(const std::string& value) {
  if (value == "auto") return PropagatorChoice::kAuto;
  if (value == "spectral") return PropagatorChoice::kSpectral;
  if (value == "chebyshev") return PropagatorChoice::kChebyshev;
  throw ValidationError("unknown propagator '" + value +
                        "' (expected auto, spectral or chebyshev)");
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

Setter real(double RunConfig::*field) {
  return [field](RunConfig& c, const std::string& k, const std::string& v) {
    c.*field = to_double(k, v);
  };
}

Setter integer(Index RunConfig::*field) {
  return [field](RunConfig& c, const std::string& k, const std::string& v) {
    c.*field = static_cast<Index>(to_integer(k, v));
  };
}

Setter path(std::optional<std::filesystem::path> RunConfig::*field) {
  return [field](RunConfig& c, const std::string&, const std::string& v) { c.*field = v; };
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"out", [](RunConfig& c, const std::string&, const std::string& v) { c.out = v; }},
      {"model", path(&RunConfig::model)},
      {"background", path(&RunConfig::background)},
      {"data", path(&RunConfig::data)},
      {"image", path(&RunConfig::image)},
      {"preset", [](RunConfig& c, const std::string&, const std::string& v) {
         c.preset = to_preset(v);
       }},
      {"nx", integer(&RunConfig::nx)},
      {"nz", integer(&RunConfig::nz)},
      {"h", real(&RunConfig::h)},
      {"top_velocity", real(&RunConfig::top_velocity)},
      {"interfaces", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.interfaces = to_interfaces(k, v);
       }},
      {"smooth_x", real(&RunConfig::smooth_x)},
      {"smooth_z", real(&RunConfig::smooth_z)},
      {"random_min", real(&RunConfig::random_min)},
      {"random_max", real(&RunConfig::random_max)},
      {"seed", [](RunConfig& c, const std::string& k, const std::string& v) {
         const long long s = to_integer(k, v);
         if (s < 0) throw ValidationError("config key 'seed' must be non-negative");
         c.seed = static_cast<unsigned long>(s);
       }},
      {"p", integer(&RunConfig::p)},
      {"spacing", real(&RunConfig::spacing)},
      {"source_row", integer(&RunConfig::source_row)},
      {"sigma", real(&RunConfig::sigma)},
      {"tau", real(&RunConfig::tau)},
      {"n", integer(&RunConfig::n)},
      {"alpha", real(&RunConfig::alpha)},
      {"eps", real(&RunConfig::eps)},
      {"clamp_floor", real(&RunConfig::clamp_floor)},
      {"well_x", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.well_x = to_double(k, v);
       }},
      {"propagator", [](RunConfig& c, const std::string&, const std::string& v) {
         c.propagator = to_propagator(v);
       }},
      {"auto_spectral_limit", integer(&RunConfig::auto_spectral_limit)},
      {"max_nodes", integer(&RunConfig::max_nodes)},
  };
  return table;
}

}  // namespace

std::filesystem::path RunConfig::model_path() const { return model.value_or(out / "model.grid"); }
std::filesystem::path RunConfig::background_path() const {
  return background.value_or(out / "background.grid");
}
std::filesystem::path RunConfig::data_path() const { return data.value_or(out / "data.txt"); }
std::filesystem::path RunConfig::image_path() const { return image.value_or(out / "image.grid"); }

void RunConfig::validate() const {
  if (!(tau > 0.0)) throw ValidationError("tau must be positive");
  if (n < 1) throw ValidationError("n must be at least 1");
  if (p < 1) throw ValidationError("p must be at least 1");
  if (!(sigma >= 0.0)) throw ValidationError("sigma must be non-negative");
  if (!(spacing >= 0.0)) throw ValidationError("spacing must be non-negative");
  if (!(eps >= 0.0)) throw ValidationError("eps must be non-negative");
  if (!(clamp_floor >= 0.0)) throw ValidationError("clamp_floor must be non-negative");
  if (!(h > 0.0)) throw ValidationError("h must be positive");
  if (nx < 3 || nz < 3) throw ValidationError("grid must be at least 3 x 3");
  if (!(smooth_x >= 0.0 && smooth_z >= 0.0)) {
    throw ValidationError("smoothing widths must be non-negative");
  }
  if (!(random_min > 0.0 && random_max >= random_min)) {
    throw ValidationError("random velocity range must satisfy 0 < random_min <= random_max");
  }
  if (max_nodes < 9) throw ValidationError("max_nodes must be at least 9");
  if (out.empty()) throw ValidationError("output directory must be nonempty");
}

std::vector<Setting> parse_settings(const std::string& text) {
  std::vector<Setting> out;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ValidationError("config line " + std::to_string(number) + ": expected key=value");
    }
    std::string key = trim(line.substr(0, eq));
    if (key.empty()) {
      throw ValidationError("config line " + std::to_string(number) + ": empty key");
    }
    out.emplace_back(std::move(key), trim(line.substr(eq + 1)));
  }
  return out;
}

std::vector<Setting> read_settings(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_settings(buf.str());
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

void apply_settings(RunConfig& cfg, const std::vector<Setting>& settings) {
  const auto& table = setters();
  for (const auto& [key, value] : settings) {
    const auto it = table.find(key);
    if (it == table.end()) throw ValidationError("unknown config key '" + key + "'");
    it->second(cfg, key, value);
  }
}

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = {
      {"out", "path", "output directory"},
      {"model", "path", "true velocity grid (default out/model.grid)"},
      {"background", "path", "background velocity grid (default out/background.grid)"},
      {"data", "path", "data cube (default out/data.txt)"},
      {"image", "path", "imaged velocity grid (default out/image.grid)"},
      {"preset", "-", "two-layer, smoothed, constant or random"},
      {"nx", "nodes", "grid width"},
      {"nz", "nodes", "grid depth"},
      {"h", "m", "grid spacing"},
      {"top_velocity", "m/s", "velocity above the first interface"},
      {"interfaces", "m:m/s", "comma separated depth:velocity pairs, or none"},
      {"smooth_x", "m", "lateral Gaussian width of the background (2 standard deviations)"},
      {"smooth_z", "m", "vertical Gaussian width of the background (2 standard deviations)"},
      {"random_min", "m/s", "lower bound of the random preset"},
      {"random_max", "m/s", "upper bound of the random preset"},
      {"seed", "-", "seed of the random preset"},
      {"p", "count", "number of sources"},
      {"spacing", "m", "source spacing"},
      {"source_row", "nodes", "source row (must be interior)"},
      {"sigma", "s^2", "wavelet parameter"},
      {"tau", "s", "sampling interval"},
      {"n", "count", "ROM blocks; 2n data samples are used"},
      {"alpha", "-", "image gain"},
      {"eps", "-", "relative Gram regularization"},
      {"clamp_floor", "-", "lower bound of the image radicand"},
      {"well_x", "m", "lateral offset of the well log (default centre)"},
      {"propagator", "-", "auto, spectral (dense eigendecomposition) or chebyshev (sparse)"},
      {"auto_spectral_limit", "nodes", "largest grid for which auto picks spectral"},
      {"max_nodes", "nodes", "largest grid accepted by the spectral propagator"},
  };
  return keys;
}

std::string preset_name(Preset preset) {
  switch (preset) {
    case Preset::kTwoLayer: return "two-layer";
    case Preset::kSmoothed: return "smoothed";
    case Preset::kConstant: return "constant";
    case Preset::kRandom: return "random";
  }
  return "unknown";
}

}  // namespace rombp
