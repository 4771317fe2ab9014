#pragma once

#include "rombp/grid.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace rombp {

enum class Preset { kTwoLayer, kSmoothed, kConstant, kRandom };
enum class PropagatorChoice { kAuto, kSpectral, kChebyshev };

// Every run parameter in SI units. The defaults describe the two-layer
// experiment with a smoothed background.
struct RunConfig {
  std::filesystem::path out = ".";
  std::optional<std::filesystem::path> model;       // default out/model.grid
  std::optional<std::filesystem::path> background;  // default out/background.grid
  std::optional<std::filesystem::path> data;        // default out/data.txt
  std::optional<std::filesystem::path> image;       // default out/image.grid

  Preset preset = Preset::kSmoothed;
  Index nx = 150;
  Index nz = 60;
  double h = 15.0;
  double top_velocity = 1500.0;
  std::vector<Interface> interfaces = {{150.0, 2000.0}, {435.0, 2500.0}};
  double smooth_x = 300.0;
  double smooth_z = 150.0;
  double random_min = 1500.0;
  double random_max = 3000.0;
  unsigned long seed = 1;

  Index p = 12;
  double spacing = 165.0;
  Index source_row = 1;
  double sigma = 1e-4;
  double tau = 0.03;
  Index n = 12;

  double alpha = 1.0;
  double eps = 0.0;
  double clamp_floor = 0.0;
  std::optional<double> well_x;  // default: centre column

  PropagatorChoice propagator = PropagatorChoice::kAuto;
  Index auto_spectral_limit = 3000;  // auto uses the dense path up to this many nodes
  Index max_nodes = 20000;           // dense path cap

  std::filesystem::path model_path() const;
  std::filesystem::path background_path() const;
  std::filesystem::path data_path() const;
  std::filesystem::path image_path() const;

  void validate() const;
};

using Setting = std::pair<std::string, std::string>;

// Flat key=value text. '#' starts a comment; blank lines are ignored.
std::vector<Setting> parse_settings(const std::string& text);
std::vector<Setting> read_settings(const std::filesystem::path& path);

// Applies settings in order; unknown keys and malformed values throw
// ValidationError.
void apply_settings(RunConfig& cfg, const std::vector<Setting>& settings);

struct ConfigKey {
  std::string key;
  std::string unit;
  std::string description;
};
const std::vector<ConfigKey>& config_keys();

std::string preset_name(Preset preset);

}  // namespace rombp
