#pragma once

#include "rombp/config.hpp"
#include "rombp/imaging.hpp"
#include "rombp/rom.hpp"
#include "rombp/survey.hpp"

#include <optional>
#include <string>

namespace rombp {

struct PresetModels {
  VelocityModel model;
  std::optional<VelocityModel> background;  // smoothed and constant presets only
};

PresetModels make_preset_models(const RunConfig& cfg);

SurveyGeometry survey_for(const Grid2D& grid, const RunConfig& cfg);

// Warning text when tau * f_est > 1/2 with f_est = 1 / (2 pi sqrt(sigma)).
std::optional<std::string> nyquist_advisory(double tau, double sigma);

// Throws ValidationError when the grid is too large for the dense spectral path.
void check_grid_cap(const Grid2D& grid, Index max_nodes);

// Resolves the configured propagator for `grid`, applying the dense cap.
PropagatorBackend backend_for(const Grid2D& grid, const RunConfig& cfg);

struct ForwardRun {
  DataCube cube;
  SimulationReport report;
};

ForwardRun run_forward(const VelocityModel& model, const RunConfig& cfg);

struct ImageRun {
  Rom rom;
  BlockCholeskyFactor factor;
  double interpolation_residual = 0.0;
  BackgroundBasis basis;
  ImageResult image;
};

// Data-driven ROM, background projection, backprojection and image. `cfg.n`
// must not exceed the cube's n; `cfg.p` and `cfg.tau` must match the cube.
ImageRun run_image(const DataCube& cube, const VelocityModel& background, const RunConfig& cfg);

// Window diagnostics of a layered experiment. Primary windows are +-3 rows
// around each interface row; ghost windows are +-3 rows around twice the
// interface depth, minus the primary windows. Both skip 10-node lateral
// margins.
struct LayerMetrics {
  double primary_peak = 0.0;
  double ghost_peak = 0.0;
  double ghost_ratio = 0.0;
  double first_between_fraction = 0.0;  // c* between c0 and c in window one
  Index first_window_nodes = 0;
};

inline constexpr Index kWindowHalfRows = 3;
inline constexpr Index kLateralMargin = 10;

LayerMetrics layer_metrics(const VelocityModel& truth, const VelocityModel& background,
                           const std::vector<Interface>& interfaces, const ImageResult& image);

}  // namespace rombp
