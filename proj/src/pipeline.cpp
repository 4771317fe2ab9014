#include "rombp/pipeline.hpp"

#include "rombp/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace rombp {

namespace {

// First row whose depth reaches `depth`, the same rule the layered model uses.
Index row_at_or_below(const Grid2D& grid, double depth) {
  Index row = 0;
  while (row < grid.nz() && grid.depth(row) < depth) ++row;
  return row;
}

bool within(Index row, Index centre) { return std::abs(row - centre) <= kWindowHalfRows; }

}  // namespace

PresetModels make_preset_models(const RunConfig& cfg) {
  cfg.validate();
  const Grid2D grid(cfg.nx, cfg.nz, cfg.h);
  switch (cfg.preset) {
    case Preset::kTwoLayer:
      return {make_layered_model(grid, cfg.interfaces, cfg.top_velocity), std::nullopt};
    case Preset::kSmoothed: {
      VelocityModel model = make_layered_model(grid, cfg.interfaces, cfg.top_velocity);
      VelocityModel background = smooth_model(model, cfg.smooth_x, cfg.smooth_z);
      return {std::move(model), std::move(background)};
    }
    case Preset::kConstant: {
      const VelocityModel model = VelocityModel::constant(grid, cfg.top_velocity);
      return {model, model};
    }
    case Preset::kRandom: {
      std::mt19937_64 rng(cfg.seed);
      std::uniform_real_distribution<double> dist(cfg.random_min, cfg.random_max);
      Eigen::VectorXd c(grid.size());
      for (Index i = 0; i < c.size(); ++i) c(i) = dist(rng);
      return {VelocityModel(grid, std::move(c)), std::nullopt};
    }
  }
  throw ValidationError("unknown preset");
}

SurveyGeometry survey_for(const Grid2D& grid, const RunConfig& cfg) {
  return uniform_array(grid, cfg.p, cfg.spacing, cfg.source_row);
}

std::optional<std::string> nyquist_advisory(double tau, double sigma) {
  if (!(sigma > 0.0)) return std::nullopt;
  const double f_est = 1.0 / (2.0 * std::numbers::pi * std::sqrt(sigma));
  if (tau * f_est <= 0.5) return std::nullopt;
  std::ostringstream msg;
  msg << "tau = " << tau << " s exceeds the advisory Nyquist bound " << 0.5 / f_est
      << " s for sigma = " << sigma << " s^2";
  return msg.str();
}

void check_grid_cap(const Grid2D& grid, Index max_nodes) {
  if (grid.size() > max_nodes) {
    throw ValidationError("grid has " + std::to_string(grid.size()) +
                          " nodes, more than the spectral propagator cap of " +
                          std::to_string(max_nodes));
  }
}

PropagatorBackend backend_for(const Grid2D& grid, const RunConfig& cfg) {
  switch (cfg.propagator) {
    case PropagatorChoice::kChebyshev: return PropagatorBackend::kChebyshev;
    case PropagatorChoice::kSpectral:
      check_grid_cap(grid, cfg.max_nodes);
      return PropagatorBackend::kSpectral;
    case PropagatorChoice::kAuto: break;
  }
  return grid.size() <= std::min(cfg.auto_spectral_limit, cfg.max_nodes)
             ? PropagatorBackend::kSpectral
             : PropagatorBackend::kChebyshev;
}

ForwardRun run_forward(const VelocityModel& model, const RunConfig& cfg) {
  cfg.validate();
  const PropagatorBackend backend = backend_for(model.grid(), cfg);
  const SurveyGeometry survey = survey_for(model.grid(), cfg);
  const auto op = assemble_symmetrized_operator(model, build_laplacian(model.grid()));
  const Eigen::MatrixXd e = build_point_sources(model.grid(), survey);
  ForwardRun run;
  if (backend == PropagatorBackend::kSpectral) {
    const auto dec = std::make_shared<const SpectralDecomposition>(spectral_decompose(op));
    const Eigen::MatrixXd b = build_source_matrix(*dec, e, {cfg.sigma});
    run.cube = simulate_data(build_propagator(dec, cfg.tau), b, cfg.n, &run.report);
  } else {
    const ChebyshevPropagator propagator(op, cfg.tau);
    const Eigen::MatrixXd b = build_source_matrix(propagator, e, {cfg.sigma});
    run.cube = simulate_data(propagator, b, cfg.n, &run.report);
  }
  return run;
}

ImageRun run_image(const DataCube& cube, const VelocityModel& background, const RunConfig& cfg) {
  cfg.validate();
  cube.validate();
  const PropagatorBackend backend = backend_for(background.grid(), cfg);
  if (cube.p() != cfg.p) {
    throw ValidationError("data cube has p = " + std::to_string(cube.p()) +
                          " but the configuration has p = " + std::to_string(cfg.p));
  }
  if (std::abs(cube.tau - cfg.tau) > 1e-12 * cfg.tau) {
    throw ValidationError("data cube tau differs from the configured tau");
  }
  if (cfg.n > cube.n()) {
    throw ValidationError("n = " + std::to_string(cfg.n) + " needs " + std::to_string(2 * cfg.n) +
                          " samples but the cube has " + std::to_string(cube.sample_count()));
  }
  const SurveyGeometry survey = survey_for(background.grid(), cfg);

  BlockCholeskyFactor factor;
  Rom rom = rom_from_data(cube, cfg.n, cfg.eps, &factor);
  DataCube used = cube;
  used.samples.resize(static_cast<std::size_t>(2 * cfg.n));
  const double residual = interpolation_residual(rom, used);

  BackgroundBasis basis =
      background_basis(background, survey, {cfg.sigma}, cfg.tau, cfg.n, cfg.eps, backend);
  const BackgroundRom brom = background_rom(basis);
  const Eigen::VectorXd dr = backproject_delta(basis, rom.op, brom.op);
  ImageResult image = form_image(background, dr, {cfg.alpha, cfg.eps, cfg.clamp_floor});
  return {std::move(rom), std::move(factor), residual, std::move(basis), std::move(image)};
}

LayerMetrics layer_metrics(const VelocityModel& truth, const VelocityModel& background,
                           const std::vector<Interface>& interfaces, const ImageResult& image) {
  const Grid2D& g = truth.grid();
  if (!(background.grid() == g) || !(image.grid == g)) {
    throw ValidationError("layer metrics need models and image on one grid");
  }
  if (interfaces.empty()) throw ValidationError("layer metrics need at least one interface");
  if (g.nx() <= 2 * kLateralMargin) throw ValidationError("grid too narrow for lateral margins");

  std::vector<Index> primary;
  std::vector<Index> ghost;
  for (const auto& itf : interfaces) {
    primary.push_back(row_at_or_below(g, itf.depth));
    ghost.push_back(row_at_or_below(g, 2.0 * itf.depth));
  }
  const auto in_primary = [&](Index iz) {
    return std::any_of(primary.begin(), primary.end(), [&](Index r) { return within(iz, r); });
  };
  const auto in_ghost = [&](Index iz) {
    return !in_primary(iz) &&
           std::any_of(ghost.begin(), ghost.end(), [&](Index r) { return within(iz, r); });
  };

  LayerMetrics m;
  Index between = 0;
  for (Index iz = 0; iz < g.nz(); ++iz) {
    const bool p = in_primary(iz);
    const bool q = in_ghost(iz);
    const bool first = within(iz, primary.front());
    for (Index ix = kLateralMargin; ix < g.nx() - kLateralMargin; ++ix) {
      const Index k = g.node(ix, iz);
      const double a = std::abs(image.dr(k));
      if (p) m.primary_peak = std::max(m.primary_peak, a);
      if (q) m.ghost_peak = std::max(m.ghost_peak, a);
      if (first) {
        const double lo = std::min(truth.c()(k), background.c()(k));
        const double hi = std::max(truth.c()(k), background.c()(k));
        ++m.first_window_nodes;
        if (image.cstar(k) >= lo && image.cstar(k) <= hi) ++between;
      }
    }
  }
  m.ghost_ratio = m.primary_peak > 0.0 ? m.ghost_peak / m.primary_peak : 0.0;
  m.first_between_fraction =
      m.first_window_nodes > 0 ? static_cast<double>(between) / m.first_window_nodes : 0.0;
  return m;
}

}  // namespace rombp
