#include "rombp/verify.hpp"

#include "rombp/error.hpp"
#include "rombp/imaging.hpp"
#include "rombp/rom.hpp"
#include "rombp/survey.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

namespace rombp {

namespace {

double rel(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const double scale = b.norm();
  return scale > 0.0 ? (a - b).norm() / scale : (a - b).norm();
}

struct Setup {
  VelocityModel model;
  SurveyGeometry survey;
  std::shared_ptr<const SpectralDecomposition> dec;
  Eigen::MatrixXd b;
};

Setup prepare(const VelocityModel& model, const SurveyGeometry& survey, double sigma) {
  const auto op = assemble_symmetrized_operator(model, build_laplacian(model.grid()));
  auto dec = std::make_shared<const SpectralDecomposition>(spectral_decompose(op));
  Eigen::MatrixXd b = build_source_matrix(*dec, build_point_sources(model.grid(), survey), {sigma});
  return {model, survey, std::move(dec), std::move(b)};
}

// Adds delta * max|F_k| times a fixed symmetric pattern to every sample.
DataCube perturbed(const DataCube& clean, double delta) {
  if (delta == 0.0) return clean;
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  DataCube out = clean;
  for (auto& f : out.samples) {
    Eigen::MatrixXd noise(f.rows(), f.cols());
    for (Index i = 0; i < noise.size(); ++i) noise.data()[i] = u(rng);
    noise = (0.5 * (noise + noise.transpose())).eval();
    f += delta * f.cwiseAbs().maxCoeff() * noise;
  }
  return out;
}

VelocityModel desk_layers(const Grid2D& g) {
  return make_layered_model(g, {{150.0, 2000.0}, {300.0, 2400.0}}, 1600.0);
}

CheckResult closed_form_toy(const CheckInfo& info, const VerifyOptions&) {
  auto dec = std::make_shared<const SpectralDecomposition>(
      spectral_decompose(Eigen::Vector2d(-1.0, -4.0).asDiagonal().toDenseMatrix()));
  const Eigen::MatrixXd b = Eigen::Vector2d::Constant(1.0 / std::sqrt(2.0));
  const DataCube cube = simulate_data(build_propagator(dec, 1.0), b, 2);
  const Eigen::MatrixXd m = gram_from_data(cube);
  const BlockCholeskyFactor f = block_cholesky(m, 1);
  const double rounded[] = {1.0000, 0.0621, -0.5349, -0.0149};
  double err = 0.0;
  for (int k = 0; k < 4; ++k) {
    err = std::max(err, std::abs(cube.samples[static_cast<std::size_t>(k)](0, 0) - rounded[k]));
  }
  err = std::max({err, std::abs(m(0, 0) - 1.0), std::abs(m(0, 1) - 0.0621),
                  std::abs(m(1, 1) - 0.2326), std::abs(f.l(1, 1) - 0.4782)});
  return {info, err <= info.tolerance, err, "max deviation from the 4-decimal values"};
}

CheckResult data_equivalence(const CheckInfo& info, const VerifyOptions&) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(1500.0, 3000.0);
  const Grid2D g(10, 8, 15.0);
  const auto lap = build_laplacian(g);
  const auto survey = uniform_array(g, 3, 45.0);
  const Eigen::MatrixXd e = build_point_sources(g, survey);
  double worst = 0.0;
  for (int trial = 0; trial < 3; ++trial) {
    Eigen::VectorXd c(g.size());
    for (Index i = 0; i < c.size(); ++i) c(i) = u(rng);
    const VelocityModel model(g, c);
    const Setup s = prepare(model, survey, 1e-4);
    const DataCube sym = simulate_data(build_propagator(s.dec, 0.003), s.b, 6);
    const DataCube raw = oracle_unsymmetrized_data(model, lap, e, {1e-4}, 0.003, 6);
    worst = std::max(worst, max_relative_difference(raw, sym));
  }
  return {info, worst <= info.tolerance, worst, "three random 10 x 8 models"};
}

CheckResult interpolation(const CheckInfo& info, const VerifyOptions& options) {
  const Grid2D g(40, 30, 15.0);
  const Setup s = prepare(desk_layers(g), uniform_array(g, 4, 150.0), 1e-4);
  const DataCube clean = simulate_data(build_propagator(s.dec, 0.03), s.b, 8);
  BlockCholeskyFactor factor;
  const Rom rom = rom_from_data(perturbed(clean, options.perturbation), 8, 0.0, &factor);
  const double r = interpolation_residual(rom, clean);
  std::ostringstream d;
  d << "40 x 30 layered model, p = 4, n = 8, min pivot " << factor.min_pivot;
  return {info, r <= info.tolerance, r, d.str()};
}

CheckResult two_route(const CheckInfo& info, const VerifyOptions& options) {
  const Grid2D g(24, 24, 15.0);
  const double tau = 0.02;
  const Index n = 6;
  const auto survey = uniform_array(g, 3, 90.0);
  const VelocityModel c0 = smooth_model(desk_layers(g), 120.0, 60.0);
  const Setup s = prepare(c0, survey, 1e-4);
  const DataCube cube = simulate_data(build_propagator(s.dec, tau), s.b, n);
  const Rom rom = rom_from_data(perturbed(cube, options.perturbation), n);
  const BackgroundBasis basis = background_basis(c0, survey, {1e-4}, tau, n);
  const BackgroundRom brom = background_rom(basis);
  const double e1 = rel(rom.propagator, brom.propagator);
  const double e2 = rel(rom.source, basis.v.transpose() * basis.source);
  const double err = std::max(e1, e2);
  return {info, err <= info.tolerance, err, "data-driven ROM versus projection V0^T P V0"};
}

CheckResult nonlinearity(const CheckInfo& info, const VerifyOptions&) {
  const Grid2D g(40, 30, 15.0);
  const Setup s = prepare(desk_layers(g), uniform_array(g, 4, 150.0), 1e-4);
  const DataCube cube = simulate_data(build_propagator(s.dec, 0.03), s.b, 8);
  DataCube scaled = cube;
  for (auto& f : scaled.samples) f *= 4.0;
  const Rom a = rom_from_data(cube, 8);
  const Rom b = rom_from_data(scaled, 8);
  const double err = std::max(rel(b.propagator, a.propagator), rel(b.source, 2.0 * a.source));
  return {info, err <= info.tolerance, err, "data scaled by 4"};
}

CheckResult full_rank(const CheckInfo& info, const VerifyOptions& options) {
  const Grid2D g(8, 6, 15.0);
  const double tau = 0.006;
  const Index n = 8;
  const auto survey = uniform_array(g, 6, 15.0);
  const VelocityModel c0 = VelocityModel::constant(g, 2000.0);
  Eigen::VectorXd c = c0.c();
  for (Index iz = 3; iz < g.nz(); ++iz) {
    for (Index ix = 0; ix < g.nx(); ++ix) c(g.node(ix, iz)) = 2200.0;
  }
  const VelocityModel truth(g, c);
  const Setup s = prepare(truth, survey, 0.0);
  const DataCube cube = simulate_data(build_propagator(s.dec, tau), s.b, n);
  const Rom rom = rom_from_data(perturbed(cube, options.perturbation), n);
  const BackgroundBasis basis = background_basis(c0, survey, {0.0}, tau, n);
  const Eigen::VectorXd dr = backproject_delta(basis, rom.op, background_rom(basis).op);
  const ImageResult img = form_image(c0, dr, {});
  const double err = ((img.cstar - c).cwiseQuotient(c)).cwiseAbs().maxCoeff();
  return {info, err <= info.tolerance, err, "8 x 6 grid, p = 6, n = 8, np = N"};
}

using Runner = std::function<CheckResult(const CheckInfo&, const VerifyOptions&)>;

const std::vector<std::pair<CheckInfo, Runner>>& registry() {
  static const std::vector<std::pair<CheckInfo, Runner>> checks = {
      {{"closed-form-toy", "two-eigenvalue toy data, Gram and Cholesky values", 5e-5},
       closed_form_toy},
      {{"data-equivalence", "symmetrized and unsymmetrized data agree", 1e-9}, data_equivalence},
      {{"interpolation", "data-driven ROM reproduces all 2n samples", 1e-8}, interpolation},
      {{"two-route-rom", "data-driven ROM equals the background projection", 1e-9}, two_route},
      {{"nonlinearity", "scaling data by 4 keeps P and doubles B", 1e-9}, nonlinearity},
      {{"full-rank-recovery", "np = N imaging recovers the true velocity", 1e-5}, full_rank},
  };
  return checks;
}

}  // namespace

const std::vector<CheckInfo>& verify_checks() {
  static const std::vector<CheckInfo> infos = [] {
    std::vector<CheckInfo> out;
    for (const auto& [info, run] : registry()) out.push_back(info);
    return out;
  }();
  return infos;
}

std::vector<CheckResult> run_verify(const std::vector<std::string>& names,
                                    const VerifyOptions& options) {
  for (const auto& name : names) {
    const auto& reg = registry();
    if (std::none_of(reg.begin(), reg.end(), [&](const auto& e) { return e.first.name == name; })) {
      throw ValidationError("unknown check '" + name + "'");
    }
  }
  std::vector<CheckResult> results;
  for (const auto& [info, run] : registry()) {
    if (!names.empty() && std::find(names.begin(), names.end(), info.name) == names.end()) {
      continue;
    }
    try {
      results.push_back(run(info, options));
    } catch (const NumericalError& e) {
      results.push_back({info, false, std::nan(""), e.what()});
    }
  }
  return results;
}

}  // namespace rombp
