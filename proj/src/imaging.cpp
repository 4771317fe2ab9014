#include "rombp/imaging.hpp"

#include "rombp/error.hpp"

#include <cmath>
#include <string>

namespace rombp {

BackgroundBasis background_basis(const VelocityModel& background, const SurveyGeometry& survey,
                                 const SourceWavelet& wavelet, double tau, Index n, double eps,
                                 PropagatorBackend backend) {
  const Grid2D& grid = background.grid();
  const DiscreteLaplacian lap = build_laplacian(grid);
  const SymmetrizedOperator op = assemble_symmetrized_operator(background, lap);

  BackgroundBasis basis;
  basis.tau = tau;
  basis.operator_diagonal = op.diagonal();
  const Eigen::MatrixXd e = build_point_sources(grid, survey);
  if (backend == PropagatorBackend::kSpectral) {
    basis.decomposition = std::make_shared<const SpectralDecomposition>(spectral_decompose(op));
    basis.source = build_source_matrix(*basis.decomposition, e, wavelet);
    basis.snapshots =
        compute_snapshots(build_propagator(basis.decomposition, tau), basis.source, n);
  } else {
    basis.chebyshev = std::make_shared<const ChebyshevPropagator>(op, tau);
    basis.source = build_source_matrix(*basis.chebyshev, e, wavelet);
    basis.snapshots = compute_snapshots(*basis.chebyshev, basis.source, n);
  }

  const Eigen::MatrixXd u = basis.snapshots.assembled();
  Eigen::MatrixXd gram = u.transpose() * u;
  gram = (0.5 * (gram + gram.transpose())).eval();
  basis.factor = block_cholesky(gram, survey.p(), eps);
  basis.v = solve_right_transpose(basis.factor, u);
  return basis;
}

Eigen::MatrixXd BackgroundBasis::apply_propagator(const Eigen::MatrixXd& x) const {
  if (chebyshev) return chebyshev->apply(x);
  if (!decomposition) throw ValidationError("background basis has no propagator");
  return build_propagator(decomposition, tau).apply(x);
}

BackgroundRom background_rom(const BackgroundBasis& basis) {
  BackgroundRom rom;
  rom.propagator = basis.v.transpose() * basis.apply_propagator(basis.v);
  rom.propagator = (0.5 * (rom.propagator + rom.propagator.transpose())).eval();
  rom.op = operator_from_propagator(rom.propagator, basis.tau);
  return rom;
}

Eigen::VectorXd backproject_delta(const BackgroundBasis& basis, const Eigen::MatrixXd& rom_op,
                                  const Eigen::MatrixXd& background_op) {
  const Index size = basis.v.cols();
  if (rom_op.rows() != size || rom_op.cols() != size || background_op.rows() != size ||
      background_op.cols() != size) {
    throw ValidationError("ROM of size " + std::to_string(rom_op.rows()) +
                          " does not match the background basis of size " + std::to_string(size));
  }
  const Eigen::MatrixXd diff = rom_op - background_op;
  const Eigen::MatrixXd projected = basis.v * diff;
  Eigen::VectorXd dr = projected.cwiseProduct(basis.v).rowwise().sum();
  for (Index i = 0; i < dr.size(); ++i) {
    const double d = basis.operator_diagonal(i);
    if (d == 0.0) throw NumericalError("zero diagonal in the background operator");
    dr(i) /= d;
  }
  return dr;
}

ImageResult form_image(const VelocityModel& background, const Eigen::VectorXd& dr,
                       const ImagingConfig& cfg) {
  if (dr.size() != background.c().size()) {
    throw ValidationError("perturbation field and background model sizes differ");
  }
  if (!std::isfinite(cfg.alpha)) throw ValidationError("alpha must be finite");
  if (!(cfg.clamp_floor >= 0.0)) throw ValidationError("clamp floor must be >= 0");
  ImageResult img{background.grid(), dr, Eigen::VectorXd(dr.size()), 0};
  for (Index i = 0; i < dr.size(); ++i) {
    double radicand = 1.0 + cfg.alpha * dr(i);
    if (!(radicand >= cfg.clamp_floor)) {
      radicand = cfg.clamp_floor;
      ++img.clamped;
    }
    img.cstar(i) = background.c()(i) * std::sqrt(radicand);
  }
  return img;
}

Index well_log_column(const Grid2D& grid, double x_offset) {
  const double extent = grid.x(grid.nx() - 1);
  if (!(x_offset >= 0.0) || x_offset > extent) {
    throw ValidationError("well-log offset " + std::to_string(x_offset) +
                          " m is outside the grid extent [0, " + std::to_string(extent) + "]");
  }
  const double pos = x_offset / grid.h();
  const auto lower = static_cast<Index>(std::floor(pos));
  if (lower + 1 >= grid.nx()) return grid.nx() - 1;
  return pos - static_cast<double>(lower) > 0.5 ? lower + 1 : lower;
}

std::vector<WellLogSample> extract_well_log(const ImageResult& image,
                                            const VelocityModel& background, double x_offset) {
  if (!(image.grid == background.grid())) {
    throw ValidationError("image and background model are on different grids");
  }
  const Grid2D& grid = image.grid;
  const Index col = well_log_column(grid, x_offset);
  std::vector<WellLogSample> log;
  log.reserve(static_cast<std::size_t>(grid.nz()));
  for (Index iz = 0; iz < grid.nz(); ++iz) {
    const Index node = grid.node(col, iz);
    log.push_back({grid.depth(iz), background.c()(node), image.cstar(node)});
  }
  return log;
}

}  // namespace rombp
