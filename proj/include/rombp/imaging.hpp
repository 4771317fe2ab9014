#pragma once

#include "rombp/chebyshev.hpp"
#include "rombp/grid.hpp"
#include "rombp/propagator.hpp"
#include "rombp/rom.hpp"
#include "rombp/survey.hpp"

#include <Eigen/Dense>

#include <memory>
#include <vector>

namespace rombp {

// Orthonormal snapshot basis of the kinematic (background) model,
// V0 = U0 L0^{-T}, with the operators it was built from.
struct BackgroundBasis {
  Eigen::MatrixXd v;  // N x np
  BlockCholeskyFactor factor;
  Eigen::VectorXd operator_diagonal;  // diag of the background C Laplacian C
  std::shared_ptr<const SpectralDecomposition> decomposition;  // spectral backend
  std::shared_ptr<const ChebyshevPropagator> chebyshev;        // Chebyshev backend
  Eigen::MatrixXd source;  // background B0 = q(A0) E
  SnapshotMatrix snapshots;
  double tau = 0.0;

  Eigen::MatrixXd apply_propagator(const Eigen::MatrixXd& x) const;
};

BackgroundBasis background_basis(const VelocityModel& background, const SurveyGeometry& survey,
                                 const SourceWavelet& wavelet, double tau, Index n,
                                 double eps = 0.0,
                                 PropagatorBackend backend = PropagatorBackend::kSpectral);

struct BackgroundRom {
  Eigen::MatrixXd propagator;  // V0^T P0 V0
  Eigen::MatrixXd op;          // (2 / tau^2) (propagator - I)
};

BackgroundRom background_rom(const BackgroundBasis& basis);

// dr_i = (V0 (A - A0) V0^T)_ii / (A0_hat)_ii, the relative squared-velocity
// perturbation. Never forms the N x N product.
Eigen::VectorXd backproject_delta(const BackgroundBasis& basis, const Eigen::MatrixXd& rom_op,
                                  const Eigen::MatrixXd& background_op);

struct ImagingConfig {
  double alpha = 1.0;
  double eps = 0.0;
  double clamp_floor = 0.0;
};

struct ImageResult {
  Grid2D grid;
  Eigen::VectorXd dr;     // dimensionless
  Eigen::VectorXd cstar;  // m/s
  Index clamped = 0;      // nodes whose radicand hit the clamp floor
};

// c* = c0 sqrt(max(floor, 1 + alpha dr)), componentwise.
ImageResult form_image(const VelocityModel& background, const Eigen::VectorXd& dr,
                       const ImagingConfig& cfg);

struct WellLogSample {
  double depth;  // m
  double c0;
  double cstar;
};

// Grid column nearest to `x_offset`; ties go to the smaller column.
Index well_log_column(const Grid2D& grid, double x_offset);
std::vector<WellLogSample> extract_well_log(const ImageResult& image,
                                            const VelocityModel& background, double x_offset);

}  // namespace rombp
