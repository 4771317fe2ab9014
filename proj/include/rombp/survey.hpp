#pragma once

#include "rombp/chebyshev.hpp"
#include "rombp/grid.hpp"
#include "rombp/propagator.hpp"

#include <Eigen/Dense>

#include <vector>

namespace rombp {

// Collocated source/receiver positions on one grid row.
struct SurveyGeometry {
  Index row = 1;
  double spacing = 0.0;  // m
  std::vector<Index> nodes;

  Index p() const noexcept { return static_cast<Index>(nodes.size()); }
  void validate(const Grid2D& grid) const;
};

// `p` positions spaced `spacing` meters apart (rounded to whole nodes),
// centered laterally on `row`. Row 0 is the Dirichlet boundary, hence the
// default first interior row.
SurveyGeometry uniform_array(const Grid2D& grid, Index p, double spacing, Index row = 1);

struct SourceWavelet {
  double sigma = 1e-4;  // s^2
};

// Column j is the unit coordinate vector of geometry node j.
Eigen::MatrixXd build_point_sources(const Grid2D& grid, const SurveyGeometry& geometry);

// q(A) E with q(A) = exp(sigma A / 2).
Eigen::MatrixXd build_source_matrix(const SpectralDecomposition& dec, const Eigen::MatrixXd& e,
                                    const SourceWavelet& wavelet);
Eigen::MatrixXd build_source_matrix(const ChebyshevPropagator& propagator,
                                    const Eigen::MatrixXd& e, const SourceWavelet& wavelet);

// Samples F_k = F(k tau), k = 0..2n-1, of the collocated array response.
struct DataCube {
  double tau = 0.0;  // s
  std::vector<Eigen::MatrixXd> samples;

  Index p() const noexcept { return samples.empty() ? 0 : samples.front().rows(); }
  Index sample_count() const noexcept { return static_cast<Index>(samples.size()); }
  Index n() const noexcept { return sample_count() / 2; }
  void validate() const;
};

struct SimulationReport {
  double max_asymmetry = 0.0;  // max_k |F_k - F_k^T| / max(1, |F_k|) before symmetrization
};

DataCube simulate_data(const PropagatorMatrix& propagator, const Eigen::MatrixXd& b, Index n,
                       SimulationReport* report = nullptr);
DataCube simulate_data(const ChebyshevPropagator& propagator, const Eigen::MatrixXd& b, Index n,
                       SimulationReport* report = nullptr);

// Independent route through S = q^2(A) C E, R = C^{-1} E and A = C^2 Laplacian,
// with every sample evaluated directly as cos(k tau sqrt(-A)).
DataCube oracle_unsymmetrized_data(const VelocityModel& model, const DiscreteLaplacian& lap,
                                   const Eigen::MatrixXd& e, const SourceWavelet& wavelet,
                                   double tau, Index n);

double max_relative_difference(const DataCube& a, const DataCube& b);

}  // namespace rombp
