#include "rombp/survey.hpp"

#include "rombp/error.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <set>
#include <string>

namespace rombp {

void SurveyGeometry::validate(const Grid2D& grid) const {
  if (nodes.empty()) throw ValidationError("survey needs at least one source/receiver");
  if (row < 0 || row >= grid.nz()) throw ValidationError("survey row is outside the grid");
  std::set<Index> seen;
  for (Index node : nodes) {
    if (node < 0 || node >= grid.size()) throw ValidationError("survey node outside the grid");
    if (grid.iz(node) != row) throw ValidationError("survey node is off the survey row");
    if (!seen.insert(node).second) throw ValidationError("survey nodes must be distinct");
  }
}

SurveyGeometry uniform_array(const Grid2D& grid, Index p, double spacing, Index row) {
  if (p < 1) throw ValidationError("p must be at least 1");
  if (row < 1 || row > grid.nz() - 2) {
    throw ValidationError("survey row must be an interior row");
  }
  Index step = 1;
  if (p > 1) {
    step = static_cast<Index>(std::lround(spacing / grid.h()));
    if (step < 1) throw ValidationError("source spacing is below one grid node");
  }
  const Index span = (p - 1) * step;
  // Interior columns are 1..nx-2.
  if (span > grid.nx() - 3) {
    throw ValidationError("array of " + std::to_string(p) + " sources at spacing " +
                          std::to_string(step) + " nodes does not fit the grid interior");
  }
  const Index first = 1 + (grid.nx() - 3 - span) / 2;
  SurveyGeometry geom;
  geom.row = row;
  geom.spacing = static_cast<double>(step) * grid.h();
  for (Index j = 0; j < p; ++j) geom.nodes.push_back(grid.node(first + j * step, row));
  return geom;
}

Eigen::MatrixXd build_point_sources(const Grid2D& grid, const SurveyGeometry& geometry) {
  geometry.validate(grid);
  Eigen::MatrixXd e = Eigen::MatrixXd::Zero(grid.size(), geometry.p());
  for (Index j = 0; j < geometry.p(); ++j) e(geometry.nodes[static_cast<std::size_t>(j)], j) = 1.0;
  return e;
}

Eigen::MatrixXd build_source_matrix(const SpectralDecomposition& dec, const Eigen::MatrixXd& e,
                                    const SourceWavelet& wavelet) {
  if (!(wavelet.sigma >= 0.0)) throw ValidationError("wavelet sigma must be >= 0");
  return matrix_function_apply(dec, ExpHalf{wavelet.sigma}, e);
}

Eigen::MatrixXd build_source_matrix(const ChebyshevPropagator& propagator,
                                    const Eigen::MatrixXd& e, const SourceWavelet& wavelet) {
  if (!(wavelet.sigma >= 0.0)) throw ValidationError("wavelet sigma must be >= 0");
  return propagator.apply_function(ExpHalf{wavelet.sigma}, e);
}

void DataCube::validate() const {
  if (!(tau > 0.0)) throw ValidationError("data cube tau must be positive");
  if (samples.empty()) throw ValidationError("data cube has no samples");
  const Index p0 = p();
  for (const auto& f : samples) {
    if (f.rows() != p0 || f.cols() != p0) {
      throw ValidationError("data cube samples must all be p x p");
    }
  }
}

namespace {

DataCube data_from_snapshots(const SnapshotMatrix& snaps, const Eigen::MatrixXd& b, double tau,
                             SimulationReport* report) {
  DataCube cube;
  cube.tau = tau;
  cube.samples.reserve(snaps.blocks.size());
  double asym = 0.0;
  for (const auto& u : snaps.blocks) {
    Eigen::MatrixXd f = b.transpose() * u;
    asym = std::max(asym, (f - f.transpose()).norm() / std::max(1.0, f.norm()));
    cube.samples.emplace_back(0.5 * (f + f.transpose()));
  }
  if (report != nullptr) report->max_asymmetry = asym;
  return cube;
}

}  // namespace

DataCube simulate_data(const PropagatorMatrix& propagator, const Eigen::MatrixXd& b, Index n,
                       SimulationReport* report) {
  if (n < 1) throw ValidationError("n must be at least 1");
  return data_from_snapshots(compute_snapshots(propagator, b, 2 * n), b, propagator.tau(), report);
}

DataCube simulate_data(const ChebyshevPropagator& propagator, const Eigen::MatrixXd& b, Index n,
                       SimulationReport* report) {
  if (n < 1) throw ValidationError("n must be at least 1");
  return data_from_snapshots(compute_snapshots(propagator, b, 2 * n), b, propagator.tau(), report);
}

DataCube oracle_unsymmetrized_data(const VelocityModel& model, const DiscreteLaplacian& lap,
                                   const Eigen::MatrixXd& e, const SourceWavelet& wavelet,
                                   double tau, Index n) {
  if (n < 1) throw ValidationError("n must be at least 1");
  if (!(tau > 0.0)) throw ValidationError("tau must be positive");
  const SymmetrizedOperator op = assemble_symmetrized_operator(model, lap);
  const SpectralDecomposition dec = spectral_decompose(op);
  const Eigen::VectorXd& c = model.c();
  const Eigen::VectorXd c_inv = c.cwiseInverse();

  // f(A) X = C f(A_sym) C^{-1} X for A = C A_sym C^{-1}.
  const auto apply_unsym = [&](const MatrixFunction& f, const Eigen::MatrixXd& x) {
    return Eigen::MatrixXd(c.asDiagonal() *
                           matrix_function_apply(dec, f, c_inv.asDiagonal() * x));
  };

  const Eigen::MatrixXd ce = c.asDiagonal() * e;
  const Eigen::MatrixXd s =
      wavelet.sigma == 0.0 ? ce : apply_unsym(ExpHalf{2.0 * wavelet.sigma}, ce);
  const Eigen::MatrixXd r = c_inv.asDiagonal() * e;

  DataCube cube;
  cube.tau = tau;
  for (Index k = 0; k < 2 * n; ++k) {
    const double t = static_cast<double>(k) * tau;
    const Eigen::MatrixXd u = k == 0 ? s : apply_unsym(CosSqrt{t}, s);
    Eigen::MatrixXd f = r.transpose() * u;
    cube.samples.emplace_back(0.5 * (f + f.transpose()));
  }
  return cube;
}

double max_relative_difference(const DataCube& a, const DataCube& b) {
  if (a.sample_count() != b.sample_count() || a.p() != b.p()) {
    throw ValidationError("data cubes have different shapes");
  }
  double worst = 0.0;
  for (std::size_t k = 0; k < a.samples.size(); ++k) {
    const double scale = std::max(b.samples[k].norm(), 1e-300);
    worst = std::max(worst, (a.samples[k] - b.samples[k]).norm() / scale);
  }
  return worst;
}

}  // namespace rombp
