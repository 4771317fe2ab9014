#pragma once

#include "rombp/grid.hpp"
#include "rombp/propagator.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace rombp {

enum class PropagatorBackend { kSpectral, kChebyshev };

// f(x) ~ sum_j c_j T_j(t), t = (2x - (lower + upper)) / (upper - lower),
// truncated once the coefficients drop below roundoff.
struct ChebyshevSeries {
  double lower = -1.0;
  double upper = 1.0;
  Eigen::VectorXd coefficients;

  Index degree() const noexcept { return coefficients.size() - 1; }
  double operator()(double x) const;
};

ChebyshevSeries fit_chebyshev(const MatrixFunction& f, double lower, double upper);

// Gershgorin lower bound on the spectrum of a symmetric matrix.
double gershgorin_lower_bound(const Eigen::SparseMatrix<double>& a);

// f(A) X for the series fitted on an interval containing the spectrum of A.
Eigen::MatrixXd chebyshev_apply(const Eigen::SparseMatrix<double>& a, const ChebyshevSeries& s,
                                const Eigen::MatrixXd& x);

// cos(tau sqrt(-A)) applied through sparse products, for grids too large for
// a dense eigendecomposition. Agrees with PropagatorMatrix to roundoff.
class ChebyshevPropagator {
 public:
  ChebyshevPropagator(const SymmetrizedOperator& op, double tau);

  double tau() const noexcept { return tau_; }
  Index size() const noexcept { return a_.rows(); }
  const ChebyshevSeries& series() const noexcept { return cos_; }

  Eigen::MatrixXd apply(const Eigen::MatrixXd& x) const;
  // f(A) X with a series fitted on the same spectral interval.
  Eigen::MatrixXd apply_function(const MatrixFunction& f, const Eigen::MatrixXd& x) const;

 private:
  Eigen::SparseMatrix<double> a_;
  double tau_;
  ChebyshevSeries cos_;
};

SnapshotMatrix compute_snapshots(const ChebyshevPropagator& propagator, const Eigen::MatrixXd& b,
                                 Index n);

}  // namespace rombp
