#pragma once

#include "rombp/grid.hpp"

#include <Eigen/Dense>

#include <memory>
#include <variant>
#include <vector>

namespace rombp {

// Eigenpairs of a symmetric negative definite operator, eigenvalues ascending.
struct SpectralDecomposition {
  Eigen::VectorXd eigenvalues;   // 1/s^2
  Eigen::MatrixXd eigenvectors;  // orthonormal columns

  Index size() const noexcept { return eigenvalues.size(); }
  Eigen::MatrixXd reconstruct() const;
};

// Eigenvalues at or below this fraction of |lambda_min| above zero are treated
// as zero; anything larger is rejected.
inline constexpr double kPositiveEigenvalueClamp = 1e-12;

// Dense symmetric eigensolver (LAPACK dsyevr). Throws NumericalError if the
// solver fails or the operator has a positive eigenvalue beyond the clamp.
SpectralDecomposition spectral_decompose(const Eigen::MatrixXd& symmetric);
SpectralDecomposition spectral_decompose(const SymmetrizedOperator& op);

// f(lambda) = cos(tau * sqrt(-lambda))
struct CosSqrt {
  double tau;
};
// f(lambda) = exp(sigma * lambda / 2)
struct ExpHalf {
  double sigma;
};
using MatrixFunction = std::variant<CosSqrt, ExpHalf>;

double evaluate(const MatrixFunction& f, double lambda);

// Q f(Lambda) Q^T X
Eigen::MatrixXd matrix_function_apply(const SpectralDecomposition& dec, const MatrixFunction& f,
                                      const Eigen::MatrixXd& x);

// The one-step propagator cos(tau sqrt(-A)). Applied through the shared
// eigenbasis; `dense()` materializes the N x N matrix.
class PropagatorMatrix {
 public:
  PropagatorMatrix(std::shared_ptr<const SpectralDecomposition> dec, double tau);

  double tau() const noexcept { return tau_; }
  Index size() const noexcept { return dec_->size(); }
  const Eigen::VectorXd& eigenvalues() const noexcept { return cosines_; }
  const SpectralDecomposition& decomposition() const noexcept { return *dec_; }

  Eigen::MatrixXd apply(const Eigen::MatrixXd& x) const;
  Eigen::MatrixXd dense() const;

 private:
  std::shared_ptr<const SpectralDecomposition> dec_;
  double tau_;
  Eigen::VectorXd cosines_;
};

PropagatorMatrix build_propagator(std::shared_ptr<const SpectralDecomposition> dec, double tau);

// Chebyshev snapshots u_k = T_k(P) B, k = 0..n-1, each N x p.
struct SnapshotMatrix {
  std::vector<Eigen::MatrixXd> blocks;

  Index block_count() const noexcept { return static_cast<Index>(blocks.size()); }
  Index block_size() const noexcept { return blocks.empty() ? 0 : blocks.front().cols(); }
  Eigen::MatrixXd assembled() const;
};

SnapshotMatrix compute_snapshots(const PropagatorMatrix& propagator, const Eigen::MatrixXd& b,
                                 Index n);

}  // namespace rombp
