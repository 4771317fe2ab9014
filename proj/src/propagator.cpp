#include "rombp/propagator.hpp"

#include "rombp/error.hpp"

#include <lapacke.h>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

namespace rombp {

Eigen::MatrixXd SpectralDecomposition::reconstruct() const {
  return eigenvectors * eigenvalues.asDiagonal() * eigenvectors.transpose();
}

SpectralDecomposition spectral_decompose(const Eigen::MatrixXd& symmetric) {
  if (symmetric.rows() != symmetric.cols() || symmetric.rows() == 0) {
    throw ValidationError("spectral decomposition needs a nonempty square matrix");
  }
  const auto n = static_cast<lapack_int>(symmetric.rows());
  Eigen::MatrixXd work = symmetric;
  SpectralDecomposition dec;
  dec.eigenvalues.resize(n);
  dec.eigenvectors.resize(n, n);
  std::vector<lapack_int> support(2 * static_cast<std::size_t>(n));
  lapack_int found = 0;
  const lapack_int info = LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'A', 'L', n, work.data(), n, 0.0,
                                         0.0, 0, 0, 0.0, &found, dec.eigenvalues.data(),
                                         dec.eigenvectors.data(), n, support.data());
  if (info != 0 || found != n) {
    throw NumericalError("symmetric eigensolver failed (dsyevr info " + std::to_string(info) +
                         ")");
  }
  const double lambda_max = dec.eigenvalues(n - 1);
  const double threshold = kPositiveEigenvalueClamp * std::abs(dec.eigenvalues(0));
  if (lambda_max > threshold) {
    std::ostringstream msg;
    msg << "operator is not negative definite: largest eigenvalue " << lambda_max;
    throw NumericalError(msg.str());
  }
  return dec;
}

SpectralDecomposition spectral_decompose(const SymmetrizedOperator& op) {
  return spectral_decompose(op.dense());
}

namespace {

double clamped_frequency(double lambda) {
  // Callers have already rejected eigenvalues beyond the clamp threshold.
  return lambda >= 0.0 ? 0.0 : std::sqrt(-lambda);
}

Eigen::VectorXd evaluate_all(const SpectralDecomposition& dec, const MatrixFunction& f) {
  const double threshold = kPositiveEigenvalueClamp * std::abs(dec.eigenvalues.minCoeff());
  Eigen::VectorXd values(dec.size());
  for (Index i = 0; i < dec.size(); ++i) {
    const double lambda = dec.eigenvalues(i);
    if (std::holds_alternative<CosSqrt>(f) && lambda > threshold) {
      throw NumericalError("positive eigenvalue " + std::to_string(lambda) +
                           " in cosine propagator");
    }
    values(i) = evaluate(f, lambda);
  }
  return values;
}

}  // namespace

double evaluate(const MatrixFunction& f, double lambda) {
  return std::visit(
      [lambda](const auto& fn) -> double {
        using T = std::decay_t<decltype(fn)>;
        if constexpr (std::is_same_v<T, CosSqrt>) {
          return std::cos(fn.tau * clamped_frequency(lambda));
        } else {
          return std::exp(0.5 * fn.sigma * lambda);
        }
      },
      f);
}

Eigen::MatrixXd matrix_function_apply(const SpectralDecomposition& dec, const MatrixFunction& f,
                                      const Eigen::MatrixXd& x) {
  if (x.rows() != dec.size()) {
    throw ValidationError("matrix function argument has " + std::to_string(x.rows()) +
                          " rows, operator has " + std::to_string(dec.size()));
  }
  if (const auto* exp = std::get_if<ExpHalf>(&f); exp != nullptr && exp->sigma == 0.0) {
    return x;
  }
  const Eigen::VectorXd values = evaluate_all(dec, f);
  Eigen::MatrixXd coeffs = dec.eigenvectors.transpose() * x;
  coeffs = values.asDiagonal() * coeffs;
  return dec.eigenvectors * coeffs;
}

PropagatorMatrix::PropagatorMatrix(std::shared_ptr<const SpectralDecomposition> dec, double tau)
    : dec_(std::move(dec)), tau_(tau) {
  if (!dec_) throw ValidationError("propagator needs a spectral decomposition");
  if (!(tau > 0.0) || !std::isfinite(tau)) throw ValidationError("tau must be positive");
  cosines_ = evaluate_all(*dec_, CosSqrt{tau});
}

Eigen::MatrixXd PropagatorMatrix::apply(const Eigen::MatrixXd& x) const {
  if (x.rows() != size()) throw ValidationError("propagator argument has the wrong row count");
  Eigen::MatrixXd coeffs = dec_->eigenvectors.transpose() * x;
  coeffs = cosines_.asDiagonal() * coeffs;
  return dec_->eigenvectors * coeffs;
}

Eigen::MatrixXd PropagatorMatrix::dense() const {
  Eigen::MatrixXd p = dec_->eigenvectors * cosines_.asDiagonal() * dec_->eigenvectors.transpose();
  return 0.5 * (p + p.transpose());
}

PropagatorMatrix build_propagator(std::shared_ptr<const SpectralDecomposition> dec, double tau) {
  return PropagatorMatrix(std::move(dec), tau);
}

Eigen::MatrixXd SnapshotMatrix::assembled() const {
  if (blocks.empty()) return {};
  const Index p = block_size();
  Eigen::MatrixXd u(blocks.front().rows(), p * block_count());
  for (Index k = 0; k < block_count(); ++k) {
    u.middleCols(k * p, p) = blocks[static_cast<std::size_t>(k)];
  }
  return u;
}

SnapshotMatrix compute_snapshots(const PropagatorMatrix& propagator, const Eigen::MatrixXd& b,
                                 Index n) {
  if (n < 1) throw ValidationError("snapshot count must be at least 1");
  if (b.rows() != propagator.size()) {
    throw ValidationError("source matrix row count does not match the propagator");
  }
  // Recur on eigen-coefficients; one basis change in and one out per block.
  const auto& q = propagator.decomposition().eigenvectors;
  const Eigen::VectorXd& cosines = propagator.eigenvalues();
  SnapshotMatrix snaps;
  snaps.blocks.reserve(static_cast<std::size_t>(n));
  snaps.blocks.push_back(b);
  if (n == 1) return snaps;

  Eigen::MatrixXd previous = q.transpose() * b;
  Eigen::MatrixXd current = cosines.asDiagonal() * previous;
  snaps.blocks.push_back(q * current);
  for (Index k = 2; k < n; ++k) {
    Eigen::MatrixXd next = 2.0 * (cosines.asDiagonal() * current) - previous;
    previous = std::move(current);
    current = std::move(next);
    snaps.blocks.push_back(q * current);
  }
  return snaps;
}

}  // namespace rombp
