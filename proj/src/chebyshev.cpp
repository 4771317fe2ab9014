#include "rombp/chebyshev.hpp"

#include "rombp/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace rombp {

namespace {

constexpr Index kMaxNodes = 1 << 14;

double to_unit(double x, double lower, double upper) {
  return (2.0 * x - (lower + upper)) / (upper - lower);
}

// Chebyshev coefficients from m samples at the first-kind nodes. The cosine
// table is indexed modulo 4m and the sums run in long double, which keeps the
// coefficient noise well below double roundoff.
Eigen::VectorXd coefficients_at(const MatrixFunction& f, double lower, double upper, Index m,
                                double* sample_scale) {
  std::vector<long double> table(static_cast<std::size_t>(4 * m));
  for (Index i = 0; i < 4 * m; ++i) {
    table[static_cast<std::size_t>(i)] =
        std::cos(std::numbers::pi_v<long double> * static_cast<long double>(i) / (2.0L * m));
  }
  std::vector<long double> values(static_cast<std::size_t>(m));
  *sample_scale = 0.0;
  for (Index k = 0; k < m; ++k) {
    const double t = static_cast<double>(table[static_cast<std::size_t>(2 * k + 1)]);
    const double v = evaluate(f, 0.5 * (upper - lower) * t + 0.5 * (upper + lower));
    values[static_cast<std::size_t>(k)] = v;
    *sample_scale = std::max(*sample_scale, std::abs(v));
  }
  Eigen::VectorXd c(m);
  for (Index j = 0; j < m; ++j) {
    long double sum = 0.0L;
    for (Index k = 0; k < m; ++k) {
      sum += values[static_cast<std::size_t>(k)] *
             table[static_cast<std::size_t>((j * (2 * k + 1)) % (4 * m))];
    }
    c(j) = static_cast<double>(2.0L * sum / m);
  }
  c(0) *= 0.5;
  return c;
}

}  // namespace

double ChebyshevSeries::operator()(double x) const {
  const double t = to_unit(x, lower, upper);
  double b1 = 0.0;
  double b2 = 0.0;
  for (Index j = degree(); j >= 1; --j) {
    const double b0 = 2.0 * t * b1 - b2 + coefficients(j);
    b2 = b1;
    b1 = b0;
  }
  return t * b1 - b2 + coefficients(0);
}

ChebyshevSeries fit_chebyshev(const MatrixFunction& f, double lower, double upper) {
  if (!(lower < upper) || !std::isfinite(lower) || !std::isfinite(upper)) {
    throw ValidationError("Chebyshev interval must satisfy lower < upper");
  }
  for (Index m = 16; m <= kMaxNodes; m *= 2) {
    double scale = 0.0;
    Eigen::VectorXd c = coefficients_at(f, lower, upper, m, &scale);
    const double tail = c.tail(m / 4).cwiseAbs().maxCoeff();
    if (tail > 1e-15 * scale) continue;
    Index keep = m;
    while (keep > 1 && std::abs(c(keep - 1)) <= 1e-16 * scale) --keep;
    return {lower, upper, c.head(keep)};
  }
  throw NumericalError("Chebyshev expansion did not converge");
}

double gershgorin_lower_bound(const Eigen::SparseMatrix<double>& a) {
  Eigen::VectorXd centre = Eigen::VectorXd::Zero(a.rows());
  Eigen::VectorXd radius = Eigen::VectorXd::Zero(a.rows());
  for (Index col = 0; col < a.outerSize(); ++col) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(a, col); it; ++it) {
      if (it.row() == it.col()) {
        centre(it.row()) += it.value();
      } else {
        radius(it.row()) += std::abs(it.value());
      }
    }
  }
  return (centre - radius).minCoeff();
}

Eigen::MatrixXd chebyshev_apply(const Eigen::SparseMatrix<double>& a, const ChebyshevSeries& s,
                                const Eigen::MatrixXd& x) {
  if (x.rows() != a.rows()) throw ValidationError("Chebyshev argument has the wrong row count");
  const double gain = 2.0 / (s.upper - s.lower);
  const double shift = (s.upper + s.lower) / (s.upper - s.lower);
  const auto unit = [&](const Eigen::MatrixXd& v) -> Eigen::MatrixXd {
    return gain * (a * v) - shift * v;
  };
  Eigen::MatrixXd result = s.coefficients(0) * x;
  if (s.degree() == 0) return result;
  Eigen::MatrixXd previous = x;
  Eigen::MatrixXd current = unit(x);
  result += s.coefficients(1) * current;
  for (Index j = 2; j <= s.degree(); ++j) {
    Eigen::MatrixXd next = 2.0 * unit(current) - previous;
    result += s.coefficients(j) * next;
    previous = std::move(current);
    current = std::move(next);
  }
  return result;
}

ChebyshevPropagator::ChebyshevPropagator(const SymmetrizedOperator& op, double tau)
    : a_(op.matrix()), tau_(tau) {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw ValidationError("tau must be positive");
  cos_ = fit_chebyshev(CosSqrt{tau}, gershgorin_lower_bound(a_), 0.0);
}

Eigen::MatrixXd ChebyshevPropagator::apply(const Eigen::MatrixXd& x) const {
  return chebyshev_apply(a_, cos_, x);
}

Eigen::MatrixXd ChebyshevPropagator::apply_function(const MatrixFunction& f,
                                                    const Eigen::MatrixXd& x) const {
  if (const auto* exp = std::get_if<ExpHalf>(&f); exp != nullptr && exp->sigma == 0.0) {
    if (x.rows() != size()) throw ValidationError("argument has the wrong row count");
    return x;
  }
  return chebyshev_apply(a_, fit_chebyshev(f, cos_.lower, cos_.upper), x);
}

SnapshotMatrix compute_snapshots(const ChebyshevPropagator& propagator, const Eigen::MatrixXd& b,
                                 Index n) {
  if (n < 1) throw ValidationError("snapshot count must be at least 1");
  if (b.rows() != propagator.size()) {
    throw ValidationError("source matrix row count does not match the propagator");
  }
  SnapshotMatrix snaps;
  snaps.blocks.reserve(static_cast<std::size_t>(n));
  snaps.blocks.push_back(b);
  if (n == 1) return snaps;
  snaps.blocks.push_back(propagator.apply(b));
  for (Index k = 2; k < n; ++k) {
    const auto& u1 = snaps.blocks[static_cast<std::size_t>(k - 1)];
    const auto& u0 = snaps.blocks[static_cast<std::size_t>(k - 2)];
    snaps.blocks.push_back(2.0 * propagator.apply(u1) - u0);
  }
  return snaps;
}

}  // namespace rombp
