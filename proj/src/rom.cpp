#include "rombp/rom.hpp"

#include "rombp/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <string>

namespace rombp {

namespace {

void require_samples(const DataCube& cube, Index n, Index needed, const char* what) {
  cube.validate();
  if (n < 1) throw ValidationError("n must be at least 1");
  if (cube.sample_count() < needed) {
    std::ostringstream msg;
    msg << what << " with n = " << n << " needs " << needed << " samples, cube has "
        << cube.sample_count();
    throw ValidationError(msg.str());
  }
}

const Eigen::MatrixXd& sample(const DataCube& cube, Index k) {
  return cube.samples[static_cast<std::size_t>(std::abs(k))];
}

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& m) { return 0.5 * (m + m.transpose()); }

}  // namespace

Eigen::MatrixXd gram_from_data(const DataCube& cube, Index n) {
  require_samples(cube, n, 2 * n - 1, "Gram assembly");
  const Index p = cube.p();
  Eigen::MatrixXd m(n * p, n * p);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      m.block(i * p, j * p, p, p) = 0.5 * (sample(cube, i + j) + sample(cube, i - j));
    }
  }
  return symmetrized(m);
}

Eigen::MatrixXd gram_from_data(const DataCube& cube) { return gram_from_data(cube, cube.n()); }

Eigen::MatrixXd stiffness_from_data(const DataCube& cube, Index n) {
  require_samples(cube, n, 2 * n, "stiffness assembly");
  const Index p = cube.p();
  Eigen::MatrixXd m(n * p, n * p);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      m.block(i * p, j * p, p, p) = 0.25 * (sample(cube, i + j + 1) + sample(cube, i - j + 1) +
                                            sample(cube, i + j - 1) + sample(cube, i - j - 1));
    }
  }
  return symmetrized(m);
}

Eigen::MatrixXd stiffness_from_data(const DataCube& cube) {
  return stiffness_from_data(cube, cube.n());
}

GramData gram_data(const DataCube& cube, Index n) {
  return {gram_from_data(cube, n), stiffness_from_data(cube, n), cube.p(), n};
}

BlockCholeskyFactor block_cholesky(const Eigen::MatrixXd& m, Index p, double eps) {
  if (p < 1 || m.rows() != m.cols() || m.rows() == 0 || m.rows() % p != 0) {
    throw ValidationError("block Cholesky needs a square matrix made of p x p blocks");
  }
  if (!(eps >= 0.0)) throw ValidationError("regularization eps must be >= 0");
  const Index size = m.rows();
  const Index blocks = size / p;

  BlockCholeskyFactor factor;
  factor.p = p;
  factor.shift = eps * m.trace() / static_cast<double>(size);
  factor.min_pivot = std::numeric_limits<double>::infinity();
  factor.l = Eigen::MatrixXd::Zero(size, size);
  Eigen::MatrixXd& l = factor.l;

  const double tolerance = kPivotTolerance * m.diagonal().cwiseAbs().maxCoeff();

  for (Index k = 0; k < blocks; ++k) {
    const Index o = k * p;
    // Schur complement of the diagonal block.
    Eigen::MatrixXd s = m.block(o, o, p, p);
    s.diagonal().array() += factor.shift;
    if (k > 0) s.noalias() -= l.block(o, 0, p, o) * l.block(o, 0, p, o).transpose();

    // Scalar Cholesky of the diagonal block, positive diagonal convention.
    Eigen::MatrixXd lkk = Eigen::MatrixXd::Zero(p, p);
    for (Index c = 0; c < p; ++c) {
      double d = s(c, c) - lkk.row(c).head(c).squaredNorm();
      if (!(d > tolerance)) {
        std::ostringstream msg;
        msg << "non-positive pivot " << d << " at block " << (k + 1) << " of " << blocks
            << " (column " << (o + c + 1) << "); the snapshot Gram matrix is numerically "
            << "singular. Choose tau nearer the wavelet's Nyquist interval, reduce n, "
            << "or raise eps";
        throw CholeskyError(static_cast<int>(k), d, msg.str());
      }
      const double diag = std::sqrt(d);
      lkk(c, c) = diag;
      if (diag < factor.min_pivot) {
        factor.min_pivot = diag;
        factor.min_pivot_block = static_cast<int>(k);
      }
      for (Index r = c + 1; r < p; ++r) {
        lkk(r, c) = (s(r, c) - lkk.row(r).head(c).dot(lkk.row(c).head(c))) / diag;
      }
    }
    l.block(o, o, p, p) = lkk;

    // Sub-diagonal blocks: L_ik = (M_ik - sum_j L_ij L_kj^T) L_kk^{-T}.
    const Index below = size - o - p;
    if (below > 0) {
      Eigen::MatrixXd rhs = m.block(o + p, o, below, p);
      if (k > 0) rhs.noalias() -= l.block(o + p, 0, below, o) * l.block(o, 0, p, o).transpose();
      l.block(o + p, o, below, p) =
          lkk.triangularView<Eigen::Lower>().solve(rhs.transpose()).transpose();
    }
  }
  return factor;
}

Eigen::MatrixXd solve_lower(const BlockCholeskyFactor& factor, const Eigen::MatrixXd& rhs) {
  if (rhs.rows() != factor.l.rows()) throw ValidationError("triangular solve size mismatch");
  return factor.l.triangularView<Eigen::Lower>().solve(rhs);
}

Eigen::MatrixXd solve_right_transpose(const BlockCholeskyFactor& factor,
                                      const Eigen::MatrixXd& rhs) {
  if (rhs.cols() != factor.l.rows()) throw ValidationError("triangular solve size mismatch");
  // X L^T = rhs  <=>  L X^T = rhs^T
  return factor.l.triangularView<Eigen::Lower>().solve(rhs.transpose()).transpose();
}

Eigen::MatrixXd operator_from_propagator(const Eigen::MatrixXd& propagator, double tau) {
  if (!(tau > 0.0)) throw ValidationError("tau must be positive");
  Eigen::MatrixXd a = propagator;
  a.diagonal().array() -= 1.0;
  return (2.0 / (tau * tau)) * a;
}

Rom assemble_rom(const BlockCholeskyFactor& factor, const Eigen::MatrixXd& stiffness,
                 const Eigen::MatrixXd& mass, double tau) {
  const Index size = factor.l.rows();
  if (stiffness.rows() != size || stiffness.cols() != size || mass.rows() != size) {
    throw ValidationError("factor, stiffness and Gram sizes disagree");
  }
  if ((factor.l.diagonal().array() == 0.0).any()) {
    throw NumericalError("singular triangular factor");
  }
  Rom rom;
  rom.tau = tau;
  rom.p = factor.p;
  rom.n = factor.n();
  const Eigen::MatrixXd half = solve_lower(factor, stiffness);
  rom.propagator = symmetrized(solve_right_transpose(factor, half));
  rom.source = solve_lower(factor, mass.leftCols(factor.p));
  rom.op = operator_from_propagator(rom.propagator, tau);
  return rom;
}

Rom rom_from_data(const DataCube& cube, Index n, double eps, BlockCholeskyFactor* factor_out) {
  const GramData gram = gram_data(cube, n);
  BlockCholeskyFactor factor = block_cholesky(gram.mass, gram.p, eps);
  Rom rom = assemble_rom(factor, gram.stiffness, gram.mass, cube.tau);
  if (factor_out != nullptr) *factor_out = std::move(factor);
  return rom;
}

std::vector<Eigen::MatrixXd> rom_data_samples(const Rom& rom, Index k_max) {
  if (k_max < 0) throw ValidationError("k_max must be >= 0");
  std::vector<Eigen::MatrixXd> out;
  out.reserve(static_cast<std::size_t>(k_max + 1));
  Eigen::MatrixXd previous = rom.source;
  out.emplace_back(rom.source.transpose() * previous);
  if (k_max == 0) return out;
  Eigen::MatrixXd current = rom.propagator * rom.source;
  out.emplace_back(rom.source.transpose() * current);
  for (Index k = 2; k <= k_max; ++k) {
    Eigen::MatrixXd next = 2.0 * rom.propagator * current - previous;
    previous = std::move(current);
    current = std::move(next);
    out.emplace_back(rom.source.transpose() * current);
  }
  return out;
}

double interpolation_residual(const Rom& rom, const DataCube& cube) {
  const auto g = rom_data_samples(rom, cube.sample_count() - 1);
  double worst = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double scale = std::max(cube.samples[k].norm(), 1e-300);
    worst = std::max(worst, (g[k] - cube.samples[k]).norm() / scale);
  }
  return worst;
}

}  // namespace rombp
