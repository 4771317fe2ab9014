#pragma once

#include "rombp/survey.hpp"

#include <Eigen/Dense>

#include <vector>

namespace rombp {

// Snapshot inner products recovered from the data alone via the Chebyshev
// product rule T_i T_j = (T_{i+j} + T_{|i-j|}) / 2.
//   mass(i, j)      = u_i^T u_j
//   stiffness(i, j) = u_i^T P u_j
// Both are np x np with p x p blocks.
Eigen::MatrixXd gram_from_data(const DataCube& cube, Index n);
Eigen::MatrixXd gram_from_data(const DataCube& cube);
Eigen::MatrixXd stiffness_from_data(const DataCube& cube, Index n);
Eigen::MatrixXd stiffness_from_data(const DataCube& cube);

struct GramData {
  Eigen::MatrixXd mass;
  Eigen::MatrixXd stiffness;
  Index p = 0;
  Index n = 0;
};

GramData gram_data(const DataCube& cube, Index n);

// Block lower triangular L with L L^T = M + shift I. Diagonal blocks are
// lower triangular with positive diagonals, which makes the factor unique.
struct BlockCholeskyFactor {
  Eigen::MatrixXd l;
  Index p = 0;
  double shift = 0.0;      // absolute diagonal shift that was applied
  double min_pivot = 0.0;  // smallest diagonal entry of L
  int min_pivot_block = 0;

  Index n() const noexcept { return p == 0 ? 0 : l.rows() / p; }
};

// A Schur-complement pivot not exceeding this fraction of the largest
// diagonal entry of M is treated as a loss of positive definiteness.
inline constexpr double kPivotTolerance = 1e-14;

// Throws CholeskyError naming the failing block when a pivot is not positive.
// `eps` scales the shift: M + eps * tr(M) / (np) * I.
BlockCholeskyFactor block_cholesky(const Eigen::MatrixXd& m, Index p, double eps = 0.0);

// Solvers against the factor without forming its inverse.
Eigen::MatrixXd solve_lower(const BlockCholeskyFactor& factor, const Eigen::MatrixXd& rhs);
// Computes X = rhs * L^{-T}.
Eigen::MatrixXd solve_right_transpose(const BlockCholeskyFactor& factor,
                                      const Eigen::MatrixXd& rhs);

struct Rom {
  Eigen::MatrixXd propagator;  // L^{-1} (U^T P U) L^{-T}
  Eigen::MatrixXd source;      // L^{-1} U^T B = [L_11^T; 0; ...; 0]
  Eigen::MatrixXd op;          // (2 / tau^2) (propagator - I), 1/s^2
  double tau = 0.0;
  Index p = 0;
  Index n = 0;
};

// `mass` supplies the first block column for the reduced source.
Rom assemble_rom(const BlockCholeskyFactor& factor, const Eigen::MatrixXd& stiffness,
                 const Eigen::MatrixXd& mass, double tau);

// Data-only construction: Gram assembly, factorization and projection.
Rom rom_from_data(const DataCube& cube, Index n, double eps = 0.0,
                  BlockCholeskyFactor* factor_out = nullptr);

// Taylor inversion of the cosine propagator: (2 / tau^2) (P - I).
Eigen::MatrixXd operator_from_propagator(const Eigen::MatrixXd& propagator, double tau);

// G_k = B^T T_k(P) B for k = 0..k_max.
std::vector<Eigen::MatrixXd> rom_data_samples(const Rom& rom, Index k_max);

// max_k |G_k - F_k| / |F_k| over all samples of the cube.
double interpolation_residual(const Rom& rom, const DataCube& cube);

}  // namespace rombp
