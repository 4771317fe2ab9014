#include "rombp/chebyshev.hpp"
#include "rombp/error.hpp"
#include "rombp/imaging.hpp"
#include "rombp/rom.hpp"
#include "rombp/survey.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include <algorithm>

#include <cmath>
#include <random>

using namespace rombp;

namespace {

SymmetrizedOperator random_operator(std::mt19937& rng, Index nx, Index nz) {
  const Grid2D g(nx, nz, 15.0);
  return assemble_symmetrized_operator(test::random_model(g, rng), build_laplacian(g));
}

}  // namespace

TEST(ChebyshevSeries, ReproducesScalarFunctions) {
  std::mt19937 rng(1);
  const double lower = -2.5e5;
  std::uniform_real_distribution<double> u(lower, 0.0);
  const MatrixFunction fns[] = {CosSqrt{0.03}, CosSqrt{0.3}, ExpHalf{1e-4}, ExpHalf{4e-4}};
  for (const auto& f : fns) {
    const ChebyshevSeries s = fit_chebyshev(f, lower, 0.0);
    // Clenshaw rounding near the endpoints grows linearly with the degree.
    const double tol = std::max(5e-14, 4.0 * 2.2e-16 * static_cast<double>(s.degree()));
    for (int i = 0; i < 200; ++i) {
      const double x = u(rng);
      EXPECT_NEAR(s(x), evaluate(f, x), tol);
    }
    EXPECT_NEAR(s(0.0), evaluate(f, 0.0), tol);
    EXPECT_NEAR(s(lower), evaluate(f, lower), tol);
  }
}

TEST(ChebyshevSeries, LowDegreeForPolynomialLikeFunctions) {
  // cos(tau sqrt(-x)) over a small interval is nearly linear.
  const ChebyshevSeries s = fit_chebyshev(CosSqrt{1e-4}, -1.0, 0.0);
  EXPECT_LE(s.degree(), 15);
  EXPECT_THROW(fit_chebyshev(CosSqrt{1.0}, 0.0, 0.0), ValidationError);
}

TEST(Gershgorin, BoundsTheSpectrumFromBelow) {
  std::mt19937 rng(2);
  for (int trial = 0; trial < 3; ++trial) {
    const auto op = random_operator(rng, 9, 7);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(op.dense(), Eigen::EigenvaluesOnly);
    const double bound = gershgorin_lower_bound(op.matrix());
    EXPECT_LE(bound, eig.eigenvalues().minCoeff());
    EXPECT_GE(bound, 2.0 * eig.eigenvalues().minCoeff());
  }
}

TEST(ChebyshevPropagator, MatchesSpectralPropagator) {
  std::mt19937 rng(3);
  const auto op = random_operator(rng, 12, 9);
  const auto dec = test::decompose_shared(op);
  const Eigen::MatrixXd x = Eigen::MatrixXd::Random(op.size(), 3);
  for (double tau : {0.003, 0.03, 0.1}) {
    const ChebyshevPropagator cheb(op, tau);
    const PropagatorMatrix spec(dec, tau);
    EXPECT_LE(test::relative_error(cheb.apply(x), spec.apply(x)), 1e-12) << "tau " << tau;
  }
  const ChebyshevPropagator cheb(op, 0.03);
  for (double sigma : {0.0, 1e-4, 4e-4}) {
    EXPECT_LE(test::relative_error(cheb.apply_function(ExpHalf{sigma}, x),
                                   matrix_function_apply(*dec, ExpHalf{sigma}, x)),
              1e-12);
  }
}

TEST(ChebyshevPropagator, SnapshotsAndDataMatchSpectralRoute) {
  std::mt19937 rng(4);
  const Grid2D g(14, 10, 15.0);
  const auto model = test::random_model(g, rng);
  const auto op = assemble_symmetrized_operator(model, build_laplacian(g));
  const auto dec = test::decompose_shared(op);
  const auto e = build_point_sources(g, uniform_array(g, 3, 45.0));
  const ChebyshevPropagator cheb(op, 0.02);
  const Eigen::MatrixXd bc = build_source_matrix(cheb, e, {1e-4});
  const Eigen::MatrixXd bs = build_source_matrix(*dec, e, {1e-4});
  EXPECT_LE(test::relative_error(bc, bs), 1e-12);

  const auto sc = compute_snapshots(cheb, bc, 9);
  const auto ss = compute_snapshots(PropagatorMatrix(dec, 0.02), bs, 9);
  for (std::size_t k = 0; k < 9; ++k) {
    EXPECT_LE(test::relative_error(sc.blocks[k], ss.blocks[k]), 1e-11) << "k " << k;
  }
  const auto cube_c = simulate_data(cheb, bc, 6);
  const auto cube_s = simulate_data(PropagatorMatrix(dec, 0.02), bs, 6);
  EXPECT_LE(max_relative_difference(cube_c, cube_s), 1e-11);
  const auto oracle = oracle_unsymmetrized_data(model, build_laplacian(g), e, {1e-4}, 0.02, 6);
  EXPECT_LE(max_relative_difference(oracle, cube_c), 1e-9);
}

TEST(ChebyshevPropagator, DataDrivenRomInterpolatesExactly) {
  std::mt19937 rng(5);
  const Grid2D g(40, 30, 15.0);
  const auto op =
      assemble_symmetrized_operator(test::random_model(g, rng, 1800.0, 2400.0), build_laplacian(g));
  const ChebyshevPropagator cheb(op, 0.03);
  const auto survey = uniform_array(g, 4, 150.0);
  const Eigen::MatrixXd b = build_source_matrix(cheb, build_point_sources(g, survey), {1e-4});
  const auto cube = simulate_data(cheb, b, 8);
  EXPECT_LE(interpolation_residual(rom_from_data(cube, 8), cube), 1e-8);
}

TEST(ChebyshevPropagator, BackgroundBasisAgreesAcrossBackends) {
  const Grid2D g(20, 15, 15.0);
  const auto c0 = smooth_model(make_layered_model(g, {{90.0, 2200.0}}, 1700.0), 120.0, 60.0);
  const auto survey = uniform_array(g, 3, 75.0);
  const auto a = background_basis(c0, survey, {1e-4}, 0.02, 5, 0.0, PropagatorBackend::kSpectral);
  const auto b = background_basis(c0, survey, {1e-4}, 0.02, 5, 0.0, PropagatorBackend::kChebyshev);
  EXPECT_EQ(a.chebyshev, nullptr);
  EXPECT_EQ(b.decomposition, nullptr);
  EXPECT_LE(test::relative_error(b.v, a.v), 1e-9);
  EXPECT_LE(test::relative_error(background_rom(b).op, background_rom(a).op), 1e-9);
}

TEST(ChebyshevPropagator, RejectsBadArguments) {
  std::mt19937 rng(6);
  const auto op = random_operator(rng, 4, 4);
  EXPECT_THROW(ChebyshevPropagator(op, 0.0), ValidationError);
  const ChebyshevPropagator cheb(op, 0.01);
  EXPECT_THROW(cheb.apply(Eigen::MatrixXd::Ones(3, 1)), ValidationError);
  EXPECT_THROW(compute_snapshots(cheb, Eigen::MatrixXd::Ones(16, 1), 0), ValidationError);
}
