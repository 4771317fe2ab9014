#include "rombp/error.hpp"
#include "rombp/rom.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>

using namespace rombp;

namespace {

DataCube toy_cube() {
  const auto dec = test::decompose_shared(test::toy_operator());
  return simulate_data(PropagatorMatrix(dec, 1.0), test::toy_source(), 2);
}

// A small random medium whose snapshots are formed explicitly for the
// oracle comparisons.
struct ExplicitCase {
  std::shared_ptr<const SpectralDecomposition> dec;
  Eigen::MatrixXd b;
  Eigen::MatrixXd u;
  Eigen::MatrixXd p_dense;
  DataCube cube;
  Index n;
  Index p;
};

ExplicitCase explicit_case(unsigned seed, Index n = 4, Index p = 2, double tau = 0.004) {
  std::mt19937 rng(seed);
  const Grid2D g(8, 6, 15.0);
  const auto op =
      assemble_symmetrized_operator(test::random_model(g, rng), build_laplacian(g));
  ExplicitCase ec;
  ec.dec = test::decompose_shared(op);
  ec.n = n;
  ec.p = p;
  ec.b = build_source_matrix(*ec.dec, build_point_sources(g, uniform_array(g, p, 30.0)),
                             {1e-6});
  const PropagatorMatrix prop(ec.dec, tau);
  ec.u = compute_snapshots(prop, ec.b, n).assembled();
  ec.p_dense = prop.dense();
  ec.cube = simulate_data(prop, ec.b, n);
  return ec;
}

}  // namespace

TEST(Gram, LeadingBlockIsFirstSample) {
  const auto ec = explicit_case(1);
  const Eigen::MatrixXd m = gram_from_data(ec.cube);
  EXPECT_EQ(m.topLeftCorner(ec.p, ec.p), ec.cube.samples[0]);
}

TEST(Gram, ToyClosedForm) {
  const Eigen::MatrixXd m = gram_from_data(toy_cube());
  const double c1 = std::cos(1.0);
  const double c2 = std::cos(2.0);
  // u_0 = [1; 1] / sqrt(2), u_1 = [cos 1; cos 2] / sqrt(2).
  EXPECT_NEAR(m(0, 0), 1.0, 1e-14);
  EXPECT_NEAR(m(0, 1), 0.5 * (c1 + c2), 1e-14);
  EXPECT_NEAR(m(1, 1), 0.5 * (c1 * c1 + c2 * c2), 1e-14);
  EXPECT_NEAR(m(0, 1), 0.0621, 5e-5);
  EXPECT_NEAR(m(1, 1), 0.2326, 5e-5);
}

TEST(Gram, MatchesExplicitSnapshotInnerProducts) {
  for (unsigned seed : {2u, 3u, 4u}) {
    const auto ec = explicit_case(seed);
    const Eigen::MatrixXd m = gram_from_data(ec.cube);
    const Eigen::MatrixXd oracle = ec.u.transpose() * ec.u;
    EXPECT_LE(test::relative_error(m, oracle), 1e-10);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m, Eigen::EigenvaluesOnly);
    EXPECT_GE(eig.eigenvalues().minCoeff(), -1e-10 * m.norm());
  }
}

TEST(Gram, RejectsShortCubes) {
  const auto cube = toy_cube();
  EXPECT_THROW(gram_from_data(cube, 3), ValidationError);
  EXPECT_THROW(stiffness_from_data(cube, 3), ValidationError);
  EXPECT_NO_THROW(gram_from_data(cube, 2));
}

TEST(Stiffness, LeadingBlockIsSecondSample) {
  const auto ec = explicit_case(5);
  const Eigen::MatrixXd mp = stiffness_from_data(ec.cube);
  EXPECT_LE((mp.topLeftCorner(ec.p, ec.p) - ec.cube.samples[1]).norm(), 1e-15);
}

TEST(Stiffness, ToyClosedForm) {
  const Eigen::MatrixXd mp = stiffness_from_data(toy_cube());
  const double c1 = std::cos(1.0);
  const double c2 = std::cos(2.0);
  EXPECT_NEAR(mp(0, 1), 0.5 * (c1 * c1 + c2 * c2), 1e-14);
  EXPECT_NEAR(mp(1, 1), 0.5 * (c1 * c1 * c1 + c2 * c2 * c2), 1e-14);
  EXPECT_NEAR(mp(0, 1), 0.2326, 5e-5);
  EXPECT_NEAR(mp(1, 1), 0.0428, 5e-5);
}

TEST(Stiffness, MatchesExplicitProjection) {
  for (unsigned seed : {6u, 7u}) {
    const auto ec = explicit_case(seed);
    const Eigen::MatrixXd mp = stiffness_from_data(ec.cube);
    const Eigen::MatrixXd oracle = ec.u.transpose() * ec.p_dense * ec.u;
    EXPECT_LE(test::relative_error(mp, oracle), 1e-10);
    EXPECT_EQ(mp, mp.transpose());
  }
}

TEST(BlockCholesky, IdentityFactorsToIdentity) {
  for (Index p : {1, 2, 3}) {
    const auto f = block_cholesky(Eigen::MatrixXd::Identity(6, 6), p);
    EXPECT_EQ(f.l, Eigen::MatrixXd::Identity(6, 6));
    EXPECT_EQ(f.min_pivot, 1.0);
  }
}

TEST(BlockCholesky, ToyHandFactor) {
  const auto f = block_cholesky(gram_from_data(toy_cube()), 1);
  const double c1 = std::cos(1.0);
  const double c2 = std::cos(2.0);
  const double m12 = 0.5 * (c1 + c2);
  const double m22 = 0.5 * (c1 * c1 + c2 * c2);
  EXPECT_NEAR(f.l(0, 0), 1.0, 1e-14);
  EXPECT_NEAR(f.l(1, 0), m12, 1e-14);
  EXPECT_NEAR(f.l(1, 1), std::sqrt(m22 - m12 * m12), 1e-14);
  EXPECT_EQ(f.l(0, 1), 0.0);
  EXPECT_NEAR(f.l(1, 1), 0.4782, 5e-5);
}

TEST(BlockCholesky, ReconstructsWithZeroUpperBlocksAndPositiveDiagonal) {
  std::mt19937 rng(8);
  for (Index p : {1, 2, 4}) {
    const Index size = 4 * p;
    const Eigen::MatrixXd x = Eigen::MatrixXd::Random(size + 3, size);
    const Eigen::MatrixXd m = x.transpose() * x;
    const auto f = block_cholesky(m, p);
    EXPECT_LE(test::relative_error(f.l * f.l.transpose(), m), 1e-9);
    EXPECT_TRUE((f.l.diagonal().array() > 0.0).all());
    EXPECT_EQ(f.l.triangularView<Eigen::StrictlyUpper>().toDenseMatrix().norm(), 0.0);
    // Unique convention: agrees with the scalar Cholesky factor.
    const Eigen::MatrixXd llt = m.llt().matrixL();
    EXPECT_LE(test::relative_error(f.l, llt), 1e-10);
  }
}

TEST(BlockCholesky, RankDeficientScalarMediumFailsAtSecondBlock) {
  const auto dec = test::decompose_shared(Eigen::MatrixXd::Constant(1, 1, -3.0));
  const auto cube = simulate_data(PropagatorMatrix(dec, 0.7), Eigen::MatrixXd::Ones(1, 1), 2);
  try {
    block_cholesky(gram_from_data(cube), 1);
    FAIL() << "expected a Cholesky failure";
  } catch (const CholeskyError& e) {
    EXPECT_EQ(e.block_index(), 1);
    EXPECT_NE(std::string(e.what()).find("non-positive pivot"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("block 2"), std::string::npos);
  }
}

TEST(BlockCholesky, RegularizationShiftRescuesRankDeficiency) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Ones(2, 2);
  EXPECT_THROW(block_cholesky(m, 1), CholeskyError);
  const auto f = block_cholesky(m, 1, 1e-3);
  EXPECT_DOUBLE_EQ(f.shift, 1e-3);
  Eigen::MatrixXd shifted = m;
  shifted.diagonal().array() += 1e-3;
  EXPECT_LE(test::relative_error(f.l * f.l.transpose(), shifted), 1e-12);
}

TEST(BlockCholesky, ValidatesShape) {
  EXPECT_THROW(block_cholesky(Eigen::MatrixXd::Identity(5, 5), 2), ValidationError);
  EXPECT_THROW(block_cholesky(Eigen::MatrixXd::Identity(4, 4), 2, -1.0), ValidationError);
}

TEST(AssembleRom, ToyFullRankReproducesAllSamples) {
  const auto cube = toy_cube();
  const Rom rom = rom_from_data(cube, 2);
  const auto g = rom_data_samples(rom, 3);
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(g[k](0, 0), cube.samples[k](0, 0), 1e-12);
  EXPECT_NEAR(rom.source(0, 0), 1.0, 1e-14);
  EXPECT_NEAR(rom.source(1, 0), 0.0, 1e-14);
}

TEST(AssembleRom, SourceIsLeadingFactorBlockTransposed) {
  const auto ec = explicit_case(9, 5, 3);
  BlockCholeskyFactor f;
  const Rom rom = rom_from_data(ec.cube, ec.n, 0.0, &f);
  Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(ec.n * ec.p, ec.p);
  expected.topRows(ec.p) = f.l.topLeftCorner(ec.p, ec.p).transpose();
  EXPECT_LE((rom.source - expected).norm(), 1e-9 * expected.norm());
}

TEST(AssembleRom, MatchesExplicitProjectionOntoOrthonormalBasis) {
  for (unsigned seed : {10u, 11u}) {
    const auto ec = explicit_case(seed);
    BlockCholeskyFactor f;
    const Rom rom = rom_from_data(ec.cube, ec.n, 0.0, &f);
    const Eigen::MatrixXd v = solve_right_transpose(f, ec.u);
    const Index size = ec.n * ec.p;
    EXPECT_LE((v.transpose() * v - Eigen::MatrixXd::Identity(size, size)).norm(), 1e-9);
    EXPECT_LE(test::relative_error(rom.propagator, v.transpose() * ec.p_dense * v), 1e-9);
    EXPECT_LE(test::relative_error(rom.source, v.transpose() * ec.b), 1e-9);
    EXPECT_EQ(rom.propagator, rom.propagator.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(rom.propagator, Eigen::EigenvaluesOnly);
    EXPECT_LE(eig.eigenvalues().cwiseAbs().maxCoeff(), 1.0 + 1e-8);
  }
}

TEST(AssembleRom, OperatorIsTaylorInverseOfPropagator) {
  const auto ec = explicit_case(12);
  const Rom rom = rom_from_data(ec.cube, ec.n);
  const double tau = ec.cube.tau;
  const Index size = ec.n * ec.p;
  const Eigen::MatrixXd expected =
      (2.0 / (tau * tau)) * (rom.propagator - Eigen::MatrixXd::Identity(size, size));
  EXPECT_LE((rom.op - expected).norm(), 1e-12 * expected.norm());
}

TEST(AssembleRom, ScalingDataLeavesPropagatorInvariant) {
  const auto ec = explicit_case(13);
  DataCube scaled = ec.cube;
  for (auto& f : scaled.samples) f *= 4.0;
  const Rom rom = rom_from_data(ec.cube, ec.n);
  const Rom rom4 = rom_from_data(scaled, ec.n);
  EXPECT_LE(test::relative_error(rom4.propagator, rom.propagator), 1e-9);
  EXPECT_LE(test::relative_error(rom4.source, 2.0 * rom.source), 1e-9);
}

TEST(AssembleRom, SizeMismatchThrows) {
  const auto f = block_cholesky(Eigen::MatrixXd::Identity(4, 4), 2);
  EXPECT_THROW(assemble_rom(f, Eigen::MatrixXd::Identity(2, 2), Eigen::MatrixXd::Identity(4, 4),
                            1.0),
               ValidationError);
}

TEST(RomSamples, LeadingSampleIsFirstDatum) {
  const auto ec = explicit_case(14);
  const Rom rom = rom_from_data(ec.cube, ec.n);
  const auto g = rom_data_samples(rom, 0);
  ASSERT_EQ(g.size(), 1u);
  EXPECT_LE(test::relative_error(g[0], ec.cube.samples[0]), 1e-12);
}

TEST(RomSamples, DeskScaleGridInterpolatesAllSamples) {
  const Grid2D g(40, 30, 15.0);
  const auto model = make_layered_model(g, {{225.0, 2500.0}}, 1500.0);
  const auto dec = test::decompose_shared(
      assemble_symmetrized_operator(model, build_laplacian(g)));
  const auto b =
      build_source_matrix(*dec, build_point_sources(g, uniform_array(g, 4, 150.0)), {1e-4});
  const auto cube = simulate_data(PropagatorMatrix(dec, 0.03), b, 8);
  const Rom rom = rom_from_data(cube, 8);
  EXPECT_LE(interpolation_residual(rom, cube), 1e-8);
}
