#include "rombp/config.hpp"
#include "rombp/io.hpp"
#include "rombp/pipeline.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using namespace rombp;

namespace {

struct Outcome {
  int status = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / ("rombp_cli_" + std::string(info->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  Outcome run(const std::string& args) const {
    const fs::path out = dir_ / "stdout.txt";
    const fs::path err = dir_ / "stderr.txt";
    const std::string cmd = std::string(ROMBP_CLI) + " " + args + " >" + out.string() + " 2>" +
                            err.string();
    const int raw = std::system(cmd.c_str());
    Outcome o;
    o.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    o.out = slurp(out);
    o.err = slurp(err);
    return o;
  }

  fs::path dir_;
};

const char* kSmallGrid = "--set nx=20 --set nz=12 --set spacing=45 --set interfaces=60:2000,120:2400";

}  // namespace

TEST_F(Cli, NoSubcommandPrintsHelpAndFails) {
  const Outcome o = run("");
  EXPECT_EQ(o.status, 1);
  EXPECT_NE(o.err.find("make-model"), std::string::npos);
}

TEST_F(Cli, UnknownOptionIsAUsageError) {
  EXPECT_EQ(run("forward --bogus 1").status, 1);
}

TEST_F(Cli, ListKeysShowsUnits) {
  const Outcome o = run("--list-keys");
  EXPECT_EQ(o.status, 0);
  EXPECT_NE(o.out.find("tau [s]"), std::string::npos);
  EXPECT_NE(o.out.find("max_nodes"), std::string::npos);
}

TEST_F(Cli, MakeModelMatchesLibraryPreset) {
  const Outcome o = run("make-model --out " + dir_.string() + " " + kSmallGrid);
  ASSERT_EQ(o.status, 0) << o.err;
  EXPECT_NE(o.out.find("km/s"), std::string::npos);

  RunConfig cfg;
  cfg.nx = 20;
  cfg.nz = 12;
  cfg.interfaces = {{60.0, 2000.0}, {120.0, 2400.0}};
  const PresetModels expected = make_preset_models(cfg);
  const VelocityModel model = io::read_velocity_model(dir_ / "model.grid");
  const VelocityModel background = io::read_velocity_model(dir_ / "background.grid");
  EXPECT_EQ(model.c(), expected.model.c());
  EXPECT_EQ(background.c(), expected.background->c());
}

TEST_F(Cli, ConfigFileAndFlagsCompose) {
  std::ofstream(dir_ / "run.cfg") << "# small run\nnx = 20\nnz = 12\npreset = constant\n";
  const Outcome o =
      run("make-model --config " + (dir_ / "run.cfg").string() + " --out " + dir_.string());
  ASSERT_EQ(o.status, 0) << o.err;
  const io::GridField g = io::read_grid(dir_ / "model.grid");
  EXPECT_EQ(g.grid.nx(), 20);
  EXPECT_EQ(g.grid.nz(), 12);
  EXPECT_EQ(g.values.minCoeff(), 1500.0);
  EXPECT_EQ(g.values.maxCoeff(), 1500.0);
}

TEST_F(Cli, UnknownConfigKeyIsRejected) {
  const Outcome o = run("make-model --out " + dir_.string() + " --set colour=blue");
  EXPECT_EQ(o.status, 1);
  EXPECT_NE(o.err.find("colour"), std::string::npos);
}

TEST_F(Cli, ForwardIsBitReproducible) {
  const std::string common = std::string(" --set p=3 --n 4 ") + kSmallGrid;
  ASSERT_EQ(run("make-model --out " + dir_.string() + common).status, 0);
  fs::create_directories(dir_ / "a");
  fs::create_directories(dir_ / "b");
  const std::string model = " --set model=" + (dir_ / "model.grid").string();
  ASSERT_EQ(run("forward --out " + (dir_ / "a").string() + model + common).status, 0);
  ASSERT_EQ(run("forward --out " + (dir_ / "b").string() + model + common).status, 0);
  const std::string a = slurp(dir_ / "a" / "data.txt");
  EXPECT_FALSE(a.empty());
  EXPECT_EQ(a, slurp(dir_ / "b" / "data.txt"));
  EXPECT_EQ(io::read_data(dir_ / "a" / "data.txt").sample_count(), 8u);
}

TEST_F(Cli, MissingModelNamesThePath) {
  const Outcome o = run("forward --out " + dir_.string());
  EXPECT_EQ(o.status, 1);
  EXPECT_NE(o.err.find((dir_ / "model.grid").string()), std::string::npos);
}

TEST_F(Cli, SpectralPathRefusesGridsAboveTheCap) {
  const std::string grid = " --set nx=150 --set nz=140 --set preset=constant";
  ASSERT_EQ(run("make-model --out " + dir_.string() + grid).status, 0);
  const Outcome o = run("forward --out " + dir_.string() + grid + " --set propagator=spectral");
  EXPECT_EQ(o.status, 1);
  EXPECT_NE(o.err.find("21000"), std::string::npos);
  EXPECT_NE(o.err.find("20000"), std::string::npos);
}

TEST_F(Cli, SmallestGridRunsAndSmallerIsRejected) {
  const std::string grid = " --set nx=3 --set nz=3 --set preset=constant --p 1 --n 1";
  ASSERT_EQ(run("make-model --out " + dir_.string() + grid).status, 0);
  EXPECT_EQ(run("forward --out " + dir_.string() + grid).status, 0);
  EXPECT_EQ(run("make-model --out " + dir_.string() + " --set nx=2 --set nz=3").status, 1);
}

TEST_F(Cli, NyquistAdvisoryWarnsButProceeds) {
  const std::string common = std::string(" --set p=2 --n 2 ") + kSmallGrid;
  ASSERT_EQ(run("make-model --out " + dir_.string() + common).status, 0);
  const Outcome o = run("forward --out " + dir_.string() + common + " --tau 0.05");
  EXPECT_EQ(o.status, 0) << o.err;
  EXPECT_NE(o.err.find("warning"), std::string::npos);
  EXPECT_EQ(run("forward --out " + dir_.string() + common + " --tau 0.03").err, "");
}

TEST_F(Cli, CholeskyFailureExitsWithNumericalCode) {
  // A centred source on 3x3 only reaches a three-dimensional subspace.
  const std::string grid = " --set nx=3 --set nz=3 --set preset=constant --p 1 --n 4";
  ASSERT_EQ(run("make-model --out " + dir_.string() + grid).status, 0);
  ASSERT_EQ(run("forward --out " + dir_.string() + grid).status, 0);
  const Outcome o = run("image --out " + dir_.string() + grid);
  EXPECT_EQ(o.status, 2);
  EXPECT_NE(o.err.find("block"), std::string::npos);
  EXPECT_NE(o.err.find("Nyquist"), std::string::npos);
}

TEST_F(Cli, MatchingBackgroundImagesToItself) {
  const std::string common = " --set nx=16 --set nz=10 --set preset=constant --p 3 --n 5 "
                             "--set spacing=60 --tau 0.01";
  ASSERT_EQ(run("make-model --out " + dir_.string() + common).status, 0);
  ASSERT_EQ(run("forward --out " + dir_.string() + common).status, 0);
  const Outcome o = run("image --out " + dir_.string() + common);
  ASSERT_EQ(o.status, 0) << o.err;
  EXPECT_NE(o.out.find("interpolation residual"), std::string::npos);
  const io::GridField image = io::read_grid(dir_ / "image.grid");
  const io::GridField background = io::read_grid(dir_ / "background.grid");
  const double err = ((image.values - background.values).cwiseAbs().cwiseQuotient(
                          background.values)).maxCoeff();
  EXPECT_LE(err, 1e-8);
  EXPECT_TRUE(fs::exists(dir_ / "rom.txt"));
  EXPECT_TRUE(fs::exists(dir_ / "report.txt"));

  const Outcome log = run("well-log --out " + dir_.string() + common);
  ASSERT_EQ(log.status, 0) << log.err;
  EXPECT_EQ(log.out.rfind("# depth_km", 0), 0u);
}

TEST_F(Cli, TwoLayerImageReportsLayerMetrics) {
  const std::string common = std::string(" --set p=4 --n 6 ") + kSmallGrid + " --set nx=40";
  ASSERT_EQ(run("make-model --out " + dir_.string() + common).status, 0);
  ASSERT_EQ(run("forward --out " + dir_.string() + common).status, 0);
  const Outcome o = run("image --out " + dir_.string() + common);
  ASSERT_EQ(o.status, 0) << o.err;
  EXPECT_NE(o.out.find("ghost ratio"), std::string::npos);
  EXPECT_NE(o.out.find("first window between fraction"), std::string::npos);
}

TEST_F(Cli, ImageRejectsMismatchedSourceCount) {
  const std::string common = std::string(" --n 3 ") + kSmallGrid;
  ASSERT_EQ(run("make-model --out " + dir_.string() + common + " --p 3").status, 0);
  ASSERT_EQ(run("forward --out " + dir_.string() + common + " --p 3").status, 0);
  EXPECT_EQ(run("image --out " + dir_.string() + common + " --p 4").status, 1);
}

TEST_F(Cli, VerifyListsChecks) {
  const Outcome o = run("verify --list");
  EXPECT_EQ(o.status, 0);
  for (const char* name : {"closed-form-toy", "data-equivalence", "interpolation",
                           "two-route-rom", "nonlinearity", "full-rank-recovery"}) {
    EXPECT_NE(o.out.find(name), std::string::npos) << name;
  }
}

TEST_F(Cli, VerifyPassingChecks) {
  const Outcome o = run("verify --check closed-form-toy --check interpolation "
                        "--check two-route-rom --check nonlinearity --check data-equivalence");
  EXPECT_EQ(o.status, 0) << o.out;
  EXPECT_EQ(o.out.find("FAIL"), std::string::npos) << o.out;
}

TEST_F(Cli, VerifyNegativeControlFails) {
  const Outcome o = run("verify --check interpolation --perturb 1e-3");
  EXPECT_EQ(o.status, 2);
  EXPECT_EQ(o.out.rfind("FAIL interpolation", 0), 0u) << o.out;
}

TEST_F(Cli, VerifyUnknownCheckIsAValidationError) {
  const Outcome o = run("verify --check nope");
  EXPECT_EQ(o.status, 1);
  EXPECT_NE(o.err.find("nope"), std::string::npos);
}
