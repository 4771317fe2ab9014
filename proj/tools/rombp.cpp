#include "rombp/config.hpp"
#include "rombp/error.hpp"
#include "rombp/io.hpp"
#include "rombp/pipeline.hpp"
#include "rombp/verify.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

using namespace rombp;

namespace {

struct SharedFlags {
  std::string config;
  std::string out;
  std::optional<double> tau;
  std::optional<long long> n;
  std::optional<long long> p;
  std::optional<double> alpha;
  std::optional<double> eps;
  std::optional<long long> seed;
  std::vector<std::string> set;
};

void add_shared(CLI::App* cmd, SharedFlags& f) {
  cmd->add_option("--config", f.config, "key=value configuration file");
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--tau", f.tau, "sampling interval (s)");
  cmd->add_option("--n", f.n, "number of ROM blocks");
  cmd->add_option("--p", f.p, "number of sources");
  cmd->add_option("--alpha", f.alpha, "image gain");
  cmd->add_option("--eps", f.eps, "relative Gram regularization");
  cmd->add_option("--seed", f.seed, "seed of the random preset");
  cmd->add_option("--set", f.set, "extra key=value override (repeatable)");
}

RunConfig resolve(const SharedFlags& f) {
  RunConfig cfg;
  if (!f.config.empty()) apply_settings(cfg, read_settings(f.config));
  std::vector<Setting> overrides;
  for (const auto& kv : f.set) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ValidationError("--set expects key=value, got '" + kv + "'");
    overrides.emplace_back(kv.substr(0, eq), kv.substr(eq + 1));
  }
  const auto num = [](auto v) {
    std::ostringstream s;
    s.precision(17);
    s << v;
    return s.str();
  };
  if (!f.out.empty()) overrides.emplace_back("out", f.out);
  if (f.tau) overrides.emplace_back("tau", num(*f.tau));
  if (f.n) overrides.emplace_back("n", num(*f.n));
  if (f.p) overrides.emplace_back("p", num(*f.p));
  if (f.alpha) overrides.emplace_back("alpha", num(*f.alpha));
  if (f.eps) overrides.emplace_back("eps", num(*f.eps));
  if (f.seed) overrides.emplace_back("seed", num(*f.seed));
  apply_settings(cfg, overrides);
  cfg.validate();
  return cfg;
}

void ensure_out(const RunConfig& cfg) {
  std::error_code ec;
  std::filesystem::create_directories(cfg.out, ec);
  if (ec) throw ValidationError("cannot create output directory " + cfg.out.string());
}

void advise(const RunConfig& cfg) {
  if (const auto msg = nyquist_advisory(cfg.tau, cfg.sigma)) {
    std::cerr << "warning: " << *msg << "\n";
  }
}

// Display only; files keep round-trip precision.
std::string km(double metres) {
  std::ostringstream s;
  s.precision(6);
  s << metres / 1000.0;
  return s.str();
}

int cmd_make_model(const RunConfig& cfg) {
  ensure_out(cfg);
  const PresetModels models = make_preset_models(cfg);
  io::write_grid(cfg.model_path(), models.model.grid(), models.model.c());
  std::cout << "preset " << preset_name(cfg.preset) << ", grid " << cfg.nx << " x " << cfg.nz
            << ", h " << km(cfg.h) << " km\n";
  std::cout << "model " << cfg.model_path().string() << " velocity "
            << km(models.model.c().minCoeff()) << " .. " << km(models.model.c().maxCoeff())
            << " km/s\n";
  if (models.background) {
    io::write_grid(cfg.background_path(), models.background->grid(), models.background->c());
    std::cout << "background " << cfg.background_path().string() << " velocity "
              << km(models.background->c().minCoeff()) << " .. "
              << km(models.background->c().maxCoeff()) << " km/s\n";
  }
  return 0;
}

int cmd_forward(const RunConfig& cfg) {
  const VelocityModel model = io::read_velocity_model(cfg.model_path());
  backend_for(model.grid(), cfg);
  advise(cfg);
  ensure_out(cfg);
  const ForwardRun run = run_forward(model, cfg);
  io::write_data(cfg.data_path(), run.cube);
  std::cout << "data " << cfg.data_path().string() << ": " << run.cube.sample_count()
            << " samples of " << run.cube.p() << " x " << run.cube.p() << "\n";
  std::cout << "F0 trace " << io::format_double(run.cube.samples.front().trace()) << "\n";
  std::cout << "symmetry residual " << io::format_double(run.report.max_asymmetry) << "\n";
  return 0;
}

double well_x(const RunConfig& cfg, const Grid2D& grid) {
  return cfg.well_x.value_or(grid.x(grid.nx() / 2));
}

int cmd_image(const RunConfig& cfg) {
  const DataCube cube = io::read_data(cfg.data_path());
  const VelocityModel background = io::read_velocity_model(cfg.background_path());
  advise(cfg);
  ensure_out(cfg);
  const ImageRun run = run_image(cube, background, cfg);
  const Grid2D& g = background.grid();
  io::write_grid(cfg.image_path(), g, run.image.cstar);
  io::write_grid(cfg.out / "dr.grid", g, run.image.dr);
  io::write_rom(cfg.out / "rom.txt", run.rom);
  const double x = well_x(cfg, g);
  io::write_well_log(cfg.out / "well_log.txt", extract_well_log(run.image, background, x));

  std::ostringstream report;
  report << "gram min pivot " << io::format_double(run.factor.min_pivot) << " (block "
         << run.factor.min_pivot_block + 1 << " of " << run.factor.n() << ")\n";
  report << "gram shift " << io::format_double(run.factor.shift) << "\n";
  report << "interpolation residual " << io::format_double(run.interpolation_residual) << "\n";
  report << "clamped nodes " << run.image.clamped << "\n";
  report << "max |dr| " << io::format_double(run.image.dr.cwiseAbs().maxCoeff()) << "\n";
  report << "well log x " << km(x) << " km\n";

  const auto truth_path = cfg.model_path();
  if (std::filesystem::exists(truth_path) && !cfg.interfaces.empty()) {
    const VelocityModel truth = io::read_velocity_model(truth_path);
    if (truth.grid() == g && g.nx() > 2 * kLateralMargin) {
      const LayerMetrics m = layer_metrics(truth, background, cfg.interfaces, run.image);
      report << "ghost ratio " << io::format_double(m.ghost_ratio) << "\n";
      report << "first window between fraction " << io::format_double(m.first_between_fraction)
             << "\n";
    }
  }
  std::ofstream(cfg.out / "report.txt") << report.str();
  std::cout << report.str();
  return 0;
}

int cmd_well_log(const RunConfig& cfg) {
  const VelocityModel background = io::read_velocity_model(cfg.background_path());
  const io::GridField image = io::read_grid(cfg.image_path());
  if (!(image.grid == background.grid())) {
    throw ValidationError("image and background grids differ");
  }
  ImageResult result{image.grid, Eigen::VectorXd::Zero(image.grid.size()), image.values, 0};
  ensure_out(cfg);
  const auto log = extract_well_log(result, background, well_x(cfg, image.grid));
  io::write_well_log(cfg.out / "well_log.txt", log);
  io::write_well_log(std::cout, log);
  return 0;
}

int cmd_verify(bool list, const std::vector<std::string>& checks, double perturbation) {
  if (list) {
    for (const auto& c : verify_checks()) {
      std::cout << c.name << "  tol " << c.tolerance << "  " << c.description << "\n";
    }
    return 0;
  }
  const auto results = run_verify(checks, {perturbation});
  bool ok = true;
  for (const auto& r : results) {
    char line[64];
    std::snprintf(line, sizeof line, "%.3e <= %.1e", r.value, r.info.tolerance);
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.info.name << "  " << line << "  " << r.detail
              << "\n";
    ok = ok && r.passed;
  }
  return ok ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Seismic imaging by reduced-order-model backprojection"};
  app.require_subcommand(0, 1);
  bool list_keys = false;
  app.add_flag("--list-keys", list_keys, "print the configuration keys and exit");

  SharedFlags flags;
  auto* make_model = app.add_subcommand("make-model", "write a preset velocity model");
  auto* forward = app.add_subcommand("forward", "simulate the data cube of a model");
  auto* image = app.add_subcommand("image", "image a data cube against a background model");
  auto* well_log = app.add_subcommand("well-log", "extract a vertical velocity profile");
  auto* verify = app.add_subcommand("verify", "run the built-in consistency checks");
  for (auto* cmd : {make_model, forward, image, well_log, verify}) add_shared(cmd, flags);

  bool list = false;
  std::vector<std::string> checks;
  double perturbation = 0.0;
  verify->add_flag("--list", list, "list the checks without running them");
  verify->add_option("--check", checks, "run only this check (repeatable)");
  verify->add_option("--perturb", perturbation, "relative perturbation injected into the data");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  if (list_keys) {
    for (const auto& k : config_keys()) {
      std::cout << k.key << " [" << k.unit << "] " << k.description << "\n";
    }
    return 0;
  }
  if (app.get_subcommands().empty()) {
    std::cerr << app.help();
    return 1;
  }

  try {
    if (verify->parsed()) return cmd_verify(list, checks, perturbation);
    const RunConfig cfg = resolve(flags);
    if (make_model->parsed()) return cmd_make_model(cfg);
    if (forward->parsed()) return cmd_forward(cfg);
    if (image->parsed()) return cmd_image(cfg);
    if (well_log->parsed()) return cmd_well_log(cfg);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
