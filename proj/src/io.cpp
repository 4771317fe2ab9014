#include "rombp/io.hpp"

#include "rombp/error.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace rombp::io {

namespace {

constexpr const char* kGridMagic = "rombp-grid v1";
constexpr const char* kDataMagic = "rombp-data v1";
constexpr const char* kRomMagic = "rombp-rom v1";

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open " + path.string() + " for writing");
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path.string() + " for reading");
  return in;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw ValidationError("failed writing " + path.string());
}

void expect_magic(std::istream& in, const char* magic) {
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("empty file, expected '" +
                                                     std::string(magic) + "'");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != magic) {
    throw ValidationError("bad header '" + line + "', expected '" + magic + "'");
  }
}

double read_double(std::istream& in, const char* what) {
  std::string token;
  if (!(in >> token)) throw ValidationError(std::string("unexpected end of file reading ") + what);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size() || !std::isfinite(value)) {
    throw ValidationError("invalid number '" + token + "' in " + what);
  }
  return value;
}

Index read_index(std::istream& in, const char* what) {
  std::string token;
  if (!(in >> token)) throw ValidationError(std::string("unexpected end of file reading ") + what);
  long long value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw ValidationError("invalid integer '" + token + "' in " + what);
  }
  return static_cast<Index>(value);
}

void write_rows(std::ostream& out, const Eigen::MatrixXd& m) {
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) {
      if (c > 0) out << ' ';
      out << format_double(m(r, c));
    }
    out << '\n';
  }
}

Eigen::MatrixXd read_rows(std::istream& in, Index rows, Index cols, const char* what) {
  Eigen::MatrixXd m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) m(r, c) = read_double(in, what);
  }
  return m;
}

void expect_end(std::istream& in, const char* what) {
  std::string extra;
  if (in >> extra) throw ValidationError(std::string("trailing data after ") + what);
}

}  // namespace

std::string format_double(double value) {
  char buf[32];
  const int len = std::snprintf(buf, sizeof buf, "%.17g", value);
  return std::string(buf, static_cast<std::size_t>(len));
}

void write_grid(std::ostream& out, const Grid2D& grid, const Eigen::VectorXd& values) {
  if (values.size() != grid.size()) throw ValidationError("grid field size mismatch");
  out << kGridMagic << '\n' << grid.nx() << ' ' << grid.nz() << ' ' << format_double(grid.h())
      << '\n';
  for (Index iz = 0; iz < grid.nz(); ++iz) {
    for (Index ix = 0; ix < grid.nx(); ++ix) {
      if (ix > 0) out << ' ';
      out << format_double(values(grid.node(ix, iz)));
    }
    out << '\n';
  }
}

void write_grid(const std::filesystem::path& path, const Grid2D& grid,
                const Eigen::VectorXd& values) {
  auto out = open_out(path);
  write_grid(out, grid, values);
  finish(out, path);
}

GridField read_grid(std::istream& in) {
  expect_magic(in, kGridMagic);
  const Index nx = read_index(in, "grid header");
  const Index nz = read_index(in, "grid header");
  const double h = read_double(in, "grid header");
  const Grid2D grid(nx, nz, h);
  Eigen::VectorXd values(grid.size());
  for (Index i = 0; i < grid.size(); ++i) values(i) = read_double(in, "grid values");
  expect_end(in, "grid values");
  return {grid, std::move(values)};
}

GridField read_grid(const std::filesystem::path& path) {
  auto in = open_in(path);
  try {
    return read_grid(in);
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

VelocityModel read_velocity_model(const std::filesystem::path& path) {
  GridField field = read_grid(path);
  try {
    return VelocityModel(field.grid, std::move(field.values));
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

void write_data(std::ostream& out, const DataCube& cube) {
  cube.validate();
  out << kDataMagic << '\n'
      << cube.p() << ' ' << cube.sample_count() << ' ' << format_double(cube.tau) << '\n';
  for (const auto& f : cube.samples) write_rows(out, f);
}

void write_data(const std::filesystem::path& path, const DataCube& cube) {
  auto out = open_out(path);
  write_data(out, cube);
  finish(out, path);
}

DataCube read_data(std::istream& in) {
  expect_magic(in, kDataMagic);
  const Index p = read_index(in, "data header");
  const Index n2 = read_index(in, "data header");
  DataCube cube;
  cube.tau = read_double(in, "data header");
  if (p < 1 || n2 < 1) throw ValidationError("data header needs p >= 1 and n2 >= 1");
  for (Index k = 0; k < n2; ++k) cube.samples.push_back(read_rows(in, p, p, "data samples"));
  expect_end(in, "data samples");
  cube.validate();
  return cube;
}

DataCube read_data(const std::filesystem::path& path) {
  auto in = open_in(path);
  try {
    return read_data(in);
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

void write_rom(std::ostream& out, const Rom& rom) {
  out << kRomMagic << '\n' << rom.p << ' ' << rom.n << ' ' << format_double(rom.tau) << '\n';
  write_rows(out, rom.propagator);
  write_rows(out, rom.source);
  write_rows(out, rom.op);
}

void write_rom(const std::filesystem::path& path, const Rom& rom) {
  auto out = open_out(path);
  write_rom(out, rom);
  finish(out, path);
}

Rom read_rom(std::istream& in) {
  expect_magic(in, kRomMagic);
  Rom rom;
  rom.p = read_index(in, "ROM header");
  rom.n = read_index(in, "ROM header");
  rom.tau = read_double(in, "ROM header");
  if (rom.p < 1 || rom.n < 1) throw ValidationError("ROM header needs p >= 1 and n >= 1");
  const Index size = rom.p * rom.n;
  rom.propagator = read_rows(in, size, size, "ROM propagator");
  rom.source = read_rows(in, size, rom.p, "ROM source");
  rom.op = read_rows(in, size, size, "ROM operator");
  expect_end(in, "ROM operator");
  return rom;
}

Rom read_rom(const std::filesystem::path& path) {
  auto in = open_in(path);
  try {
    return read_rom(in);
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

void write_well_log(std::ostream& out, const std::vector<WellLogSample>& log) {
  out << "# depth_km c0_km_per_s cstar_km_per_s\n";
  for (const auto& s : log) {
    out << format_double(s.depth / 1000.0) << ' ' << format_double(s.c0 / 1000.0) << ' '
        << format_double(s.cstar / 1000.0) << '\n';
  }
}

void write_well_log(const std::filesystem::path& path, const std::vector<WellLogSample>& log) {
  auto out = open_out(path);
  write_well_log(out, log);
  finish(out, path);
}

}  // namespace rombp::io
