#pragma once

#include "rombp/grid.hpp"
#include "rombp/imaging.hpp"
#include "rombp/rom.hpp"
#include "rombp/survey.hpp"

#include <Eigen/Dense>

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace rombp::io {

// All numeric fields are written with 17 significant digits so that
// write -> read -> write reproduces the same bytes.
std::string format_double(double value);

// rombp-grid v1
//   nx nz h
//   nz lines of nx velocities, depth increasing by line
void write_grid(std::ostream& out, const Grid2D& grid, const Eigen::VectorXd& values);
void write_grid(const std::filesystem::path& path, const Grid2D& grid,
                const Eigen::VectorXd& values);
struct GridField {
  Grid2D grid;
  Eigen::VectorXd values;
};
// Values may be any finite numbers; VelocityModel enforces positivity.
GridField read_grid(std::istream& in);
GridField read_grid(const std::filesystem::path& path);
VelocityModel read_velocity_model(const std::filesystem::path& path);

// rombp-data v1
//   p n2 tau
//   for k = 0..n2-1: p lines of p values (row-major F_k)
void write_data(std::ostream& out, const DataCube& cube);
void write_data(const std::filesystem::path& path, const DataCube& cube);
DataCube read_data(std::istream& in);
DataCube read_data(const std::filesystem::path& path);

// rombp-rom v1
//   p n tau
//   propagator (np rows), source (np rows of p), operator (np rows)
void write_rom(std::ostream& out, const Rom& rom);
void write_rom(const std::filesystem::path& path, const Rom& rom);
Rom read_rom(std::istream& in);
Rom read_rom(const std::filesystem::path& path);

// Three columns in km and km/s (depth, c0, c*), preceded by a '#' header line.
void write_well_log(std::ostream& out, const std::vector<WellLogSample>& log);
void write_well_log(const std::filesystem::path& path, const std::vector<WellLogSample>& log);

}  // namespace rombp::io
