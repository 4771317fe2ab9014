#include "rombp/grid.hpp"

#include "rombp/error.hpp"

#include <cmath>
#include <string>

namespace rombp {

Grid2D::Grid2D(Index nx, Index nz, double h) : nx_(nx), nz_(nz), h_(h) {
  if (nx < 3 || nz < 3) {
    throw ValidationError("grid must be at least 3x3, got " + std::to_string(nx) + "x" +
                          std::to_string(nz));
  }
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw ValidationError("grid spacing must be positive and finite");
  }
}

VelocityModel::VelocityModel(Grid2D grid, Eigen::VectorXd c) : grid_(grid), c_(std::move(c)) {
  if (c_.size() != grid_.size()) {
    throw ValidationError("velocity vector has " + std::to_string(c_.size()) +
                          " entries, grid has " + std::to_string(grid_.size()) + " nodes");
  }
  for (Index i = 0; i < c_.size(); ++i) {
    if (!std::isfinite(c_(i)) || !(c_(i) > 0.0)) {
      throw ValidationError("velocity at node " + std::to_string(i) +
                            " is not finite and positive");
    }
  }
}

VelocityModel VelocityModel::constant(const Grid2D& grid, double velocity) {
  return VelocityModel(grid, Eigen::VectorXd::Constant(grid.size(), velocity));
}

DiscreteLaplacian build_laplacian(const Grid2D& grid) {
  const double inv_h2 = 1.0 / (grid.h() * grid.h());
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(static_cast<std::size_t>(5 * grid.size()));
  for (Index iz = 0; iz < grid.nz(); ++iz) {
    for (Index ix = 0; ix < grid.nx(); ++ix) {
      const Index row = grid.node(ix, iz);
      entries.emplace_back(row, row, -4.0 * inv_h2);
      if (ix > 0) entries.emplace_back(row, grid.node(ix - 1, iz), inv_h2);
      if (ix + 1 < grid.nx()) entries.emplace_back(row, grid.node(ix + 1, iz), inv_h2);
      if (iz > 0) entries.emplace_back(row, grid.node(ix, iz - 1), inv_h2);
      if (iz + 1 < grid.nz()) entries.emplace_back(row, grid.node(ix, iz + 1), inv_h2);
    }
  }
  Eigen::SparseMatrix<double> m(grid.size(), grid.size());
  m.setFromTriplets(entries.begin(), entries.end());
  return {grid, std::move(m)};
}

SymmetrizedOperator assemble_symmetrized_operator(const VelocityModel& model,
                                                  const DiscreteLaplacian& lap) {
  if (!(model.grid() == lap.grid) || lap.matrix.rows() != model.grid().size()) {
    throw ValidationError("velocity model and Laplacian are defined on different grids");
  }
  const Eigen::VectorXd& c = model.c();
  Eigen::SparseMatrix<double> op = lap.matrix;
  for (Index col = 0; col < op.outerSize(); ++col) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(op, col); it; ++it) {
      it.valueRef() = c(it.row()) * it.value() * c(it.col());
    }
  }
  return SymmetrizedOperator(model.grid(), c, lap.matrix, std::move(op));
}

VelocityModel make_layered_model(const Grid2D& grid, const std::vector<Interface>& interfaces,
                                 double top_velocity) {
  if (!(top_velocity > 0.0)) throw ValidationError("top velocity must be positive");
  const double max_depth = grid.depth(grid.nz() - 1);
  double previous = -1.0;
  for (const auto& layer : interfaces) {
    if (layer.depth < 0.0 || layer.depth > max_depth) {
      throw ValidationError("interface depth " + std::to_string(layer.depth) +
                            " m is outside the grid");
    }
    if (layer.depth <= previous) {
      throw ValidationError("interface depths must be strictly increasing");
    }
    if (!(layer.velocity > 0.0)) throw ValidationError("layer velocity must be positive");
    previous = layer.depth;
  }

  Eigen::VectorXd c(grid.size());
  for (Index iz = 0; iz < grid.nz(); ++iz) {
    const double z = grid.depth(iz);
    double v = top_velocity;
    for (const auto& layer : interfaces) {
      if (z >= layer.depth) v = layer.velocity;
    }
    c.segment(iz * grid.nx(), grid.nx()).setConstant(v);
  }
  return VelocityModel(grid, std::move(c));
}

namespace {

std::vector<double> gaussian_taps(double width, double h) {
  const double sd = 0.5 * width / h;  // nodes
  const auto radius = static_cast<Index>(std::floor(3.0 * sd));
  std::vector<double> taps(static_cast<std::size_t>(2 * radius + 1));
  for (Index k = -radius; k <= radius; ++k) {
    const double u = static_cast<double>(k) / sd;
    taps[static_cast<std::size_t>(k + radius)] = radius == 0 ? 1.0 : std::exp(-0.5 * u * u);
  }
  return taps;
}

// Convolves along one axis; `stride` is 1 for x and nx for z.
Eigen::VectorXd convolve_axis(const Eigen::VectorXd& in, const Grid2D& grid,
                              const std::vector<double>& taps, bool along_x) {
  const auto radius = static_cast<Index>(taps.size() / 2);
  if (radius == 0) return in;
  Eigen::VectorXd out(in.size());
  const Index len = along_x ? grid.nx() : grid.nz();
  for (Index iz = 0; iz < grid.nz(); ++iz) {
    for (Index ix = 0; ix < grid.nx(); ++ix) {
      const Index pos = along_x ? ix : iz;
      double acc = 0.0;
      double weight = 0.0;
      for (Index k = -radius; k <= radius; ++k) {
        const Index q = pos + k;
        if (q < 0 || q >= len) continue;
        const double w = taps[static_cast<std::size_t>(k + radius)];
        acc += w * in(along_x ? grid.node(q, iz) : grid.node(ix, q));
        weight += w;
      }
      out(grid.node(ix, iz)) = acc / weight;
    }
  }
  return out;
}

}  // namespace

VelocityModel smooth_model(const VelocityModel& model, double width_x, double width_z) {
  if (width_x < 0.0 || width_z < 0.0) throw ValidationError("smoothing widths must be >= 0");
  const Grid2D& grid = model.grid();
  Eigen::VectorXd c = model.c();
  if (width_x > 0.0) c = convolve_axis(c, grid, gaussian_taps(width_x, grid.h()), true);
  if (width_z > 0.0) c = convolve_axis(c, grid, gaussian_taps(width_z, grid.h()), false);
  return VelocityModel(grid, std::move(c));
}

}  // namespace rombp
