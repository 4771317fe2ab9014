#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <utility>
#include <vector>

namespace rombp {

using Index = Eigen::Index;

// Uniform 2D node grid. Nodes are numbered row-major with depth as the slow
// axis: node = iz * nx + ix.
class Grid2D {
 public:
  Grid2D(Index nx, Index nz, double h);

  Index nx() const noexcept { return nx_; }
  Index nz() const noexcept { return nz_; }
  double h() const noexcept { return h_; }
  Index size() const noexcept { return nx_ * nz_; }

  Index node(Index ix, Index iz) const noexcept { return iz * nx_ + ix; }
  Index ix(Index node) const noexcept { return node % nx_; }
  Index iz(Index node) const noexcept { return node / nx_; }

  double x(Index ix) const noexcept { return static_cast<double>(ix) * h_; }
  double depth(Index iz) const noexcept { return static_cast<double>(iz) * h_; }

  bool operator==(const Grid2D& other) const noexcept = default;

 private:
  Index nx_;
  Index nz_;
  double h_;
};

// Acoustic velocity (m/s) at every node of a grid.
class VelocityModel {
 public:
  VelocityModel(Grid2D grid, Eigen::VectorXd c);

  static VelocityModel constant(const Grid2D& grid, double velocity);

  const Grid2D& grid() const noexcept { return grid_; }
  const Eigen::VectorXd& c() const noexcept { return c_; }
  double at(Index ix, Index iz) const { return c_(grid_.node(ix, iz)); }

 private:
  Grid2D grid_;
  Eigen::VectorXd c_;
};

// 5-point Laplacian with homogeneous Dirichlet conditions on all sides
// (units 1/m^2).
struct DiscreteLaplacian {
  Grid2D grid;
  Eigen::SparseMatrix<double> matrix;
};

DiscreteLaplacian build_laplacian(const Grid2D& grid);

// The symmetrized spatial operator C * Laplacian * C (units 1/s^2). Keeps
// the velocities so the similarity transform to C^2 * Laplacian stays
// available.
class SymmetrizedOperator {
 public:
  const Grid2D& grid() const noexcept { return grid_; }
  const Eigen::VectorXd& c() const noexcept { return c_; }
  const Eigen::SparseMatrix<double>& laplacian() const noexcept { return laplacian_; }
  const Eigen::SparseMatrix<double>& matrix() const noexcept { return matrix_; }
  Eigen::VectorXd diagonal() const { return matrix_.diagonal(); }
  Eigen::MatrixXd dense() const { return Eigen::MatrixXd(matrix_); }
  Index size() const noexcept { return grid_.size(); }

 private:
  friend SymmetrizedOperator assemble_symmetrized_operator(const VelocityModel&,
                                                           const DiscreteLaplacian&);
  SymmetrizedOperator(Grid2D grid, Eigen::VectorXd c, Eigen::SparseMatrix<double> lap,
                      Eigen::SparseMatrix<double> op)
      : grid_(grid), c_(std::move(c)), laplacian_(std::move(lap)), matrix_(std::move(op)) {}

  Grid2D grid_;
  Eigen::VectorXd c_;
  Eigen::SparseMatrix<double> laplacian_;
  Eigen::SparseMatrix<double> matrix_;
};

SymmetrizedOperator assemble_symmetrized_operator(const VelocityModel& model,
                                                  const DiscreteLaplacian& lap);

struct Interface {
  double depth;     // m
  double velocity;  // m/s, velocity below the interface
};

// Piecewise constant in depth. A node lying exactly on an interface takes the
// deeper layer's velocity.
VelocityModel make_layered_model(const Grid2D& grid, const std::vector<Interface>& interfaces,
                                 double top_velocity);

// Separable Gaussian smoothing. A width is two standard deviations of the
// kernel; the kernel is cut at three standard deviations and renormalized
// near the boundary.
VelocityModel smooth_model(const VelocityModel& model, double width_x, double width_z);

}  // namespace rombp
