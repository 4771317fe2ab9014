#pragma once

#include <stdexcept>
#include <string>

namespace rombp {

// Bad input, inconsistent files or configuration. CLI exit status 1.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Eigensolver or factorization breakdown. CLI exit status 2.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised by the block Cholesky factorization when a diagonal block stops
// being positive definite. `block_index` is zero-based.
class CholeskyError : public NumericalError {
 public:
  CholeskyError(int block_index, double pivot, const std::string& what)
      : NumericalError(what), block_index_(block_index), pivot_(pivot) {}

  int block_index() const noexcept { return block_index_; }
  double pivot() const noexcept { return pivot_; }

 private:
  int block_index_;
  double pivot_;
};

}  // namespace rombp
