#pragma once

#include <memory>
#include <span>
#include <stdexcept>

#include "mdg/sparse_matrix.hpp"

namespace mdg {

class SingularMatrixError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sparse LU with partial pivoting (COLAMD column ordering). Factorizes
/// once, solves many times.
class DirectSolver {
 public:
  /// Throws SingularMatrixError if the factorization detects singularity.
  explicit DirectSolver(const SparseMatrix& a);
  ~DirectSolver();
  DirectSolver(DirectSolver&&) noexcept;
  DirectSolver& operator=(DirectSolver&&) noexcept;

  Vector solve(std::span<const double> b) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

Vector lu_solve_direct(const SparseMatrix& a, std::span<const double> b);

}  // namespace mdg
