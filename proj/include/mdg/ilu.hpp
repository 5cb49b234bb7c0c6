#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "mdg/sparse_matrix.hpp"

namespace mdg {

class ZeroPivotError : public std::runtime_error {
 public:
  ZeroPivotError(std::size_t row, double pivot);
  std::size_t row() const { return row_; }
  double pivot() const { return pivot_; }

 private:
  std::size_t row_;
  double pivot_;
};

/// Incomplete LU factorization on the level-of-fill pattern ILU(k).
/// L has a unit diagonal (not stored); L and U share one CSR array.
class IluFactors {
 public:
  /// Throws ZeroPivotError when |u_ii| < 1e-14 max_j |a_ij|.
  IluFactors(const SparseMatrix& a, int level);

  int level() const { return level_; }
  std::size_t size() const { return n_; }
  std::size_t nnz() const { return val_.size(); }

  /// x = (LU)^{-1} rhs; rhs and x may not alias.
  void solve(std::span<const double> rhs, std::span<double> x) const;

  /// Explicit factors, L with its unit diagonal.
  SparseMatrix lower() const;
  SparseMatrix upper() const;

 private:
  std::size_t n_ = 0;
  int level_ = 0;
  std::vector<std::size_t> ptr_;
  std::vector<int> col_;
  std::vector<double> val_;
  std::vector<std::size_t> diag_;
};

inline IluFactors ilu_factor(const SparseMatrix& a, int level) { return IluFactors(a, level); }

}  // namespace mdg
