#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace mdg {

using Vector = std::vector<double>;

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
/// y += alpha x
void axpy(double alpha, std::span<const double> x, std::span<double> y);

struct Triplet {
  int row;
  int col;
  double value;
};

/// Compressed-row matrix with strictly increasing column indices per row.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  /// Validates bounds, ordering and absence of duplicates.
  SparseMatrix(std::size_t rows, std::size_t cols, std::vector<std::size_t> row_ptr,
               std::vector<int> col_idx, std::vector<double> values);

  static SparseMatrix identity(std::size_t n);
  /// Duplicates are summed in input order.
  static SparseMatrix from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> entries);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nnz() const { return values_.size(); }

  std::span<const std::size_t> row_ptr() const { return row_ptr_; }
  std::span<const int> col_idx() const { return col_idx_; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  /// Entry (i, j), zero if structurally absent.
  double at(std::size_t i, std::size_t j) const;

  /// y = A x, row by row in storage order.
  void multiply(std::span<const double> x, std::span<double> y) const;

  /// Row-major dense copy, for small diagnostics and tests.
  std::vector<double> to_dense() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<int> col_idx_;
  std::vector<double> values_;
};

/// y = A x. Throws std::invalid_argument on dimension mismatch.
Vector spmv(const SparseMatrix& a, std::span<const double> x);

/// Block (r, c) of a block system is `identity * I + matrix * A`.
struct BlockCoefficient {
  double identity = 0.0;
  double matrix = 0.0;
};

/// Builds the square block matrix whose blocks are combinations of I and A.
/// A zero block contributes no structure; a block with a non-zero matrix
/// coefficient carries exactly the pattern of A (plus the diagonal).
SparseMatrix assemble_block_matrix(const SparseMatrix& a,
                                   const std::vector<std::vector<BlockCoefficient>>& blocks);

/// P A P^T for the permutation new_index[old] = new.
SparseMatrix permute_symmetric(const SparseMatrix& a, std::span<const int> new_index);

/// Permutation from block-major order (block b, group g, entry i) to
/// group-major order (group g, block b, entry i), where each of the
/// `blocks` blocks of length n splits into groups of `group` entries.
std::vector<int> interleave_permutation(std::size_t blocks, std::size_t n, std::size_t group);

/// Coordinate-format dump: one `row col value` line per entry, 17 digits.
void write_coordinate(std::ostream& out, const SparseMatrix& a);

}  // namespace mdg
