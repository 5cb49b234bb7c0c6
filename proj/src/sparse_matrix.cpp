#include "mdg/sparse_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <utility>

namespace mdg {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols, std::vector<std::size_t> row_ptr,
                           std::vector<int> col_idx, std::vector<double> values)
    : rows_(rows),
      cols_(cols),
      row_ptr_(std::move(row_ptr)),
      col_idx_(std::move(col_idx)),
      values_(std::move(values)) {
  if (row_ptr_.size() != rows_ + 1 || row_ptr_.front() != 0 || row_ptr_.back() != col_idx_.size() ||
      col_idx_.size() != values_.size()) {
    throw std::invalid_argument("inconsistent CSR arrays");
  }
  for (std::size_t i = 0; i < rows_; ++i) {
    if (row_ptr_[i] > row_ptr_[i + 1]) throw std::invalid_argument("CSR row pointers decrease");
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      if (col_idx_[k] < 0 || static_cast<std::size_t>(col_idx_[k]) >= cols_) {
        throw std::invalid_argument("CSR column index out of range");
      }
      if (k > row_ptr_[i] && col_idx_[k] <= col_idx_[k - 1]) {
        throw std::invalid_argument("CSR columns not strictly increasing");
      }
    }
  }
}

SparseMatrix SparseMatrix::identity(std::size_t n) {
  std::vector<std::size_t> ptr(n + 1);
  std::vector<int> col(n);
  for (std::size_t i = 0; i < n; ++i) {
    ptr[i + 1] = i + 1;
    col[i] = static_cast<int>(i);
  }
  return SparseMatrix(n, n, std::move(ptr), std::move(col), std::vector<double>(n, 1.0));
}

SparseMatrix SparseMatrix::from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> entries) {
  std::stable_sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
    return std::pair(a.row, a.col) < std::pair(b.row, b.col);
  });
  std::vector<std::size_t> ptr(rows + 1, 0);
  std::vector<int> col;
  std::vector<double> val;
  col.reserve(entries.size());
  val.reserve(entries.size());
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const Triplet& t = entries[k];
    if (t.row < 0 || static_cast<std::size_t>(t.row) >= rows) {
      throw std::invalid_argument("triplet row out of range");
    }
    if (k > 0 && entries[k - 1].row == t.row && entries[k - 1].col == t.col) {
      val.back() += t.value;
      continue;
    }
    col.push_back(t.col);
    val.push_back(t.value);
    ++ptr[t.row + 1];
  }
  for (std::size_t i = 0; i < rows; ++i) ptr[i + 1] += ptr[i];
  return SparseMatrix(rows, cols, std::move(ptr), std::move(col), std::move(val));
}

double SparseMatrix::at(std::size_t i, std::size_t j) const {
  const auto first = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i]);
  const auto last = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i + 1]);
  const auto it = std::lower_bound(first, last, static_cast<int>(j));
  if (it == last || *it != static_cast<int>(j)) return 0.0;
  return values_[static_cast<std::size_t>(it - col_idx_.begin())];
}

void SparseMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  const double* v = values_.data();
  const int* c = col_idx_.data();
  for (std::size_t i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) s += v[k] * x[c[k]];
    y[i] = s;
  }
}

std::vector<double> SparseMatrix::to_dense() const {
  std::vector<double> d(rows_ * cols_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) d[i * cols_ + col_idx_[k]] = values_[k];
  }
  return d;
}

Vector spmv(const SparseMatrix& a, std::span<const double> x) {
  if (x.size() != a.cols()) throw std::invalid_argument("spmv: dimension mismatch");
  Vector y(a.rows());
  a.multiply(x, y);
  return y;
}

SparseMatrix assemble_block_matrix(const SparseMatrix& a,
                                   const std::vector<std::vector<BlockCoefficient>>& blocks) {
  if (a.rows() != a.cols()) throw std::invalid_argument("block matrix needs a square operator");
  const std::size_t nb = blocks.size();
  const std::size_t n = a.rows();
  for (const auto& row : blocks) {
    if (row.size() != nb) throw std::invalid_argument("block coefficient grid must be square");
  }
  const auto ptr = a.row_ptr();
  const auto col = a.col_idx();
  const auto val = a.values();

  std::vector<std::size_t> out_ptr(nb * n + 1, 0);
  std::vector<int> out_col;
  std::vector<double> out_val;
  for (std::size_t br = 0; br < nb; ++br) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t bc = 0; bc < nb; ++bc) {
        const BlockCoefficient& c = blocks[br][bc];
        const int offset = static_cast<int>(bc * n);
        if (c.matrix == 0.0) {
          if (c.identity != 0.0) {
            out_col.push_back(offset + static_cast<int>(i));
            out_val.push_back(c.identity);
          }
          continue;
        }
        bool diagonal_done = c.identity == 0.0;
        for (std::size_t k = ptr[i]; k < ptr[i + 1]; ++k) {
          const std::size_t j = static_cast<std::size_t>(col[k]);
          if (!diagonal_done && j > i) {
            out_col.push_back(offset + static_cast<int>(i));
            out_val.push_back(c.identity);
            diagonal_done = true;
          }
          double v = c.matrix * val[k];
          if (!diagonal_done && j == i) {
            v += c.identity;
            diagonal_done = true;
          }
          out_col.push_back(offset + col[k]);
          out_val.push_back(v);
        }
        if (!diagonal_done) {
          out_col.push_back(offset + static_cast<int>(i));
          out_val.push_back(c.identity);
        }
      }
      out_ptr[br * n + i + 1] = out_col.size();
    }
  }
  return SparseMatrix(nb * n, nb * n, std::move(out_ptr), std::move(out_col), std::move(out_val));
}

SparseMatrix permute_symmetric(const SparseMatrix& a, std::span<const int> new_index) {
  if (a.rows() != a.cols() || new_index.size() != a.rows()) {
    throw std::invalid_argument("permutation does not match the matrix");
  }
  const std::size_t n = a.rows();
  std::vector<int> old_index(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    const int k = new_index[i];
    if (k < 0 || static_cast<std::size_t>(k) >= n || old_index[k] != -1) {
      throw std::invalid_argument("not a permutation");
    }
    old_index[k] = static_cast<int>(i);
  }
  const auto ptr = a.row_ptr();
  const auto col = a.col_idx();
  const auto val = a.values();
  std::vector<std::size_t> out_ptr(n + 1, 0);
  std::vector<int> out_col;
  std::vector<double> out_val;
  out_col.reserve(a.nnz());
  out_val.reserve(a.nnz());
  std::vector<std::pair<int, double>> row;
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t i = static_cast<std::size_t>(old_index[r]);
    row.clear();
    for (std::size_t k = ptr[i]; k < ptr[i + 1]; ++k) row.emplace_back(new_index[col[k]], val[k]);
    std::sort(row.begin(), row.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    for (const auto& [c, v] : row) {
      out_col.push_back(c);
      out_val.push_back(v);
    }
    out_ptr[r + 1] = out_col.size();
  }
  return SparseMatrix(n, n, std::move(out_ptr), std::move(out_col), std::move(out_val));
}

std::vector<int> interleave_permutation(std::size_t blocks, std::size_t n, std::size_t group) {
  if (group == 0 || n % group != 0) throw std::invalid_argument("group size must divide the block length");
  const std::size_t groups = n / group;
  std::vector<int> idx(blocks * n);
  for (std::size_t b = 0; b < blocks; ++b) {
    for (std::size_t g = 0; g < groups; ++g) {
      for (std::size_t i = 0; i < group; ++i) {
        idx[b * n + g * group + i] = static_cast<int>((g * blocks + b) * group + i);
      }
    }
  }
  return idx;
}

void write_coordinate(std::ostream& out, const SparseMatrix& a) {
  const auto old = out.precision(17);
  const auto ptr = a.row_ptr();
  const auto col = a.col_idx();
  const auto val = a.values();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = ptr[i]; k < ptr[i + 1]; ++k) out << i << ' ' << col[k] << ' ' << val[k] << '\n';
  }
  out.precision(old);
}

}  // namespace mdg
