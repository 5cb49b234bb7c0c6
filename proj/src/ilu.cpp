#include "mdg/ilu.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

namespace mdg {

ZeroPivotError::ZeroPivotError(std::size_t row, double pivot)
    : std::runtime_error("ILU: zero pivot in row " + std::to_string(row) + " (" + std::to_string(pivot) + ")"),
      row_(row),
      pivot_(pivot) {}

IluFactors::IluFactors(const SparseMatrix& a, int level) : n_(a.rows()), level_(level) {
  if (a.rows() != a.cols()) throw std::invalid_argument("ILU needs a square matrix");
  if (level < 0 || level > 200) throw std::invalid_argument("ILU fill level must lie in [0, 200]");
  const auto aptr = a.row_ptr();
  const auto acol = a.col_idx();
  const auto aval = a.values();
  const int n = static_cast<int>(n_);

  // Symbolic phase: row-wise level-of-fill with a sorted linked list.
  std::vector<std::uint8_t> lev_store;  // level for every stored entry
  ptr_.assign(n_ + 1, 0);
  diag_.assign(n_, 0);
  std::vector<int> next(n_ + 1, -1);
  std::vector<int> lev(n_, -1);
  const int end = n;
  for (int i = 0; i < n; ++i) {
    int head = end;
    int tail = -1;
    bool has_diag = false;
    auto append = [&](int j, int l) {
      lev[j] = l;
      next[j] = end;
      if (tail < 0) {
        head = j;
      } else {
        next[tail] = j;
      }
      tail = j;
    };
    for (std::size_t k = aptr[i]; k < aptr[i + 1]; ++k) {
      const int j = acol[k];
      if (!has_diag && j > i) {
        append(i, 0);
        has_diag = true;
      }
      if (j == i) has_diag = true;
      append(j, 0);
    }
    if (!has_diag) append(i, 0);

    for (int k = head; k < i; k = next[k]) {
      const int lik = lev[k];
      int cursor = k;
      for (std::size_t q = diag_[k] + 1; q < ptr_[k + 1]; ++q) {
        const int j = col_[q];
        const int nl = lik + lev_store[q] + 1;
        if (nl > level) continue;
        if (lev[j] >= 0) {
          lev[j] = std::min(lev[j], nl);
          cursor = j;
          continue;
        }
        while (next[cursor] < j) cursor = next[cursor];
        next[j] = next[cursor];
        next[cursor] = j;
        lev[j] = nl;
        cursor = j;
      }
    }
    for (int j = head; j != end; j = next[j]) {
      if (j == i) diag_[i] = col_.size();
      col_.push_back(j);
      lev_store.push_back(static_cast<std::uint8_t>(lev[j]));
      lev[j] = -1;
    }
    ptr_[i + 1] = col_.size();
  }

  // Numeric phase (IKJ).
  val_.assign(col_.size(), 0.0);
  std::vector<double> w(n_, 0.0);
  std::vector<std::int64_t> pos(n_, -1);
  for (int i = 0; i < n; ++i) {
    for (std::size_t q = ptr_[i]; q < ptr_[i + 1]; ++q) {
      pos[col_[q]] = static_cast<std::int64_t>(q);
      w[col_[q]] = 0.0;
    }
    double row_max = 0.0;
    for (std::size_t k = aptr[i]; k < aptr[i + 1]; ++k) {
      w[acol[k]] = aval[k];
      row_max = std::max(row_max, std::abs(aval[k]));
    }
    for (std::size_t q = ptr_[i]; q < diag_[i]; ++q) {
      const int k = col_[q];
      const double lik = w[k] / val_[diag_[k]];
      w[k] = lik;
      for (std::size_t r = diag_[k] + 1; r < ptr_[k + 1]; ++r) {
        if (pos[col_[r]] >= 0) w[col_[r]] -= lik * val_[r];
      }
    }
    for (std::size_t q = ptr_[i]; q < ptr_[i + 1]; ++q) {
      val_[q] = w[col_[q]];
      pos[col_[q]] = -1;
    }
    const double pivot = val_[diag_[i]];
    if (!(std::abs(pivot) >= 1e-14 * row_max) || row_max == 0.0) {
      throw ZeroPivotError(static_cast<std::size_t>(i), pivot);
    }
  }
}

void IluFactors::solve(std::span<const double> rhs, std::span<double> x) const {
  const double* v = val_.data();
  const int* c = col_.data();
  for (std::size_t i = 0; i < n_; ++i) {
    double s = rhs[i];
    for (std::size_t q = ptr_[i]; q < diag_[i]; ++q) s -= v[q] * x[c[q]];
    x[i] = s;
  }
  for (std::size_t i = n_; i-- > 0;) {
    double s = x[i];
    for (std::size_t q = diag_[i] + 1; q < ptr_[i + 1]; ++q) s -= v[q] * x[c[q]];
    x[i] = s / v[diag_[i]];
  }
}

SparseMatrix IluFactors::lower() const {
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t q = ptr_[i]; q < diag_[i]; ++q) t.push_back({static_cast<int>(i), col_[q], val_[q]});
    t.push_back({static_cast<int>(i), static_cast<int>(i), 1.0});
  }
  return SparseMatrix::from_triplets(n_, n_, std::move(t));
}

SparseMatrix IluFactors::upper() const {
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t q = diag_[i]; q < ptr_[i + 1]; ++q) t.push_back({static_cast<int>(i), col_[q], val_[q]});
  }
  return SparseMatrix::from_triplets(n_, n_, std::move(t));
}

}  // namespace mdg
