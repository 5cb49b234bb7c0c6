#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mdg/direct_solver.hpp"
#include "mdg/gmres.hpp"
#include "mdg/ilu.hpp"
#include "mdg/sparse_matrix.hpp"

namespace mdg {

enum class SolverKind { gmres, direct };

struct LinearSolverSettings {
  SolverKind kind = SolverKind::gmres;
  GmresSettings gmres;
  int ilu_level = 2;
  /// GMRES failures fall back to the direct solver up to this dimension.
  std::size_t direct_fallback_limit = 50000;
};

/// Raised when a linear system cannot be solved to tolerance.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, SolveStats stats)
      : std::runtime_error(what), stats_(std::move(stats)) {}
  const SolveStats& stats() const { return stats_; }

 private:
  SolveStats stats_;
};

/// Owns one system matrix and its lazily built ILU or LU factorization.
class LinearSolver {
 public:
  explicit LinearSolver(LinearSolverSettings settings = {});

  /// `ordering` (new_index[old] = new) is applied symmetrically before
  /// factorization; callers keep working in the original numbering.
  void set_matrix(SparseMatrix a, std::vector<int> ordering = {});
  bool has_matrix() const { return has_matrix_; }
  const SparseMatrix& matrix() const { return original_; }
  const LinearSolverSettings& settings() const { return settings_; }
  bool preconditioner_failed() const { return ilu_failed_; }

  /// Solves A x = b; x holds the initial guess on entry. Throws SolverError
  /// when neither GMRES nor the permitted fallback reaches the tolerance.
  SolveStats solve(std::span<const double> b, std::span<double> x);

 private:
  SolveStats solve_ordered(std::span<const double> b, std::span<double> x);
  SolveStats solve_direct(std::span<const double> b, std::span<double> x, SolveStats stats);

  LinearSolverSettings settings_;
  SparseMatrix original_;
  SparseMatrix a_;
  std::vector<int> ordering_;
  bool has_matrix_ = false;
  std::optional<IluFactors> ilu_;
  bool ilu_failed_ = false;
  std::unique_ptr<DirectSolver> direct_;
};

}  // namespace mdg
