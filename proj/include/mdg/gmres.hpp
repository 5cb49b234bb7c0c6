#pragma once

#include <span>
#include <vector>

#include "mdg/ilu.hpp"
#include "mdg/sparse_matrix.hpp"

namespace mdg {

struct GmresSettings {
  double rtol = 1e-10;
  int restart = 60;
  int max_iterations = 5000;
};

struct SolveStats {
  int iterations = 0;
  /// True relative residual ||b - A x|| / ||b|| of the returned solution.
  double relative_residual = 0.0;
  bool converged = false;
  double wall_seconds = 0.0;
  bool direct = false;
  /// GMRES gave up and the direct solver produced the answer.
  bool fallback = false;
  /// Arnoldi least-squares residual estimate per iteration (relative).
  std::vector<double> residual_history;
};

struct SolveResult {
  Vector x;
  SolveStats stats;
};

/// Right-preconditioned restarted GMRES(m) with modified Gram-Schmidt and
/// Givens rotations. `x0` is the initial guess (zero when empty).
SolveResult gmres_solve(const SparseMatrix& a, std::span<const double> b, const IluFactors* precond,
                        const GmresSettings& settings, std::span<const double> x0 = {});

}  // namespace mdg
