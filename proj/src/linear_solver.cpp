#include "mdg/linear_solver.hpp"

#include <chrono>
#include <cmath>
#include <sstream>
#include <utility>

namespace mdg {

namespace {

double relative_residual(const SparseMatrix& a, std::span<const double> b, std::span<const double> x) {
  Vector r(a.rows());
  a.multiply(x, r);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
  const double bn = norm2(b);
  return bn == 0.0 ? norm2(r) : norm2(r) / bn;
}

std::string sci(double v) {
  std::ostringstream s;
  s.precision(3);
  s << std::scientific << v;
  return s.str();
}

constexpr int kRefinementSweeps = 3;

}  // namespace

LinearSolver::LinearSolver(LinearSolverSettings settings) : settings_(std::move(settings)) {}

void LinearSolver::set_matrix(SparseMatrix a, std::vector<int> ordering) {
  if (ordering.empty()) {
    a_ = a;
  } else {
    a_ = permute_symmetric(a, ordering);
  }
  original_ = std::move(a);
  ordering_ = std::move(ordering);
  has_matrix_ = true;
  ilu_.reset();
  ilu_failed_ = false;
  direct_.reset();
}

SolveStats LinearSolver::solve_direct(std::span<const double> b, std::span<double> x, SolveStats stats) {
  const auto start = std::chrono::steady_clock::now();
  if (!direct_) direct_ = std::make_unique<DirectSolver>(a_);
  const Vector sol = direct_->solve(b);
  std::copy(sol.begin(), sol.end(), x.begin());
  stats.direct = true;
  const double tol = std::max(settings_.gmres.rtol, 1e-10);
  stats.relative_residual = relative_residual(a_, b, x);
  for (int sweep = 0; sweep < kRefinementSweeps && !(stats.relative_residual <= tol); ++sweep) {
    Vector r(a_.rows());
    a_.multiply(x, r);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
    const Vector dx = direct_->solve(r);
    for (std::size_t i = 0; i < dx.size(); ++i) x[i] += dx[i];
    stats.relative_residual = relative_residual(a_, b, x);
  }
  stats.converged = std::isfinite(stats.relative_residual) && stats.relative_residual <= tol;
  stats.wall_seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!stats.converged) {
    throw SolverError("direct solve residual " + sci(stats.relative_residual) +
                          " above tolerance",
                      stats);
  }
  return stats;
}

SolveStats LinearSolver::solve(std::span<const double> b, std::span<double> x) {
  if (!has_matrix_) throw std::logic_error("LinearSolver::solve called before set_matrix");
  if (b.size() != a_.rows() || x.size() != a_.rows()) throw std::invalid_argument("right-hand side has wrong size");
  if (ordering_.empty()) return solve_ordered(b, x);
  Vector pb(b.size()), px(x.size());
  for (std::size_t i = 0; i < b.size(); ++i) {
    pb[ordering_[i]] = b[i];
    px[ordering_[i]] = x[i];
  }
  const SolveStats stats = solve_ordered(pb, px);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = px[ordering_[i]];
  return stats;
}

SolveStats LinearSolver::solve_ordered(std::span<const double> b, std::span<double> x) {
  if (settings_.kind == SolverKind::direct) return solve_direct(b, x, {});

  const bool may_fallback = a_.rows() <= settings_.direct_fallback_limit;
  if (!ilu_ && !ilu_failed_) {
    try {
      ilu_.emplace(a_, settings_.ilu_level);
    } catch (const ZeroPivotError& e) {
      ilu_failed_ = true;
      if (!may_fallback) throw SolverError(e.what(), {});
    }
  }
  if (ilu_failed_) {
    SolveStats s;
    s.fallback = true;
    return solve_direct(b, x, s);
  }

  SolveResult r = gmres_solve(a_, b, &*ilu_, settings_.gmres, x);
  if (r.stats.converged) {
    std::copy(r.x.begin(), r.x.end(), x.begin());
    return r.stats;
  }
  if (!may_fallback) {
    throw SolverError("GMRES did not converge: " + std::to_string(r.stats.iterations) +
                          " iterations, relative residual " + sci(r.stats.relative_residual),
                      r.stats);
  }
  SolveStats s = r.stats;
  s.fallback = true;
  return solve_direct(b, x, s);
}

}  // namespace mdg
