#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>

#include "mdg/linear_solver.hpp"
#include "mdg/schemes.hpp"
#include "mdg/semi_discrete.hpp"
#include "mdg/sparse_matrix.hpp"

namespace mdg {

/// Accumulated solver statistics over the steps of one stepper.
struct StepStatistics {
  int steps = 0;
  int factorizations = 0;
  long total_iterations = 0;
  int max_iterations = 0;
  double max_relative_residual = 0.0;
  int fallbacks = 0;
  int direct_solves = 0;
  double solve_seconds = 0.0;
};

class BlowUpError : public std::runtime_error {
 public:
  BlowUpError(int step, double time);
  int step() const { return step_; }
  double time() const { return time_; }

 private:
  int step_;
  double time_;
};

/// One implicit step of a two-point or multiderivative Runge-Kutta method
/// applied to dw/dt = A w + b(t), written as a block system in the state
/// and its auxiliary time-derivative variables so that only A (never A^2)
/// appears. The auxiliaries are scaled by powers of dt, which keeps every
/// block of the form I + dt A:
///
///   two-point  [w; dt sigma; dt^2 tau]
///              w + dt A (b1 w + b2 dt sigma + b3 dt^2 tau) = rhs
///              -dt A w + dt sigma = dt b(t+dt),  -dt A (dt sigma) + dt^2 tau = dt^2 b'(t+dt)
///   MDRK       stage-major [y_i; dt sigma_i] for every implicit stage i.
///
/// The block matrix is rebuilt (and its preconditioner refactored) only
/// when dt changes.
class TimeStepper {
 public:
  TimeStepper(const SemiDiscreteSystem& system, Method method, LinearSolverSettings settings = {});

  /// Advances w from t to t + dt.
  Vector step(std::span<const double> w, double t, double dt);

  const Method& method() const { return method_; }
  const StepStatistics& statistics() const { return stats_; }
  const SolveStats& last_solve() const { return last_; }
  /// Block system of the most recent dt; empty before the first step.
  const SparseMatrix& block_matrix() const { return solver_.matrix(); }
  /// Full solution of the last block system, in the scaled unknowns above.
  const Vector& last_block_solution() const { return solution_; }
  /// Number of N-sized unknown blocks in the coupled system.
  int block_count() const;

 private:
  void prepare(double dt);
  Vector step_two_point(const TwoPointScheme& s, std::span<const double> w, double t, double dt);
  Vector step_mdrk(const MdrkTableau& tab, std::span<const double> w, double t, double dt);
  void record(const SolveStats& s);

  const SemiDiscreteSystem& system_;
  Method method_;
  LinearSolver solver_;
  double prepared_dt_ = -1.0;
  StepStatistics stats_;
  SolveStats last_;
  Vector solution_;
};

Vector two_point_step(const SemiDiscreteSystem& system, const TwoPointScheme& scheme, std::span<const double> w,
                      double t, double dt, const LinearSolverSettings& settings = {});
Vector mdrk_step(const SemiDiscreteSystem& system, const MdrkTableau& tableau, std::span<const double> w, double t,
                 double dt, const LinearSolverSettings& settings = {});

struct IntegrationResult {
  Vector w;
  int steps = 0;
  StepStatistics stats;
};

/// Steps from t0 to t_end; the last step is shortened to land on t_end.
/// Throws BlowUpError on a non-finite state and SolverError on solver failure.
IntegrationResult integrate(const SemiDiscreteSystem& system, const Method& method, std::span<const double> w0,
                            double t0, double t_end, double dt, const LinearSolverSettings& settings = {});

}  // namespace mdg
