#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mdg/config.hpp"
#include "mdg/time_stepper.hpp"

namespace mdg {

struct ConvergenceRow {
  int level = 0;
  double h = 0.0;
  double dt = 0.0;
  std::size_t ndof = 0;
  double l2_error = 0.0;
  /// log2(e_prev / e_curr); absent on the first row or after a failure.
  std::optional<double> observed_order;
  /// "ok", or a diagnostic for a failed level.
  std::string status = "ok";
  StepStatistics stats;
  double seconds = 0.0;
  double initial_norm = 0.0;
  double final_norm = 0.0;

  bool ok() const { return status == "ok"; }
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;

  bool ok() const;
  std::optional<double> final_order() const;
};

/// Solves the configured problem on mesh `level` with dt = dt0 / 2^level.
/// Solver failures and blow-up are recorded in the row's status.
ConvergenceRow run_level(const RunConfig& cfg, int level);

/// Levels 0..L-1 in order.
ConvergenceReport run_convergence(const RunConfig& cfg);

/// CSV with header `level,h,dt,ndof,l2_error,observed_order` and 17
/// significant digits; the order cell of the first row is empty.
void write_report(const ConvergenceReport& report, std::ostream& out);
void write_report(const ConvergenceReport& report, const std::string& path);
ConvergenceReport read_report(std::istream& in);

}  // namespace mdg
