#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

#include "mdg/linear_solver.hpp"

namespace mdg {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string problem = "convection";
  int degree = 1;
  std::string method = "tp3";
  double dt0 = 0.25;
  int levels = 5;
  /// Mesh level of a single `solve` run; the time step is dt0 / 2^level.
  int level = 0;
  /// Penalty; default_penalty(degree) when absent.
  std::optional<double> eta;
  SolverKind solver = SolverKind::gmres;
  GmresSettings gmres;
  int ilu_level = 2;
  /// Largest system the direct solver may take over after a GMRES failure.
  std::size_t fallback_limit = LinearSolverSettings{}.direct_fallback_limit;
  std::string output;

  double penalty() const;
  LinearSolverSettings solver_settings() const;
};

/// Parses `key = value` lines; `#` starts a comment. Unknown or repeated
/// keys and malformed values raise ConfigError. The result is validated.
RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::string& path);

/// Throws ConfigError unless levels >= 1, dt0 > 0, the method and problem
/// are registered, and the numeric settings are in range.
void validate(const RunConfig& cfg);

}  // namespace mdg
