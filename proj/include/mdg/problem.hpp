#pragma once

#include <functional>
#include <optional>
#include <string>

#include "mdg/mesh.hpp"

namespace mdg {

using SpaceFunction = std::function<double(double x, double y)>;
using SpaceTimeFunction = std::function<double(double x, double y, double t)>;

/// Linear convection-diffusion problem  w_t + div(c w - eps grad w) = g
/// on the periodic unit square. Empty source functions mean g = 0.
struct Problem {
  std::string name;
  Vec2 velocity;
  double diffusion = 0.0;
  SpaceTimeFunction source;
  SpaceTimeFunction source_t;
  SpaceTimeFunction source_tt;
  SpaceFunction initial;
  SpaceTimeFunction exact;
  double t_end = 1.0;

  bool has_source() const { return static_cast<bool>(source); }
  /// d-th time derivative of g; returns 0 for a source-free problem.
  double source_derivative(int derivative, double x, double y, double t) const;
};

/// c = (1,1), eps = 0, w0 = sin(2 pi x) sin(2 pi y), T_end = 1.
Problem problem_convection();

/// c = (1,1), eps = 0.1, manufactured solution
/// u = exp(-t) sin(2 pi (x - t)) sin(2 pi (y - t)), T_end = 1.
Problem problem_convection_diffusion(double diffusion = 0.1);

/// Lookup by name ("convection", "convection_diffusion").
std::optional<Problem> problem_by_name(const std::string& name);

}  // namespace mdg
