#include "mdg/problem.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mdg {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

double Problem::source_derivative(int derivative, double x, double y, double t) const {
  switch (derivative) {
    case 0:
      return source ? source(x, y, t) : 0.0;
    case 1:
      return source_t ? source_t(x, y, t) : 0.0;
    case 2:
      return source_tt ? source_tt(x, y, t) : 0.0;
    default:
      throw std::invalid_argument("source derivative must be 0, 1 or 2");
  }
}

Problem problem_convection() {
  Problem p;
  p.name = "convection";
  p.velocity = {1.0, 1.0};
  p.diffusion = 0.0;
  p.initial = [](double x, double y) { return std::sin(kTwoPi * x) * std::sin(kTwoPi * y); };
  p.exact = [](double x, double y, double t) {
    return std::sin(kTwoPi * (x - t)) * std::sin(kTwoPi * (y - t));
  };
  p.t_end = 1.0;
  return p;
}

Problem problem_convection_diffusion(double diffusion) {
  // u_t + c.grad u = -u and Laplace u = -8 pi^2 u, hence g = (8 pi^2 eps - 1) u.
  Problem p;
  p.name = "convection_diffusion";
  p.velocity = {1.0, 1.0};
  p.diffusion = diffusion;
  const double k = 8.0 * std::numbers::pi * std::numbers::pi * diffusion - 1.0;
  auto u = [](double x, double y, double t) {
    return std::exp(-t) * std::sin(kTwoPi * (x - t)) * std::sin(kTwoPi * (y - t));
  };
  // u = e^{-t} S with S = sin a sin b, a = 2pi(x-t), b = 2pi(y-t):
  // S_t = -2pi sin(a+b), S_tt = 8pi^2 cos(a+b).
  auto u_t = [](double x, double y, double t) {
    const double a = kTwoPi * (x - t);
    const double b = kTwoPi * (y - t);
    const double s = std::sin(a) * std::sin(b);
    const double st = -kTwoPi * std::sin(a + b);
    return std::exp(-t) * (st - s);
  };
  auto u_tt = [](double x, double y, double t) {
    const double a = kTwoPi * (x - t);
    const double b = kTwoPi * (y - t);
    const double s = std::sin(a) * std::sin(b);
    const double st = -kTwoPi * std::sin(a + b);
    const double stt = 2.0 * kTwoPi * kTwoPi * std::cos(a + b);
    return std::exp(-t) * (stt - 2.0 * st + s);
  };
  p.initial = [u](double x, double y) { return u(x, y, 0.0); };
  p.exact = u;
  p.source = [u, k](double x, double y, double t) { return k * u(x, y, t); };
  p.source_t = [u_t, k](double x, double y, double t) { return k * u_t(x, y, t); };
  p.source_tt = [u_tt, k](double x, double y, double t) { return k * u_tt(x, y, t); };
  p.t_end = 1.0;
  return p;
}

std::optional<Problem> problem_by_name(const std::string& name) {
  if (name == "convection") return problem_convection();
  if (name == "convection_diffusion") return problem_convection_diffusion();
  return std::nullopt;
}

}  // namespace mdg
