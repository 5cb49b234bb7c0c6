#include "mdg/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace mdg {

LineQuadrature gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("Gauss-Legendre rule needs at least one point");
  LineQuadrature rule;
  rule.points.resize(n);
  rule.weights.resize(n);
  rule.exactness_degree = 2 * n - 1;
  // Newton iteration on P_n over [-1,1], then shift to [0,1].
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.points[i] = 0.5 * (1.0 - x);
    rule.points[n - 1 - i] = 0.5 * (1.0 + x);
    rule.weights[i] = 0.5 * w;
    rule.weights[n - 1 - i] = 0.5 * w;
  }
  if (n % 2 == 1) rule.points[n / 2] = 0.5;
  return rule;
}

LineQuadrature edge_rule(int min_degree) {
  if (min_degree < 0) throw std::invalid_argument("quadrature degree must be non-negative");
  return gauss_legendre((min_degree + 2) / 2);
}

TriangleQuadrature triangle_rule(int min_degree) {
  if (min_degree < 0) throw std::invalid_argument("quadrature degree must be non-negative");
  if (min_degree > kMaxTriangleDegree) {
    throw std::invalid_argument("triangle quadrature of degree " + std::to_string(min_degree) +
                                " is not supported (max " + std::to_string(kMaxTriangleDegree) + ")");
  }
  // Under xi = u (1 - v), eta = v a degree-d polynomial becomes degree d in u
  // and degree d + 1 in v (including the Jacobian 1 - v).
  const int n = (min_degree + 3) / 2;
  const LineQuadrature g = gauss_legendre(n);
  TriangleQuadrature rule;
  rule.exactness_degree = 2 * n - 2;
  rule.points.reserve(n * n);
  rule.weights.reserve(n * n);
  for (int j = 0; j < n; ++j) {
    const double v = g.points[j];
    for (int i = 0; i < n; ++i) {
      const double u = g.points[i];
      rule.points.push_back({u * (1.0 - v), v});
      rule.weights.push_back(g.weights[i] * g.weights[j] * (1.0 - v));
    }
  }
  return rule;
}

}  // namespace mdg
