#pragma once

#include <vector>

#include "mdg/mesh.hpp"

namespace mdg {

/// Quadrature on the reference triangle {(0,0),(1,0),(0,1)}.
struct TriangleQuadrature {
  std::vector<Vec2> points;
  std::vector<double> weights;
  int exactness_degree = 0;
};

/// Quadrature on the unit interval [0,1].
struct LineQuadrature {
  std::vector<double> points;
  std::vector<double> weights;
  int exactness_degree = 0;
};

inline constexpr int kMaxTriangleDegree = 30;

/// n-point Gauss-Legendre rule on [0,1], exact for degree 2n-1.
LineQuadrature gauss_legendre(int n);

/// Gauss-Legendre rule on [0,1] with ceil((min_degree+1)/2) points.
LineQuadrature edge_rule(int min_degree);

/// Collapsed-coordinate (conical product) rule exact up to at least
/// `min_degree`. Throws std::invalid_argument above kMaxTriangleDegree.
TriangleQuadrature triangle_rule(int min_degree);

}  // namespace mdg
