#include "mdg/basis.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mdg {

namespace {

constexpr int kTable = kMaxBasisDegree + 1;

// Q_i(x, t) = t^i P_i(x / t) and its partial derivatives, by the scaled
// Legendre recurrence.
struct ScaledLegendre {
  std::array<double, kTable> q{}, qx{}, qt{};

  ScaledLegendre(int n, double x, double t) {
    q[0] = 1.0;
    if (n >= 1) {
      q[1] = x;
      qx[1] = 1.0;
    }
    for (int i = 1; i < n; ++i) {
      const double a = 2 * i + 1;
      const double tt = t * t;
      q[i + 1] = (a * x * q[i] - i * tt * q[i - 1]) / (i + 1);
      qx[i + 1] = (a * (q[i] + x * qx[i]) - i * tt * qx[i - 1]) / (i + 1);
      qt[i + 1] = (a * x * qt[i] - i * (2.0 * t * q[i - 1] + tt * qt[i - 1])) / (i + 1);
    }
  }
};

// Jacobi P_n^{(alpha,0)}(s) and derivative for n = 0..nmax.
void jacobi(int nmax, double alpha, double s, std::span<double> p, std::span<double> dp) {
  p[0] = 1.0;
  dp[0] = 0.0;
  if (nmax == 0) return;
  p[1] = (alpha + 1.0) + 0.5 * (alpha + 2.0) * (s - 1.0);
  dp[1] = 0.5 * (alpha + 2.0);
  for (int n = 2; n <= nmax; ++n) {
    const double c = 2 * n + alpha;
    const double a1 = 2.0 * n * (n + alpha) * (c - 2.0);
    const double a2 = (c - 1.0) * alpha * alpha;
    const double a3 = (c - 1.0) * c * (c - 2.0);
    const double a4 = 2.0 * (n + alpha - 1.0) * (n - 1.0) * c;
    p[n] = ((a2 + a3 * s) * p[n - 1] - a4 * p[n - 2]) / a1;
    dp[n] = (a3 * p[n - 1] + (a2 + a3 * s) * dp[n - 1] - a4 * dp[n - 2]) / a1;
  }
}

}  // namespace

BasisSet::BasisSet(int degree) : degree_(degree) {
  if (degree < 0 || degree > kMaxBasisDegree) {
    throw std::invalid_argument("basis degree " + std::to_string(degree) + " outside [0, " +
                                std::to_string(kMaxBasisDegree) + "]");
  }
  for (int n = 0; n <= degree; ++n) {
    for (int i = n; i >= 0; --i) {
      const int j = n - i;
      modes_.emplace_back(i, j);
      scale_.push_back(std::sqrt(2.0 * (2 * i + 1) * (i + j + 1)));
    }
  }
}

void BasisSet::evaluate(Vec2 ref, std::span<double> values) const {
  const double x = 2.0 * ref.x + ref.y - 1.0;
  const double t = 1.0 - ref.y;
  const double s = 2.0 * ref.y - 1.0;
  const ScaledLegendre leg(degree_, x, t);
  std::array<double, kTable> p{}, dp{};
  int last_i = -1;
  for (std::size_t m = 0; m < modes_.size(); ++m) {
    const auto [i, j] = modes_[m];
    // Modes with equal i share a Jacobi family; recompute only on change.
    if (i != last_i) {
      jacobi(degree_ - i, 2.0 * i + 1.0, s, p, dp);
      last_i = i;
    }
    values[m] = scale_[m] * leg.q[i] * p[j];
  }
}

void BasisSet::evaluate(Vec2 ref, std::span<double> values, std::span<Vec2> gradients) const {
  const double x = 2.0 * ref.x + ref.y - 1.0;
  const double t = 1.0 - ref.y;
  const double s = 2.0 * ref.y - 1.0;
  const ScaledLegendre leg(degree_, x, t);
  std::array<double, kTable> p{}, dp{};
  int last_i = -1;
  for (std::size_t m = 0; m < modes_.size(); ++m) {
    const auto [i, j] = modes_[m];
    if (i != last_i) {
      jacobi(degree_ - i, 2.0 * i + 1.0, s, p, dp);
      last_i = i;
    }
    const double c = scale_[m];
    values[m] = c * leg.q[i] * p[j];
    // d/dxi: x_xi = 2; d/deta: x_eta = 1, t_eta = -1, s_eta = 2.
    gradients[m] = {c * 2.0 * leg.qx[i] * p[j],
                    c * ((leg.qx[i] - leg.qt[i]) * p[j] + 2.0 * leg.q[i] * dp[j])};
  }
}

std::vector<double> BasisSet::values(Vec2 ref) const {
  std::vector<double> v(modes_.size());
  evaluate(ref, v);
  return v;
}

std::vector<Vec2> BasisSet::gradients(Vec2 ref) const {
  std::vector<double> v(modes_.size());
  std::vector<Vec2> g(modes_.size());
  evaluate(ref, v, g);
  return g;
}

BasisSet make_basis(int degree) { return BasisSet(degree); }

}  // namespace mdg
