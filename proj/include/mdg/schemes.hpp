#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <boost/rational.hpp>

namespace mdg {

using Rational = boost::rational<std::int64_t>;

std::string to_string(const Rational& r);
inline double to_double(const Rational& r) { return boost::rational_cast<double>(r); }

/// Two-point multiderivative scheme
///   (y1 - y0)/dt = sum_j dt^{j-1} (alpha_j d^j y0 - beta_j d^j y1),
/// derived from P(t) = t^k (t-1)^l / (k+l)!.
struct TwoPointScheme {
  std::string name;
  int order = 0;
  int k = 0;
  int l = 0;
  std::array<Rational, 3> alpha{};
  std::array<Rational, 3> beta{};
  /// Highest time derivative of y used (max(k, l)).
  int n_derivatives = 0;

  double alpha_d(int j) const { return to_double(alpha[j]); }
  double beta_d(int j) const { return to_double(beta[j]); }
};

/// alpha_j = P^{(k+l-j)}(1), beta_j = P^{(k+l-j)}(0), exact rationals.
/// Throws std::invalid_argument unless 1 <= k, l <= 3.
TwoPointScheme derive_two_point_coefficients(int k, int l);

/// Orders 3..6: (k, l) = (1,2), (2,2), (2,3), (3,3).
std::vector<TwoPointScheme> builtin_two_point_schemes();

/// Multiderivative Runge-Kutta tableau with M <= 2 derivatives.
struct MdrkTableau {
  std::string name;
  int order = 0;
  int stages = 0;
  int derivatives = 1;
  std::vector<double> c;
  std::vector<std::vector<double>> a1;
  std::vector<std::vector<double>> a2;
  std::vector<double> b1;
  std::vector<double> b2;
  /// c_s = 1 and b^(m) equal the last rows of a^(m): y^{n+1} = y_(s).
  bool stiffly_accurate = false;

  /// Exact coefficients where the tableau has rational entries.
  struct Exact {
    std::vector<Rational> c;
    std::vector<std::vector<Rational>> a1, a2;
    std::vector<Rational> b1, b2;
  };
  std::optional<Exact> exact;

  /// Number of leading stages with an all-zero row (explicit, y_(i) = y^n).
  int explicit_stages() const;
};

/// Three-stage two-derivative collocation method at c = (0, 1/2, 1),
/// sixth order, with stiffly accurate update weights.
MdrkTableau builtin_mdrk6();

/// Collocation Runge-Kutta tableau on the given abscissae.
MdrkTableau collocation_tableau(const std::vector<double>& nodes, std::string name, int order);

/// Three-stage Gauss-Legendre method, order 6.
MdrkTableau builtin_gauss_legendre6();

using Method = std::variant<TwoPointScheme, MdrkTableau>;

/// Registered names: tp3, tp4, tp5, tp6, mdrk6, gl6.
std::optional<Method> method_by_name(const std::string& name);
std::vector<std::string> method_names();
std::string method_name(const Method& m);
int method_order(const Method& m);

}  // namespace mdg
