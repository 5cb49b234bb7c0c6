#include "mdg/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <type_traits>

#include <Eigen/Dense>
#include <unsupported/Eigen/Polynomials>

namespace mdg {

namespace {

template <class T>
using Poly = std::vector<T>;

template <class T>
Poly<T> poly_add(const Poly<T>& a, const Poly<T>& b, T sb = T(1)) {
  Poly<T> r(std::max(a.size(), b.size()), T(0));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += sb * b[i];
  return r;
}

template <class T>
Poly<T> poly_mul(const Poly<T>& a, const Poly<T>& b) {
  if (a.empty() || b.empty()) return {};
  Poly<T> r(a.size() + b.size() - 1, T(0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  return r;
}

template <class T>
Poly<T> determinant(const std::vector<std::vector<Poly<T>>>& m) {
  const std::size_t n = m.size();
  if (n == 1) return m[0][0];
  Poly<T> det;
  for (std::size_t col = 0; col < n; ++col) {
    std::vector<std::vector<Poly<T>>> minor(n - 1);
    for (std::size_t r = 1; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) {
        if (c != col) minor[r - 1].push_back(m[r][c]);
      }
    }
    const T sign = (col % 2 == 0) ? T(1) : T(-1);
    det = poly_add(det, poly_mul(m[0][col], determinant(minor)), sign);
  }
  return det;
}

/// det(M) and det(M + 1 u^T) with M = I - z a1 - z^2 a2, u = z b1 + z^2 b2.
template <class T>
std::pair<Poly<T>, Poly<T>> stability_determinants(const std::vector<std::vector<T>>& a1,
                                                   const std::vector<std::vector<T>>& a2, const std::vector<T>& b1,
                                                   const std::vector<T>& b2) {
  const std::size_t s = a1.size();
  std::vector<std::vector<Poly<T>>> m(s, std::vector<Poly<T>>(s));
  std::vector<std::vector<Poly<T>>> mu(s, std::vector<Poly<T>>(s));
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t j = 0; j < s; ++j) {
      const T second = a2.empty() ? T(0) : a2[i][j];
      m[i][j] = {i == j ? T(1) : T(0), -a1[i][j], -second};
      const T ub2 = b2.empty() ? T(0) : b2[j];
      mu[i][j] = {m[i][j][0], m[i][j][1] + b1[j], m[i][j][2] + ub2};
    }
  }
  return {determinant(m), determinant(mu)};
}

template <class T>
void trim_exact(Poly<T>& p) {
  while (p.size() > 1 && p.back() == T(0)) p.pop_back();
}

void trim_real(std::vector<double>& p) {
  double scale = 0.0;
  for (double c : p) scale = std::max(scale, std::abs(c));
  while (p.size() > 1 && std::abs(p.back()) <= 1e-14 * scale) p.pop_back();
}

Complex horner(const std::vector<double>& c, Complex z) {
  Complex r = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * z + *it;
  return r;
}

Rational factorial(int n) {
  std::int64_t f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return Rational(f);
}

}  // namespace

Complex RationalFunction::operator()(Complex z) const { return horner(numerator, z) / horner(denominator, z); }

int RationalFunction::numerator_degree() const { return static_cast<int>(numerator.size()) - 1; }
int RationalFunction::denominator_degree() const { return static_cast<int>(denominator.size()) - 1; }

double RationalFunction::limit_at_minus_infinity() const {
  const int dn = numerator_degree();
  const int dd = denominator_degree();
  if (dn < dd) return 0.0;
  if (dn > dd) return std::numeric_limits<double>::infinity();
  if (exact) return std::abs(to_double(exact->numerator.back() / exact->denominator.back()));
  return std::abs(numerator.back() / denominator.back());
}

RationalFunction make_rational_function(std::vector<Rational> numerator, std::vector<Rational> denominator) {
  if (denominator.empty() || denominator[0] == Rational(0)) throw std::invalid_argument("denominator must satisfy D(0) != 0");
  if (numerator.empty()) numerator.push_back(0);
  const Rational d0 = denominator[0];
  for (auto& c : numerator) c /= d0;
  for (auto& c : denominator) c /= d0;
  trim_exact(numerator);
  trim_exact(denominator);
  RationalFunction r;
  for (const auto& c : numerator) r.numerator.push_back(to_double(c));
  for (const auto& c : denominator) r.denominator.push_back(to_double(c));
  r.exact = RationalFunction::ExactCoefficients{std::move(numerator), std::move(denominator)};
  return r;
}

RationalFunction stability_function_two_point(const TwoPointScheme& scheme) {
  std::vector<Rational> num{1}, den{1};
  for (int j = 0; j < 3; ++j) {
    num.push_back(scheme.alpha[j]);
    den.push_back(scheme.beta[j]);
  }
  return make_rational_function(std::move(num), std::move(den));
}

SingularStageMatrix::SingularStageMatrix(Complex z)
    : std::domain_error("singular stage matrix at z = (" + std::to_string(z.real()) + ", " +
                        std::to_string(z.imag()) + ")"),
      z_(z) {}

Complex stability_function_mdrk(const MdrkTableau& tab, Complex z) {
  const int s = tab.stages;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(s, s);
  Eigen::VectorXcd u(s);
  for (int i = 0; i < s; ++i) {
    for (int j = 0; j < s; ++j) {
      m(i, j) -= z * tab.a1[i][j];
      if (!tab.a2.empty()) m(i, j) -= z * z * tab.a2[i][j];
    }
    u(i) = z * tab.b1[i] + (tab.b2.empty() ? Complex(0.0) : z * z * tab.b2[i]);
  }
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(m);
  if (!lu.isInvertible()) throw SingularStageMatrix(z);
  const Eigen::VectorXcd x = lu.solve(Eigen::VectorXcd::Ones(s));
  // With b equal to the last rows, 1 + u^T x reduces to x_s without the
  // cancellation that the general form suffers at large |z|.
  if (tab.stiffly_accurate) return x(s - 1);
  return 1.0 + (u.transpose() * x)(0);
}

RationalFunction stability_polynomials_mdrk(const MdrkTableau& tab) {
  if (tab.exact) {
    const auto& e = *tab.exact;
    auto [den, num] = stability_determinants<Rational>(e.a1, e.a2, e.b1, e.b2);
    return make_rational_function(std::move(num), std::move(den));
  }
  auto [den, num] = stability_determinants<double>(tab.a1, tab.a2, tab.b1, tab.b2);
  const double d0 = den[0];
  for (auto& c : num) c /= d0;
  for (auto& c : den) c /= d0;
  trim_real(num);
  trim_real(den);
  return RationalFunction{std::move(num), std::move(den), std::nullopt};
}

RationalFunction stability_rational_function(const Method& method) {
  if (const auto* s = std::get_if<TwoPointScheme>(&method)) return stability_function_two_point(*s);
  return stability_polynomials_mdrk(std::get<MdrkTableau>(method));
}

RationalFunction pade_exponential(int k, int l) {
  if (k < 0 || l < 0 || k + l > 20) throw std::invalid_argument("Pade degrees out of range");
  std::vector<Rational> num, den;
  const Rational total = factorial(k + l);
  for (int j = 0; j <= k; ++j) {
    num.push_back(factorial(k + l - j) * factorial(k) / (total * factorial(j) * factorial(k - j)));
  }
  for (int j = 0; j <= l; ++j) {
    const Rational c = factorial(k + l - j) * factorial(l) / (total * factorial(j) * factorial(l - j));
    den.push_back(j % 2 == 0 ? c : -c);
  }
  return make_rational_function(std::move(num), std::move(den));
}

int taylor_agreement_order(const RationalFunction& r, int max_order) {
  if (!r.exact) throw std::invalid_argument("Taylor agreement needs exact coefficients");
  if (max_order < 0 || max_order > 20) throw std::invalid_argument("max_order out of range");
  const auto& n = r.exact->numerator;
  const auto& d = r.exact->denominator;
  std::vector<Rational> series;
  for (int j = 0; j <= max_order; ++j) {
    Rational c = j < static_cast<int>(n.size()) ? n[j] : Rational(0);
    for (int i = 1; i <= j && i < static_cast<int>(d.size()); ++i) c -= d[i] * series[j - i];
    c /= d[0];
    series.push_back(c);
    if (c != Rational(1) / factorial(j)) return j - 1;
  }
  return max_order;
}

std::vector<Complex> polynomial_roots(const std::vector<double>& coefficients) {
  std::vector<double> c = coefficients;
  trim_real(c);
  const int degree = static_cast<int>(c.size()) - 1;
  if (degree <= 0) return {};
  if (degree == 1) return {Complex(-c[0] / c[1], 0.0)};
  Eigen::VectorXd v(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) v(static_cast<Eigen::Index>(i)) = c[i];
  Eigen::PolynomialSolver<double, Eigen::Dynamic> solver;
  solver.compute(v);
  const auto& roots = solver.roots();
  return std::vector<Complex>(roots.data(), roots.data() + roots.size());
}

bool poles_in_right_half_plane(const RationalFunction& r) {
  const auto roots = polynomial_roots(r.denominator);
  return std::all_of(roots.begin(), roots.end(), [](Complex z) { return z.real() > 0.0; });
}

std::vector<double> log_space(double lo, double hi, int n) {
  if (!(lo > 0.0) || !(hi >= lo) || n < 2) throw std::invalid_argument("invalid logarithmic range");
  std::vector<double> v(n);
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  for (int i = 0; i < n; ++i) v[i] = std::pow(10.0, a + (b - a) * i / (n - 1));
  v.front() = lo;
  v.back() = hi;
  return v;
}

StabilityReport a_stability_scan(const Method& method, const ScanGrid& grid) {
  StabilityReport rep;
  rep.method = method_name(method);
  const RationalFunction rf = stability_rational_function(method);
  const auto* tab = std::get_if<MdrkTableau>(&method);

  auto eval = [&](Complex z, double& max) {
    ++rep.samples;
    double v;
    if (tab) {
      try {
        v = std::abs(stability_function_mdrk(*tab, z));
      } catch (const SingularStageMatrix&) {
        ++rep.skipped;
        return;
      }
    } else {
      v = std::abs(rf(z));
    }
    if (!std::isfinite(v)) v = std::numeric_limits<double>::infinity();
    max = std::max(max, v);
  };

  const auto ys = log_space(grid.imag_min, grid.imag_max, grid.imag_points);
  eval(Complex(0.0, 0.0), rep.max_abs_imag_axis);
  for (double y : ys) {
    eval(Complex(0.0, y), rep.max_abs_imag_axis);
    eval(Complex(0.0, -y), rep.max_abs_imag_axis);
  }
  const auto xs = log_space(grid.real_min, grid.real_max, grid.real_points);
  const auto lys = log_space(grid.imag_min, grid.imag_max, grid.lattice_imag_points);
  for (double x : xs) {
    eval(Complex(-x, 0.0), rep.max_abs_left_half);
    for (double y : lys) {
      eval(Complex(-x, y), rep.max_abs_left_half);
      eval(Complex(-x, -y), rep.max_abs_left_half);
    }
  }
  rep.limit_at_minus_inf = rf.limit_at_minus_infinity();
  rep.poles_ok = poles_in_right_half_plane(rf);
  rep.a_stable = rep.max_abs_imag_axis <= 1.0 + kAStabilityTolerance &&
                 rep.max_abs_left_half <= 1.0 + kAStabilityTolerance;
  return rep;
}

void write_stability_csv_header(std::ostream& out) {
  out << "method,max_abs_R_imag_axis,max_abs_R_left_half,limit_at_minus_inf,a_stable\n";
}

void write_stability_csv_row(std::ostream& out, const StabilityReport& r) {
  const auto old = out.precision(17);
  out << r.method << ',' << r.max_abs_imag_axis << ',' << r.max_abs_left_half << ',' << r.limit_at_minus_inf << ','
      << (r.a_stable ? "true" : "false") << '\n';
  out.precision(old);
}

}  // namespace mdg
