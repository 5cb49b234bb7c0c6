#include "mdg/schemes.hpp"

#include <cmath>
#include <stdexcept>

#include "mdg/quadrature.hpp"

namespace mdg {

namespace {

using Poly = std::vector<Rational>;  // ascending powers

Rational factorial(int n) {
  std::int64_t f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return Rational(f);
}

Rational derivative_at(const Poly& p, int order, const Rational& x) {
  Rational sum(0);
  for (std::size_t n = static_cast<std::size_t>(order); n < p.size(); ++n) {
    Rational term = p[n] * factorial(static_cast<int>(n)) / factorial(static_cast<int>(n) - order);
    for (std::size_t e = 0; e < n - static_cast<std::size_t>(order); ++e) term *= x;
    sum += term;
  }
  return sum;
}

std::int64_t binomial(int n, int k) {
  std::int64_t b = 1;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

std::vector<double> to_doubles(const std::vector<Rational>& r) {
  std::vector<double> d;
  for (const Rational& x : r) d.push_back(to_double(x));
  return d;
}

}  // namespace

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

TwoPointScheme derive_two_point_coefficients(int k, int l) {
  if (k < 1 || k > 3 || l < 1 || l > 3) {
    throw std::invalid_argument("two-point schemes need 1 <= k, l <= 3");
  }
  const int m = k + l;
  // P(t) = t^k (t - 1)^l / m!
  Poly p(static_cast<std::size_t>(m + 1), Rational(0));
  for (int i = 0; i <= l; ++i) {
    const std::int64_t sign = (l - i) % 2 == 0 ? 1 : -1;
    p[static_cast<std::size_t>(i + k)] = Rational(sign * binomial(l, i)) / factorial(m);
  }
  TwoPointScheme s;
  s.k = k;
  s.l = l;
  s.order = m;
  s.n_derivatives = std::max(k, l);
  s.name = "tp" + std::to_string(m);
  // P^{(m)} is identically 1, so the y^{n+1} and y^n weights are already normalized.
  for (int j = 1; j <= 3; ++j) {
    const int d = m - j;
    if (d < 0) continue;
    s.alpha[j - 1] = derivative_at(p, d, Rational(1));
    s.beta[j - 1] = derivative_at(p, d, Rational(0));
  }
  return s;
}

std::vector<TwoPointScheme> builtin_two_point_schemes() {
  return {derive_two_point_coefficients(1, 2), derive_two_point_coefficients(2, 2),
          derive_two_point_coefficients(2, 3), derive_two_point_coefficients(3, 3)};
}

int MdrkTableau::explicit_stages() const {
  int count = 0;
  for (int i = 0; i < stages; ++i) {
    bool zero = true;
    for (int j = 0; j < stages; ++j) {
      if (a1[i][j] != 0.0 || (!a2.empty() && a2[i][j] != 0.0)) zero = false;
    }
    if (!zero) break;
    ++count;
  }
  return count;
}

MdrkTableau builtin_mdrk6() {
  using R = Rational;
  MdrkTableau::Exact e;
  e.c = {R(0), R(1, 2), R(1)};
  e.a1 = {{R(0), R(0), R(0)}, {R(101, 480), R(8, 30), R(55, 2400)}, {R(7, 30), R(16, 30), R(7, 30)}};
  e.a2 = {{R(0), R(0), R(0)}, {R(65, 4800), R(-25, 600), R(-25, 8000)}, {R(5, 300), R(0), R(-5, 300)}};
  e.b1 = e.a1.back();
  e.b2 = e.a2.back();

  MdrkTableau t;
  t.name = "mdrk6";
  t.order = 6;
  t.stages = 3;
  t.derivatives = 2;
  t.c = to_doubles(e.c);
  for (const auto& row : e.a1) t.a1.push_back(to_doubles(row));
  for (const auto& row : e.a2) t.a2.push_back(to_doubles(row));
  t.b1 = to_doubles(e.b1);
  t.b2 = to_doubles(e.b2);
  t.stiffly_accurate = true;
  t.exact = std::move(e);
  return t;
}

MdrkTableau collocation_tableau(const std::vector<double>& nodes, std::string name, int order) {
  const int s = static_cast<int>(nodes.size());
  MdrkTableau t;
  t.name = std::move(name);
  t.order = order;
  t.stages = s;
  t.derivatives = 1;
  t.c = nodes;
  t.a1.assign(s, std::vector<double>(s, 0.0));
  t.b1.assign(s, 0.0);
  for (int j = 0; j < s; ++j) {
    // Monomial coefficients of the Lagrange polynomial l_j.
    std::vector<double> poly{1.0};
    for (int m = 0; m < s; ++m) {
      if (m == j) continue;
      const double denom = nodes[j] - nodes[m];
      std::vector<double> next(poly.size() + 1, 0.0);
      for (std::size_t q = 0; q < poly.size(); ++q) {
        next[q + 1] += poly[q] / denom;
        next[q] -= poly[q] * nodes[m] / denom;
      }
      poly = std::move(next);
    }
    auto integral = [&poly](double upper) {
      double sum = 0.0;
      double power = upper;
      for (std::size_t q = 0; q < poly.size(); ++q) {
        sum += poly[q] * power / static_cast<double>(q + 1);
        power *= upper;
      }
      return sum;
    };
    for (int i = 0; i < s; ++i) t.a1[i][j] = integral(nodes[i]);
    t.b1[j] = integral(1.0);
  }
  t.stiffly_accurate = std::abs(nodes.back() - 1.0) < 1e-15;
  return t;
}

MdrkTableau builtin_gauss_legendre6() { return collocation_tableau(gauss_legendre(3).points, "gl6", 6); }

std::vector<std::string> method_names() { return {"tp3", "tp4", "tp5", "tp6", "mdrk6", "gl6"}; }

std::optional<Method> method_by_name(const std::string& name) {
  for (const TwoPointScheme& s : builtin_two_point_schemes()) {
    if (s.name == name) return s;
  }
  if (name == "mdrk6") return builtin_mdrk6();
  if (name == "gl6") return builtin_gauss_legendre6();
  return std::nullopt;
}

std::string method_name(const Method& m) {
  return std::visit([](const auto& x) { return x.name; }, m);
}

int method_order(const Method& m) {
  return std::visit([](const auto& x) { return x.order; }, m);
}

}  // namespace mdg
