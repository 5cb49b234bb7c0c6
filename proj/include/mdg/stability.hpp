#pragma once

#include <complex>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mdg/schemes.hpp"

namespace mdg {

using Complex = std::complex<double>;

/// R(z) = N(z) / D(z), ascending coefficients, D(0) = 1.
struct RationalFunction {
  std::vector<double> numerator;
  std::vector<double> denominator;

  struct ExactCoefficients {
    std::vector<Rational> numerator;
    std::vector<Rational> denominator;
  };
  /// Present when the function was built in exact arithmetic.
  std::optional<ExactCoefficients> exact;

  Complex operator()(Complex z) const;
  int numerator_degree() const;
  int denominator_degree() const;
  /// |R(z)| as z -> -infinity from the leading coefficients (inf if unbounded).
  double limit_at_minus_infinity() const;
};

RationalFunction make_rational_function(std::vector<Rational> numerator, std::vector<Rational> denominator);

/// (1 + a1 z + a2 z^2 + a3 z^3) / (1 + b1 z + b2 z^2 + b3 z^3).
RationalFunction stability_function_two_point(const TwoPointScheme& scheme);

class SingularStageMatrix : public std::domain_error {
 public:
  explicit SingularStageMatrix(Complex z);
  Complex z() const { return z_; }

 private:
  Complex z_;
};

/// R(z) = 1 + (z b1 + z^2 b2)^T (I - z a1 - z^2 a2)^{-1} 1 by a dense
/// complex solve. Throws SingularStageMatrix when the stage matrix is singular.
Complex stability_function_mdrk(const MdrkTableau& tableau, Complex z);

/// R as a rational function, from R = det(M + 1 u^T) / det(M) with
/// M = I - z a1 - z^2 a2 and u = z b1 + z^2 b2. Exact when the tableau is.
RationalFunction stability_polynomials_mdrk(const MdrkTableau& tableau);

RationalFunction stability_rational_function(const Method& method);

/// Pade approximant of e^z with numerator degree k and denominator degree l.
RationalFunction pade_exponential(int k, int l);

/// Largest m such that the Maclaurin coefficients of R match 1/j! for all
/// j <= m (exact arithmetic, checked up to max_order). Requires exact data.
int taylor_agreement_order(const RationalFunction& r, int max_order = 12);

/// Roots of a real polynomial with ascending coefficients.
std::vector<Complex> polynomial_roots(const std::vector<double>& coefficients);

/// True when every root of the denominator has positive real part.
bool poles_in_right_half_plane(const RationalFunction& r);

struct ScanGrid {
  double imag_min = 1e-3;
  double imag_max = 1e6;
  int imag_points = 400;
  double real_min = 1e-3;
  double real_max = 1e4;
  int real_points = 100;
  int lattice_imag_points = 100;
};

/// Logarithmically spaced values lo..hi inclusive.
std::vector<double> log_space(double lo, double hi, int n);

struct StabilityReport {
  std::string method;
  double max_abs_imag_axis = 0.0;
  double max_abs_left_half = 0.0;
  double limit_at_minus_inf = 0.0;
  bool poles_ok = false;
  bool a_stable = false;
  int samples = 0;
  int skipped = 0;
};

inline constexpr double kAStabilityTolerance = 1e-12;

/// Samples |R| on z = +-iy (y on the log grid, plus 0) and on the lattice
/// -x + {0, +-iy} with x on the real log grid. a_stable holds iff both
/// sampled maxima are <= 1 + 1e-12.
StabilityReport a_stability_scan(const Method& method, const ScanGrid& grid = {});

void write_stability_csv_header(std::ostream& out);
void write_stability_csv_row(std::ostream& out, const StabilityReport& report);

}  // namespace mdg
