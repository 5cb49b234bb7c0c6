#include "mdg/time_stepper.hpp"

#include <algorithm>
#include <cmath>
#include <type_traits>
#include <utility>
#include <vector>

namespace mdg {

namespace {

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

BlowUpError::BlowUpError(int step, double time)
    : std::runtime_error("non-finite state after step " + std::to_string(step) + " (t = " +
                         std::to_string(time) + ")"),
      step_(step),
      time_(time) {}

TimeStepper::TimeStepper(const SemiDiscreteSystem& system, Method method, LinearSolverSettings settings)
    : system_(system), method_(std::move(method)), solver_(std::move(settings)) {
  if (const auto* tab = std::get_if<MdrkTableau>(&method_)) {
    if (tab->derivatives < 1 || tab->derivatives > 2) {
      throw std::invalid_argument("MDRK tableaux with more than two derivatives are not supported");
    }
    for (int i = 0; i < tab->explicit_stages(); ++i) {
      if (tab->c[i] != 0.0) throw std::invalid_argument("explicit stages must sit at c = 0");
    }
    if (tab->explicit_stages() == tab->stages) throw std::invalid_argument("tableau has no implicit stage");
  }
}

int TimeStepper::block_count() const {
  if (const auto* s = std::get_if<TwoPointScheme>(&method_)) return s->n_derivatives;
  const auto& tab = std::get<MdrkTableau>(method_);
  return (tab.stages - tab.explicit_stages()) * tab.derivatives;
}

void TimeStepper::prepare(double dt) {
  if (dt == prepared_dt_) return;
  std::vector<std::vector<BlockCoefficient>> grid;
  if (const auto* s = std::get_if<TwoPointScheme>(&method_)) {
    const int d = s->n_derivatives;
    grid.assign(d, std::vector<BlockCoefficient>(d));
    for (int j = 0; j < d; ++j) grid[0][j].matrix = dt * s->beta_d(j);
    grid[0][0].identity = 1.0;
    for (int r = 1; r < d; ++r) {
      grid[r][r - 1].matrix = -dt;
      grid[r][r].identity = 1.0;
    }
  } else {
    const auto& tab = std::get<MdrkTableau>(method_);
    const int e = tab.explicit_stages();
    const int ns = tab.stages - e;
    if (tab.derivatives == 1) {
      grid.assign(ns, std::vector<BlockCoefficient>(ns));
      for (int i = 0; i < ns; ++i) {
        for (int j = 0; j < ns; ++j) grid[i][j].matrix = -dt * tab.a1[e + i][e + j];
        grid[i][i].identity = 1.0;
      }
    } else {
      grid.assign(2 * ns, std::vector<BlockCoefficient>(2 * ns));
      for (int i = 0; i < ns; ++i) {
        auto& yrow = grid[2 * i];
        yrow[2 * i].identity = 1.0;
        for (int j = 0; j < ns; ++j) {
          yrow[2 * j + 1].identity = -tab.a1[e + i][e + j];
          yrow[2 * j + 1].matrix = -dt * tab.a2[e + i][e + j];
        }
        auto& srow = grid[2 * i + 1];
        srow[2 * i].matrix = -dt;
        srow[2 * i + 1].identity = 1.0;
      }
    }
  }
  // The solver sees element-interleaved unknowns, which ILU factors far
  // better than the block-major layout used here.
  solver_.set_matrix(assemble_block_matrix(system_.matrix(), grid),
                     interleave_permutation(grid.size(), system_.size(), system_.unknowns_per_element()));
  prepared_dt_ = dt;
  ++stats_.factorizations;
}

void TimeStepper::record(const SolveStats& s) {
  last_ = s;
  ++stats_.steps;
  stats_.total_iterations += s.iterations;
  stats_.max_iterations = std::max(stats_.max_iterations, s.iterations);
  stats_.max_relative_residual = std::max(stats_.max_relative_residual, s.relative_residual);
  stats_.fallbacks += s.fallback ? 1 : 0;
  stats_.direct_solves += s.direct ? 1 : 0;
  stats_.solve_seconds += s.wall_seconds;
}

Vector TimeStepper::step(std::span<const double> w, double t, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
  if (w.size() != system_.size()) throw std::invalid_argument("state has wrong dimension");
  prepare(dt);
  return std::visit([&](const auto& m) {
    if constexpr (std::is_same_v<std::decay_t<decltype(m)>, TwoPointScheme>) {
      return step_two_point(m, w, t, dt);
    } else {
      return step_mdrk(m, w, t, dt);
    }
  }, method_);
}

Vector TimeStepper::step_two_point(const TwoPointScheme& s, std::span<const double> w, double t, double dt) {
  const SparseMatrix& a = system_.matrix();
  const std::size_t n = system_.size();
  const int d = s.n_derivatives;
  const bool src = system_.has_source();

  // Derivatives at t^n from the explicit relations sigma = A w + b, tau = A sigma + b'.
  std::vector<Vector> deriv_n(d + 1);
  deriv_n[0].assign(w.begin(), w.end());
  std::vector<Vector> b_n(d), b_np1(d);
  for (int j = 0; j < d; ++j) {
    b_n[j] = src ? system_.source(t, j) : Vector(n, 0.0);
    b_np1[j] = src ? system_.source(t + dt, j) : Vector(n, 0.0);
  }
  std::vector<Vector> a_deriv(d);  // A * d^j w^n / dt^j, j = 0..d-1
  for (int j = 0; j < d; ++j) {
    a_deriv[j] = spmv(a, deriv_n[j]);
    deriv_n[j + 1] = a_deriv[j];
    axpy(1.0, b_n[j], deriv_n[j + 1]);
  }

  Vector rhs(d * n, 0.0);
  Vector x(d * n, 0.0);
  std::span<double> rw(rhs.data(), n);
  std::copy(w.begin(), w.end(), rw.begin());
  double dtp = dt;
  for (int j = 0; j < d; ++j) {
    const double al = s.alpha_d(j);
    const double be = s.beta_d(j);
    axpy(dtp * al, a_deriv[j], rw);
    axpy(dtp * al, b_n[j], rw);
    axpy(-dtp * be, b_np1[j], rw);
    dtp *= dt;
  }
  // Scaled unknowns dt^j d^j w / dt^j keep every block of the form I + dt A.
  double scale = dt;
  for (int j = 1; j < d; ++j) {
    std::span<double> r(rhs.data() + j * n, n);
    axpy(scale, b_np1[j - 1], r);
    scale *= dt;
  }
  scale = 1.0;
  for (int j = 0; j < d; ++j) {
    std::span<double> g(x.data() + j * n, n);
    axpy(scale, deriv_n[j], g);
    scale *= dt;
  }
  if (!all_finite(rhs)) throw BlowUpError(stats_.steps + 1, t + dt);
  record(solver_.solve(rhs, x));
  solution_ = x;
  return Vector(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(n));
}

Vector TimeStepper::step_mdrk(const MdrkTableau& tab, std::span<const double> w, double t, double dt) {
  const SparseMatrix& a = system_.matrix();
  const std::size_t n = system_.size();
  const bool src = system_.has_source();
  const int e = tab.explicit_stages();
  const int s = tab.stages;
  const int ns = s - e;
  const bool two = tab.derivatives == 2;
  auto source = [&](double time, int d) { return src ? system_.source(time, d) : Vector(n, 0.0); };

  std::vector<Vector> b0(s), b1(s);
  for (int i = 0; i < s; ++i) {
    b0[i] = source(t + tab.c[i] * dt, 0);
    if (two) b1[i] = source(t + tab.c[i] * dt, 1);
  }
  // Explicit stages: y_(j) = w^n.
  std::vector<Vector> sig(s), acc(s);
  for (int j = 0; j < e; ++j) {
    sig[j] = spmv(a, w);
    axpy(1.0, b0[j], sig[j]);
    if (two) {
      acc[j] = spmv(a, sig[j]);
      axpy(1.0, b1[j], acc[j]);
    }
  }

  const int width = two ? 2 : 1;
  Vector rhs(static_cast<std::size_t>(width * ns) * n, 0.0);
  Vector x(rhs.size(), 0.0);
  Vector sigma_guess = spmv(a, w);
  axpy(1.0, b0[0], sigma_guess);
  for (int ii = 0; ii < ns; ++ii) {
    const int i = e + ii;
    std::span<double> ry(rhs.data() + static_cast<std::size_t>(width * ii) * n, n);
    std::copy(w.begin(), w.end(), ry.begin());
    for (int j = 0; j < e; ++j) {
      axpy(dt * tab.a1[i][j], sig[j], ry);
      if (two) axpy(dt * dt * tab.a2[i][j], acc[j], ry);
    }
    for (int j = e; j < s; ++j) {
      if (two) {
        axpy(dt * dt * tab.a2[i][j], b1[j], ry);
      } else {
        axpy(dt * tab.a1[i][j], b0[j], ry);
      }
    }
    std::copy(w.begin(), w.end(), x.begin() + static_cast<std::ptrdiff_t>(width * ii * n));
    if (two) {
      std::span<double> rs(rhs.data() + (2 * ii + 1) * n, n);
      std::span<double> gs(x.data() + (2 * ii + 1) * n, n);
      axpy(dt, b0[i], rs);
      axpy(dt, sigma_guess, gs);
    }
  }
  if (!all_finite(rhs)) throw BlowUpError(stats_.steps + 1, t + dt);
  record(solver_.solve(rhs, x));
  solution_ = x;

  auto stage_y = [&](int ii) {
    return std::span<const double>(x.data() + static_cast<std::size_t>(width * ii) * n, n);
  };
  if (tab.stiffly_accurate) {
    const auto y = stage_y(ns - 1);
    return Vector(y.begin(), y.end());
  }
  Vector out(w.begin(), w.end());
  for (int i = 0; i < s; ++i) {
    Vector sg, ac;
    if (i < e) {
      sg = sig[i];
      if (two) ac = acc[i];
    } else {
      const int ii = i - e;
      if (two) {
        const auto sp = std::span<const double>(x.data() + static_cast<std::size_t>(2 * ii + 1) * n, n);
        sg.assign(sp.begin(), sp.end());
        for (double& v : sg) v /= dt;
      } else {
        sg = spmv(a, stage_y(ii));
        axpy(1.0, b0[i], sg);
      }
      if (two) {
        ac = spmv(a, sg);
        axpy(1.0, b1[i], ac);
      }
    }
    axpy(dt * tab.b1[i], sg, out);
    if (two) axpy(dt * dt * tab.b2[i], ac, out);
  }
  return out;
}

Vector two_point_step(const SemiDiscreteSystem& system, const TwoPointScheme& scheme, std::span<const double> w,
                      double t, double dt, const LinearSolverSettings& settings) {
  TimeStepper stepper(system, scheme, settings);
  return stepper.step(w, t, dt);
}

Vector mdrk_step(const SemiDiscreteSystem& system, const MdrkTableau& tableau, std::span<const double> w, double t,
                 double dt, const LinearSolverSettings& settings) {
  TimeStepper stepper(system, tableau, settings);
  return stepper.step(w, t, dt);
}

IntegrationResult integrate(const SemiDiscreteSystem& system, const Method& method, std::span<const double> w0,
                            double t0, double t_end, double dt, const LinearSolverSettings& settings) {
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
  if (t_end < t0) throw std::invalid_argument("t_end must not precede t0");
  IntegrationResult result;
  result.w.assign(w0.begin(), w0.end());
  if (t_end == t0) return result;

  TimeStepper stepper(system, method, settings);
  const int steps = std::max(1, static_cast<int>(std::ceil((t_end - t0) / dt - 1e-9)));
  for (int k = 0; k < steps; ++k) {
    const double t = t0 + k * dt;
    double h = dt;
    if (k == steps - 1) {
      h = t_end - t;
      if (std::abs(h - dt) <= 1e-12 * dt) h = dt;
    }
    result.w = stepper.step(result.w, t, h);
    if (!all_finite(result.w)) throw BlowUpError(k + 1, t + h);
  }
  result.steps = steps;
  result.stats = stepper.statistics();
  return result;
}

}  // namespace mdg
