#include "mdg/gmres.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace mdg {

SolveResult gmres_solve(const SparseMatrix& a, std::span<const double> b, const IluFactors* precond,
                        const GmresSettings& settings, std::span<const double> x0) {
  const auto start = std::chrono::steady_clock::now();
  const std::size_t n = a.rows();
  if (b.size() != n || a.cols() != n) throw std::invalid_argument("gmres: dimension mismatch");
  if (!x0.empty() && x0.size() != n) throw std::invalid_argument("gmres: initial guess has wrong size");
  if (!(settings.rtol > 0.0)) throw std::invalid_argument("gmres: rtol must be positive");
  if (settings.restart < 1) throw std::invalid_argument("gmres: restart must be positive");

  SolveResult out;
  out.x.assign(n, 0.0);
  if (!x0.empty()) out.x.assign(x0.begin(), x0.end());
  SolveStats& st = out.stats;

  const double bnorm = norm2(b);
  auto finish = [&] {
    st.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
  };
  if (bnorm == 0.0) {
    out.x.assign(n, 0.0);
    st.converged = true;
    st.relative_residual = 0.0;
    return finish();
  }

  const int m = settings.restart;
  std::vector<Vector> v(m + 1, Vector(n));
  std::vector<std::vector<double>> h(m + 1, std::vector<double>(m, 0.0));
  std::vector<double> cs(m), sn(m), g(m + 1), y(m);
  Vector r(n), z(n), w(n), u(n);

  auto apply_precond = [&](std::span<const double> in, std::span<double> res) {
    if (precond) {
      precond->solve(in, res);
    } else {
      std::copy(in.begin(), in.end(), res.begin());
    }
  };

  while (true) {
    a.multiply(out.x, r);
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
    const double beta = norm2(r);
    st.relative_residual = beta / bnorm;
    if (st.relative_residual <= settings.rtol) {
      st.converged = true;
      break;
    }
    if (st.iterations >= settings.max_iterations || !std::isfinite(beta)) break;

    for (std::size_t i = 0; i < n; ++i) v[0][i] = r[i] / beta;
    std::fill(g.begin(), g.end(), 0.0);
    g[0] = beta;
    int j = 0;
    while (j < m) {
      apply_precond(v[j], z);
      a.multiply(z, w);
      for (int i = 0; i <= j; ++i) {
        h[i][j] = dot(w, v[i]);
        axpy(-h[i][j], v[i], w);
      }
      h[j + 1][j] = norm2(w);
      for (int i = 0; i < j; ++i) {
        const double t = cs[i] * h[i][j] + sn[i] * h[i + 1][j];
        h[i + 1][j] = -sn[i] * h[i][j] + cs[i] * h[i + 1][j];
        h[i][j] = t;
      }
      const double denom = std::hypot(h[j][j], h[j + 1][j]);
      cs[j] = denom == 0.0 ? 1.0 : h[j][j] / denom;
      sn[j] = denom == 0.0 ? 0.0 : h[j + 1][j] / denom;
      const double hj1 = h[j + 1][j];
      h[j][j] = denom;
      h[j + 1][j] = 0.0;
      g[j + 1] = -sn[j] * g[j];
      g[j] = cs[j] * g[j];
      ++st.iterations;
      const double est = std::abs(g[j + 1]) / bnorm;
      st.residual_history.push_back(est);
      ++j;
      if (hj1 == 0.0 || est <= settings.rtol || st.iterations >= settings.max_iterations) break;
      for (std::size_t i = 0; i < n; ++i) v[j][i] = w[i] / hj1;
    }

    // Back substitution for the j x j upper triangular system.
    for (int i = j - 1; i >= 0; --i) {
      double s = g[i];
      for (int k = i + 1; k < j; ++k) s -= h[i][k] * y[k];
      y[i] = h[i][i] == 0.0 ? 0.0 : s / h[i][i];
    }
    std::fill(u.begin(), u.end(), 0.0);
    for (int i = 0; i < j; ++i) axpy(y[i], v[i], u);
    apply_precond(u, z);
    axpy(1.0, z, out.x);
  }
  return finish();
}

}  // namespace mdg
