#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "mdg/dg_operator.hpp"
#include "mdg/direct_solver.hpp"
#include "mdg/gmres.hpp"
#include "mdg/ilu.hpp"
#include "mdg/linear_solver.hpp"
#include "mdg/sparse_matrix.hpp"

using namespace mdg;

namespace {

Eigen::MatrixXd dense(const SparseMatrix& a) {
  const auto d = a.to_dense();
  Eigen::MatrixXd m(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = d[i * a.cols() + j];
  return m;
}

SparseMatrix from_dense(const Eigen::MatrixXd& m) {
  std::vector<Triplet> t;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      if (m(i, j) != 0.0) t.push_back({i, j, m(i, j)});
  return SparseMatrix::from_triplets(m.rows(), m.cols(), std::move(t));
}

Eigen::MatrixXd random_dense(int n, std::mt19937_64& rng, double diag_shift) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = u(rng);
  m.diagonal().array() += diag_shift;
  return m;
}

Vector random_vector(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vector v(n);
  for (double& x : v) x = u(rng);
  return v;
}

SparseMatrix tridiagonal(int n) {
  std::vector<Triplet> t;
  for (int i = 0; i < n; ++i) {
    t.push_back({i, i, 4.0 + 0.1 * i});
    if (i > 0) t.push_back({i, i - 1, -1.0});
    if (i + 1 < n) t.push_back({i, i + 1, -1.5});
  }
  return SparseMatrix::from_triplets(n, n, std::move(t));
}

double residual(const SparseMatrix& a, std::span<const double> x, std::span<const double> b) {
  Vector r = spmv(a, x);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
  return norm2(r) / norm2(b);
}

}  // namespace

TEST_CASE("csr construction validates input") {
  CHECK_THROWS_AS(SparseMatrix(2, 2, {0, 1, 2}, {0, 2}, {1.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(SparseMatrix(2, 2, {0, 2, 2}, {1, 0}, {1.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(SparseMatrix(2, 2, {0, 2, 2}, {1, 1}, {1.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(SparseMatrix(2, 2, {0, 1}, {0}, {1.0}), std::invalid_argument);
  const SparseMatrix a = SparseMatrix::from_triplets(2, 2, {{1, 0, 1.0}, {0, 1, 2.0}, {1, 0, 0.5}});
  CHECK(a.nnz() == 2);
  CHECK(a.at(1, 0) == 1.5);
  CHECK(a.at(0, 0) == 0.0);
  CHECK(a.at(0, 1) == 2.0);
}

TEST_CASE("spmv") {
  std::mt19937_64 rng(1);
  const Vector x = random_vector(5, rng);
  const Vector ix = spmv(SparseMatrix::identity(5), x);
  CHECK(ix == x);
  const Eigen::MatrixXd m = random_dense(5, rng, 0.0);
  const SparseMatrix a = from_dense(m);
  const Vector zero = spmv(a, Vector(5, 0.0));
  for (double z : zero) CHECK(z == 0.0);
  const Vector y = spmv(a, x);
  const Eigen::VectorXd ref = m * Eigen::Map<const Eigen::VectorXd>(x.data(), 5);
  for (int i = 0; i < 5; ++i) CHECK(std::abs(y[i] - ref(i)) < 1e-14);
  CHECK_THROWS_AS(spmv(a, Vector(4, 1.0)), std::invalid_argument);
}

TEST_CASE("block matrix assembly") {
  const SparseMatrix a = tridiagonal(4);
  const SparseMatrix big = assemble_block_matrix(a, {{{1.0, 0.5}, {0.0, 2.0}}, {{0.0, -1.0}, {1.0, 0.0}}});
  const Eigen::MatrixXd d = dense(big);
  const Eigen::MatrixXd ad = dense(a);
  const Eigen::MatrixXd i4 = Eigen::MatrixXd::Identity(4, 4);
  CHECK((d.block(0, 0, 4, 4) - (i4 + 0.5 * ad)).cwiseAbs().maxCoeff() == 0.0);
  CHECK((d.block(0, 4, 4, 4) - 2.0 * ad).cwiseAbs().maxCoeff() == 0.0);
  CHECK((d.block(4, 0, 4, 4) + ad).cwiseAbs().maxCoeff() == 0.0);
  CHECK((d.block(4, 4, 4, 4) - i4).cwiseAbs().maxCoeff() == 0.0);
  // No structure beyond A's pattern in any block.
  CHECK(big.nnz() <= 3 * a.nnz() + 4 + 4);
}

TEST_CASE("symmetric permutation") {
  std::mt19937_64 rng(2);
  const Eigen::MatrixXd m = random_dense(6, rng, 0.0);
  const std::vector<int> perm{3, 0, 5, 1, 4, 2};
  const Eigen::MatrixXd p = dense(permute_symmetric(from_dense(m), perm));
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) CHECK(p(perm[i], perm[j]) == m(i, j));
  const std::vector<int> inter = interleave_permutation(2, 6, 3);
  // (block b, group g, entry i) -> (g * blocks + b) * group + i
  CHECK(inter == std::vector<int>{0, 1, 2, 6, 7, 8, 3, 4, 5, 9, 10, 11});
}

TEST_CASE("ilu exactness cases") {
  // Diagonal.
  const SparseMatrix d = SparseMatrix::from_triplets(3, 3, {{0, 0, 2.0}, {1, 1, -3.0}, {2, 2, 0.5}});
  for (int level : {0, 2}) {
    const IluFactors f = ilu_factor(d, level);
    Vector x(3);
    f.solve(Vector{2.0, 3.0, 1.0}, x);
    CHECK(x == Vector{1.0, -1.0, 2.0});
  }
  // Tridiagonal at level 0: no fill exists.
  const SparseMatrix t = tridiagonal(30);
  const IluFactors ft = ilu_factor(t, 0);
  const Eigen::MatrixXd lu = dense(ft.lower()) * dense(ft.upper());
  CHECK((lu - dense(t)).cwiseAbs().maxCoeff() < 1e-13);
  // Dense 4x4 with complete fill.
  std::mt19937_64 rng(4);
  const Eigen::MatrixXd m = random_dense(4, rng, 4.0);
  const IluFactors fm = ilu_factor(from_dense(m), 4);
  CHECK((dense(fm.lower()) * dense(fm.upper()) - m).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((dense(fm.lower()).diagonal().array() == 1.0).all());
  // Complete fill reproduces the direct solve.
  const Vector b = random_vector(4, rng);
  Vector x(4);
  fm.solve(b, x);
  const Vector xd = lu_solve_direct(from_dense(m), b);
  for (int i = 0; i < 4; ++i) CHECK(std::abs(x[i] - xd[i]) < 1e-10);
}

TEST_CASE("ilu fill levels grow the pattern") {
  // 2-D Laplacian on a 6x6 grid.
  const int n = 6;
  std::vector<Triplet> t;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const int r = i * n + j;
      t.push_back({r, r, 4.0});
      if (i > 0) t.push_back({r, r - n, -1.0});
      if (i + 1 < n) t.push_back({r, r + n, -1.0});
      if (j > 0) t.push_back({r, r - 1, -1.0});
      if (j + 1 < n) t.push_back({r, r + 1, -1.0});
    }
  const SparseMatrix a = SparseMatrix::from_triplets(n * n, n * n, t);
  const IluFactors f0 = ilu_factor(a, 0);
  const IluFactors f1 = ilu_factor(a, 1);
  const IluFactors f2 = ilu_factor(a, 2);
  CHECK(f0.nnz() == a.nnz());
  CHECK(f1.nnz() > f0.nnz());
  CHECK(f2.nnz() > f1.nnz());
  // ILU(0) matches A on its pattern.
  const Eigen::MatrixXd lu = dense(f0.lower()) * dense(f0.upper());
  const Eigen::MatrixXd ad = dense(a);
  for (int i = 0; i < n * n; ++i)
    for (int j = 0; j < n * n; ++j)
      if (ad(i, j) != 0.0) CHECK(std::abs(lu(i, j) - ad(i, j)) < 1e-13);
}

TEST_CASE("ilu reports tiny pivots") {
  const SparseMatrix a = SparseMatrix::from_triplets(2, 2, {{0, 0, 0.0}, {0, 1, 1.0}, {1, 0, 1.0}, {1, 1, 1.0}});
  CHECK_THROWS_AS(ilu_factor(a, 0), ZeroPivotError);
  try {
    ilu_factor(a, 0);
  } catch (const ZeroPivotError& e) {
    CHECK(e.row() == 0);
  }
}

TEST_CASE("gmres on the identity") {
  std::mt19937_64 rng(5);
  const Vector b = random_vector(10, rng);
  const SolveResult r = gmres_solve(SparseMatrix::identity(10), b, nullptr, {});
  CHECK(r.stats.converged);
  CHECK(r.stats.iterations <= 1);
  for (int i = 0; i < 10; ++i) CHECK(std::abs(r.x[i] - b[i]) < 1e-14);
}

TEST_CASE("gmres on a hand-solvable SPD system") {
  // [[4,1,0],[1,3,1],[0,1,2]] x = [1,2,3]: det 18, Cramer's rule gives x = (4, 2, 26) / 18.
  const SparseMatrix a =
      SparseMatrix::from_triplets(3, 3, {{0, 0, 4}, {0, 1, 1}, {1, 0, 1}, {1, 1, 3}, {1, 2, 1}, {2, 1, 1}, {2, 2, 2}});
  const Vector b{1, 2, 3};
  const Vector expected{4.0 / 18, 2.0 / 18, 26.0 / 18};
  const SolveResult r = gmres_solve(a, b, nullptr, {});
  CHECK(r.stats.converged);
  const Vector ax = spmv(a, expected);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(ax[i] - b[i]) < 1e-14);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(r.x[i] - expected[i]) < 1e-10);
}

TEST_CASE("gmres with restarts, preconditioning and residual history") {
  std::mt19937_64 rng(6);
  const int n = 80;
  const Eigen::MatrixXd m = random_dense(n, rng, 12.0);
  const SparseMatrix a = from_dense(m);
  const Vector b = random_vector(n, rng);
  GmresSettings s;
  s.restart = 10;
  const SolveResult plain = gmres_solve(a, b, nullptr, s);
  CHECK(plain.stats.converged);
  CHECK(plain.stats.relative_residual <= 1e-10);
  CHECK(residual(a, plain.x, b) <= 1e-10);
  // Arnoldi residuals are non-increasing inside each cycle.
  for (std::size_t k = 1; k < plain.stats.residual_history.size(); ++k) {
    if (k % s.restart != 0) CHECK(plain.stats.residual_history[k] <= plain.stats.residual_history[k - 1] * (1 + 1e-12));
  }
  const IluFactors f = ilu_factor(a, 0);
  const SolveResult pre = gmres_solve(a, b, &f, s);
  CHECK(pre.stats.converged);
  CHECK(residual(a, pre.x, b) <= 1e-10);

  // Exhaustion is reported, never silent.
  GmresSettings tight;
  tight.max_iterations = 3;
  tight.restart = 3;
  const SolveResult bad = gmres_solve(a, b, nullptr, tight);
  CHECK_FALSE(bad.stats.converged);
  CHECK(bad.stats.iterations == 3);
  CHECK(bad.stats.relative_residual > 1e-10);

  // Warm start from the solution converges immediately.
  const SolveResult warm = gmres_solve(a, b, nullptr, s, plain.x);
  CHECK(warm.stats.converged);
  CHECK(warm.stats.iterations <= 1);
}

TEST_CASE("gmres is deterministic") {
  std::mt19937_64 rng(8);
  const SparseMatrix a = from_dense(random_dense(40, rng, 8.0));
  const Vector b = random_vector(40, rng);
  const IluFactors f = ilu_factor(a, 1);
  const SolveResult r1 = gmres_solve(a, b, &f, {});
  const SolveResult r2 = gmres_solve(a, b, &f, {});
  CHECK(r1.x == r2.x);
}

TEST_CASE("base mesh implicit Euler-type system converges quickly with ILU(2)") {
  const DgOperator op(build_mesh(0), make_basis(2), problem_convection_diffusion(), 20.0);
  const SparseMatrix m = assemble_block_matrix(op.matrix(), {{{1.0, -0.5 * 0.25}}});
  std::mt19937_64 rng(9);
  const Vector b = random_vector(m.rows(), rng);
  const IluFactors f = ilu_factor(m, 2);
  const SolveResult r = gmres_solve(m, b, &f, {});
  CHECK(r.stats.converged);
  CHECK(r.stats.iterations < 50);
  CHECK(residual(m, r.x, b) <= 1e-10);
}

TEST_CASE("direct solver") {
  std::mt19937_64 rng(10);
  const Vector b = random_vector(7, rng);
  CHECK(lu_solve_direct(SparseMatrix::identity(7), b) == b);
  // Permutation matrix: row i has a one in column perm[i], so x[perm[i]] = b[i].
  const std::vector<int> perm{2, 0, 1, 6, 3, 5, 4};
  std::vector<Triplet> t;
  for (int i = 0; i < 7; ++i) t.push_back({i, perm[i], 1.0});
  const Vector xp = lu_solve_direct(SparseMatrix::from_triplets(7, 7, t), b);
  for (int i = 0; i < 7; ++i) CHECK(xp[perm[i]] == b[i]);

  const Eigen::MatrixXd m = random_dense(50, rng, 10.0);
  const Vector c = random_vector(50, rng);
  const Vector x = lu_solve_direct(from_dense(m), c);
  const Eigen::VectorXd ref = m.partialPivLu().solve(Eigen::Map<const Eigen::VectorXd>(c.data(), 50));
  for (int i = 0; i < 50; ++i) CHECK(std::abs(x[i] - ref(i)) < 1e-10);

  const SparseMatrix singular = SparseMatrix::from_triplets(2, 2, {{0, 0, 1.0}, {1, 0, 2.0}});
  CHECK_THROWS_AS(DirectSolver{singular}, SingularMatrixError);
}

TEST_CASE("linear solver facade") {
  std::mt19937_64 rng(12);
  const SparseMatrix a = from_dense(random_dense(30, rng, 10.0));
  const Vector b = random_vector(30, rng);

  LinearSolver gm;
  gm.set_matrix(a);
  Vector x(30, 0.0);
  const SolveStats s = gm.solve(b, x);
  CHECK(s.converged);
  CHECK_FALSE(s.direct);
  CHECK(residual(a, x, b) <= 1e-10);

  LinearSolverSettings ds;
  ds.kind = SolverKind::direct;
  LinearSolver dir(ds);
  dir.set_matrix(a);
  Vector y(30, 0.0);
  CHECK(dir.solve(b, y).direct);
  CHECK(residual(a, y, b) <= 1e-10);

  // A reordering is transparent to the caller.
  std::vector<int> perm(30);
  for (int i = 0; i < 30; ++i) perm[i] = (7 * i) % 30;
  LinearSolver ord;
  ord.set_matrix(a, perm);
  Vector z(30, 0.0);
  ord.solve(b, z);
  CHECK(residual(a, z, b) <= 1e-10);
  CHECK(dense(ord.matrix()) == dense(a));

  // GMRES exhaustion falls back to the direct solver when permitted.
  LinearSolverSettings weak;
  weak.gmres.max_iterations = 2;
  weak.gmres.restart = 2;
  weak.ilu_level = 0;
  const DgOperator op(build_mesh(1), make_basis(2), problem_convection_diffusion(), 20.0);
  const SparseMatrix hardm = assemble_block_matrix(op.matrix(), {{{1.0, -10.0}}});
  const Vector hb = random_vector(hardm.rows(), rng);
  LinearSolver fb(weak);
  fb.set_matrix(hardm);
  Vector u(hardm.rows(), 0.0);
  const SolveStats fs = fb.solve(hb, u);
  CHECK(fs.fallback);
  CHECK(fs.direct);
  CHECK(residual(hardm, u, hb) <= 1e-10);

  // Without a permitted fallback the failure is an error.
  weak.direct_fallback_limit = 0;
  LinearSolver hard(weak);
  hard.set_matrix(hardm);
  Vector v(hardm.rows(), 0.0);
  CHECK_THROWS_AS(hard.solve(hb, v), SolverError);
}
