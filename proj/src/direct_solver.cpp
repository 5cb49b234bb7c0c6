#include "mdg/direct_solver.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <cmath>
#include <vector>

namespace mdg {

struct DirectSolver::Impl {
  Eigen::SparseMatrix<double> matrix;
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  std::size_t n = 0;
};

DirectSolver::DirectSolver(const SparseMatrix& a) : impl_(std::make_unique<Impl>()) {
  if (a.rows() != a.cols()) throw std::invalid_argument("direct solve needs a square matrix");
  impl_->n = a.rows();
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(a.nnz());
  const auto ptr = a.row_ptr();
  const auto col = a.col_idx();
  const auto val = a.values();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = ptr[i]; k < ptr[i + 1]; ++k) {
      t.emplace_back(static_cast<int>(i), col[k], val[k]);
    }
  }
  const auto n = static_cast<Eigen::Index>(a.rows());
  impl_->matrix.resize(n, n);
  impl_->matrix.setFromTriplets(t.begin(), t.end());
  impl_->matrix.makeCompressed();
  impl_->lu.analyzePattern(impl_->matrix);
  impl_->lu.factorize(impl_->matrix);
  if (impl_->lu.info() != Eigen::Success) {
    throw SingularMatrixError("sparse LU failed: " + impl_->lu.lastErrorMessage());
  }
}

DirectSolver::~DirectSolver() = default;
DirectSolver::DirectSolver(DirectSolver&&) noexcept = default;
DirectSolver& DirectSolver::operator=(DirectSolver&&) noexcept = default;

Vector DirectSolver::solve(std::span<const double> b) const {
  if (b.size() != impl_->n) throw std::invalid_argument("direct solve: dimension mismatch");
  const Eigen::Map<const Eigen::VectorXd> rhs(b.data(), static_cast<Eigen::Index>(b.size()));
  const Eigen::VectorXd x = impl_->lu.solve(rhs);
  if (impl_->lu.info() != Eigen::Success || !x.allFinite()) {
    throw SingularMatrixError("sparse LU solve failed");
  }
  return Vector(x.data(), x.data() + x.size());
}

Vector lu_solve_direct(const SparseMatrix& a, std::span<const double> b) { return DirectSolver(a).solve(b); }

}  // namespace mdg
