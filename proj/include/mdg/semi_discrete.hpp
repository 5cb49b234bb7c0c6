#pragma once

#include <cstddef>
#include <functional>

#include "mdg/sparse_matrix.hpp"

namespace mdg {

/// Linear method-of-lines system  dw/dt = A w + b(t).
class SemiDiscreteSystem {
 public:
  virtual ~SemiDiscreteSystem() = default;
  virtual const SparseMatrix& matrix() const = 0;
  virtual bool has_source() const = 0;
  /// The `derivative`-th time derivative of b at t (derivative in 0..2).
  virtual Vector source(double t, int derivative) const = 0;

  /// Unknowns per element; block systems interleave at this granularity.
  virtual std::size_t unknowns_per_element() const { return 1; }

  std::size_t size() const { return matrix().rows(); }
};

/// A plain matrix with an optional source callback; used for ODE studies.
class MatrixSystem final : public SemiDiscreteSystem {
 public:
  using SourceFunction = std::function<Vector(double t, int derivative)>;

  explicit MatrixSystem(SparseMatrix a, SourceFunction source = {})
      : a_(std::move(a)), source_(std::move(source)) {}

  const SparseMatrix& matrix() const override { return a_; }
  bool has_source() const override { return static_cast<bool>(source_); }
  Vector source(double t, int derivative) const override {
    return source_ ? source_(t, derivative) : Vector(a_.rows(), 0.0);
  }

 private:
  SparseMatrix a_;
  SourceFunction source_;
};

}  // namespace mdg
