#pragma once

#include <span>
#include <utility>
#include <vector>

#include "mdg/mesh.hpp"

namespace mdg {

inline constexpr int kMaxBasisDegree = 5;

/// Orthonormal Dubiner basis of total degree p on the reference triangle
/// {(0,0),(1,0),(0,1)}. Modes are ordered by total degree, mode 0 is the
/// constant sqrt(2).
class BasisSet {
 public:
  explicit BasisSet(int degree);

  int degree() const { return degree_; }
  int size() const { return static_cast<int>(modes_.size()); }
  /// (i, j) index pair of a mode; total degree i + j.
  std::pair<int, int> mode_index(int mode) const { return modes_[mode]; }

  void evaluate(Vec2 ref, std::span<double> values) const;
  void evaluate(Vec2 ref, std::span<double> values, std::span<Vec2> gradients) const;

  std::vector<double> values(Vec2 ref) const;
  std::vector<Vec2> gradients(Vec2 ref) const;

 private:
  int degree_;
  std::vector<std::pair<int, int>> modes_;
  std::vector<double> scale_;
};

inline int num_modes(int degree) { return (degree + 1) * (degree + 2) / 2; }

/// Throws std::invalid_argument unless 0 <= p <= kMaxBasisDegree.
BasisSet make_basis(int degree);

}  // namespace mdg
