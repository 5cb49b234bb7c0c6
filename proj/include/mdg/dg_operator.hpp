#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "mdg/basis.hpp"
#include "mdg/mesh.hpp"
#include "mdg/problem.hpp"
#include "mdg/quadrature.hpp"
#include "mdg/semi_discrete.hpp"
#include "mdg/sparse_matrix.hpp"

namespace mdg {

/// Upwind value: w_minus if c.n > 0, otherwise w_plus; ties take w_minus.
double upwind_trace(Vec2 c, Vec2 n, double w_minus, double w_plus);

/// Penalty used when none is configured: 20 up to p = 4, 30 for p = 5.
double default_penalty(int degree);

struct AssemblyOptions {
  /// Treat the right element as the "-" side and flip every normal.
  /// The assembled matrix must not change.
  bool flip_orientation = false;
};

/// Upwind/SIPG discretization of  w_t + div(c w - eps grad w) = g  on a
/// periodic triangulation, using an orthonormal modal basis per element so
/// the mass matrix is the identity:
///
///   (dw/dt, phi) = (c w - eps grad w, grad phi) + < R_e(w; phi) >  + (g, phi)
///   R_e = -c w_up [[phi]] + eps ({grad w} - eta/h_e [[w]]) [[phi]] + eps [[w]] {grad phi}
///
/// State vectors are element-major: entry k * n_modes + i.
class DgOperator final : public SemiDiscreteSystem {
 public:
  /// Throws std::invalid_argument for eta <= 0, or eps > 0 with p = 0.
  DgOperator(TriangularMesh mesh, BasisSet basis, Problem problem, double eta, AssemblyOptions options = {});

  const SparseMatrix& matrix() const override { return a_; }
  bool has_source() const override { return problem_.has_source(); }
  /// Modal L2 projection of d^k g / dt^k at time t.
  Vector source(double t, int derivative) const override;

  const TriangularMesh& mesh() const { return mesh_; }
  const BasisSet& basis() const { return basis_; }
  const Problem& problem() const { return problem_; }
  double eta() const { return eta_; }
  int modes() const { return basis_.size(); }
  std::size_t unknowns_per_element() const override { return static_cast<std::size_t>(basis_.size()); }

  /// sigma = A w + b(t), the coefficients of dw/dt.
  Vector sigma(std::span<const double> w, double t) const;
  /// tau = A sigma + b'(t), the coefficients of d^2 w / dt^2.
  Vector tau(std::span<const double> sigma, double t) const;

 private:
  void assemble(const AssemblyOptions& options);

  TriangularMesh mesh_;
  BasisSet basis_;
  Problem problem_;
  double eta_;
  SparseMatrix a_;
  TriangleQuadrature source_rule_;
  std::vector<std::vector<double>> source_basis_;  // [q][mode]
};

DgOperator assemble(const TriangularMesh& mesh, const BasisSet& basis, const Problem& problem, double eta);
Vector source_vector(const DgOperator& op, double t, int derivative);
Vector compute_sigma(const DgOperator& op, std::span<const double> w, double t);
Vector compute_tau(const DgOperator& op, std::span<const double> sigma, double t);

/// Element-wise modal L2 projection of f.
Vector project_l2(const TriangularMesh& mesh, const BasisSet& basis, const SpaceFunction& f);

/// ||w_h - exact(., ., t)||_{L2(Omega)} with a degree 2p+4 rule.
double l2_error(const TriangularMesh& mesh, const BasisSet& basis, std::span<const double> w,
                const SpaceTimeFunction& exact, double t);

/// ||w_h||_{L2}; equals the Euclidean norm of the coefficients.
double l2_norm(std::span<const double> w);

/// Value of w_h at physical point x inside element k.
double evaluate(const TriangularMesh& mesh, const BasisSet& basis, std::span<const double> w, std::size_t k,
                Vec2 x);

}  // namespace mdg
