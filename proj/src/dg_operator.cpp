#include "mdg/dg_operator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace mdg {

namespace {

// Dense coupling blocks of one element row: neighbours sorted ascending,
// block b stored row-major as [test mode][trial mode].
struct BlockRow {
  std::vector<int> neighbours;
  std::vector<std::vector<double>> blocks;

  std::vector<double>& block(int element) {
    const auto it = std::find(neighbours.begin(), neighbours.end(), element);
    return blocks[static_cast<std::size_t>(it - neighbours.begin())];
  }
};

// Trace data of all modes of one element at one edge point.
struct SideTrace {
  std::vector<double> value;
  std::vector<double> half_dn;  // 0.5 * grad(phi) . n
};

void trace(const TriangularMesh& mesh, const BasisSet& basis, int element, Vec2 x, Vec2 n,
           std::vector<double>& ref_values, std::vector<Vec2>& ref_grads, SideTrace& out) {
  const AffineMap& map = mesh.element_map(element);
  const double scale = 1.0 / std::sqrt(map.det);
  basis.evaluate(map.to_reference(x), ref_values, ref_grads);
  for (std::size_t i = 0; i < ref_values.size(); ++i) {
    const Vec2 g = map.physical_gradient(ref_grads[i]);
    out.value[i] = scale * ref_values[i];
    out.half_dn[i] = 0.5 * (scale * dot(g, n));
  }
}

}  // namespace

double upwind_trace(Vec2 c, Vec2 n, double w_minus, double w_plus) {
  return dot(c, n) >= 0.0 ? w_minus : w_plus;
}

double default_penalty(int degree) { return degree >= 5 ? 30.0 : 20.0; }

DgOperator::DgOperator(TriangularMesh mesh, BasisSet basis, Problem problem, double eta,
                       AssemblyOptions options)
    : mesh_(std::move(mesh)), basis_(std::move(basis)), problem_(std::move(problem)), eta_(eta) {
  if (!(eta_ > 0.0)) throw std::invalid_argument("penalty eta must be positive");
  if (problem_.diffusion < 0.0) throw std::invalid_argument("diffusion must be non-negative");
  if (problem_.diffusion > 0.0 && basis_.degree() == 0) {
    throw std::invalid_argument("interior penalty diffusion needs polynomial degree p >= 1");
  }
  const int p = basis_.degree();
  source_rule_ = triangle_rule(2 * p + 2);
  source_basis_.reserve(source_rule_.points.size());
  for (const Vec2& q : source_rule_.points) source_basis_.push_back(basis_.values(q));
  assemble(options);
}

void DgOperator::assemble(const AssemblyOptions& options) {
  const int n = basis_.size();
  const int p = basis_.degree();
  const std::size_t ne = mesh_.num_elements();
  const Vec2 c = problem_.velocity;
  const double eps = problem_.diffusion;
  const bool diffusive = eps > 0.0;

  std::vector<BlockRow> rows(ne);
  for (std::size_t k = 0; k < ne; ++k) rows[k].neighbours.push_back(static_cast<int>(k));
  for (const Edge& e : mesh_.edges()) {
    rows[e.left].neighbours.push_back(e.right);
    rows[e.right].neighbours.push_back(e.left);
  }
  for (auto& r : rows) {
    std::sort(r.neighbours.begin(), r.neighbours.end());
    r.neighbours.erase(std::unique(r.neighbours.begin(), r.neighbours.end()), r.neighbours.end());
    r.blocks.assign(r.neighbours.size(), std::vector<double>(static_cast<std::size_t>(n * n), 0.0));
  }

  // Cell terms: (c phi_j - eps grad phi_j, grad phi_i); the |det J| of the
  // integral cancels the squared basis scaling.
  const TriangleQuadrature cell_rule = triangle_rule(2 * p + 2);
  std::vector<std::vector<double>> ref_values;
  std::vector<std::vector<Vec2>> ref_grads;
  for (const Vec2& q : cell_rule.points) {
    ref_values.emplace_back(n);
    ref_grads.emplace_back(n);
    basis_.evaluate(q, ref_values.back(), ref_grads.back());
  }
  std::vector<Vec2> grads(n);
  for (std::size_t k = 0; k < ne; ++k) {
    const AffineMap& map = mesh_.element_map(k);
    std::vector<double>& blk = rows[k].block(static_cast<int>(k));
    for (std::size_t q = 0; q < cell_rule.points.size(); ++q) {
      const double wq = cell_rule.weights[q];
      for (int i = 0; i < n; ++i) grads[i] = map.physical_gradient(ref_grads[q][i]);
      for (int i = 0; i < n; ++i) {
        const double c_dot_grad = dot(c, grads[i]);
        for (int j = 0; j < n; ++j) {
          double v = ref_values[q][j] * c_dot_grad;
          if (diffusive) v -= eps * dot(grads[j], grads[i]);
          blk[i * n + j] += wq * v;
        }
      }
    }
  }

  // Edge terms + < R_e(phi_j; phi_i) >.
  const LineQuadrature edge_q = edge_rule(2 * p + 2);
  SideTrace minus{std::vector<double>(n), std::vector<double>(n)};
  SideTrace plus{std::vector<double>(n), std::vector<double>(n)};
  std::vector<double> tmp_values(n);
  std::vector<Vec2> tmp_grads(n);
  for (const Edge& e : mesh_.edges()) {
    const bool flip = options.flip_orientation;
    const int em = flip ? e.right : e.left;
    const int ep = flip ? e.left : e.right;
    const Vec2 normal = flip ? -e.normal : e.normal;
    const double cn = dot(c, normal);
    const bool minus_is_upwind = cn >= 0.0;  // same rule as upwind_trace
    const double h = e.length;
    const double penalty = eps * eta_ / h;
    std::vector<double>* blk[2][2] = {{&rows[em].block(em), &rows[em].block(ep)},
                                      {&rows[ep].block(em), &rows[ep].block(ep)}};
    const SideTrace* side[2] = {&minus, &plus};
    const double jump_sign[2] = {1.0, -1.0};

    for (std::size_t q = 0; q < edge_q.points.size(); ++q) {
      const double s = edge_q.points[q];
      const Vec2 x_left = e.a + s * (e.b - e.a);
      const Vec2 x_right = x_left - e.periodic_offset;
      trace(mesh_, basis_, em, flip ? x_right : x_left, normal, tmp_values, tmp_grads, minus);
      trace(mesh_, basis_, ep, flip ? x_left : x_right, normal, tmp_values, tmp_grads, plus);
      const double wq = edge_q.weights[q] * h;

      for (int ts = 0; ts < 2; ++ts) {      // test side
        for (int us = 0; us < 2; ++us) {    // trial side
          const bool upwind = (us == 0) == minus_is_upwind;
          std::vector<double>& out = *blk[ts][us];
          const SideTrace& tv = *side[ts];
          const SideTrace& uv = *side[us];
          for (int i = 0; i < n; ++i) {
            const double jv = jump_sign[ts] * tv.value[i];
            for (int j = 0; j < n; ++j) {
              double v = upwind ? -cn * uv.value[j] * jv : 0.0;
              if (diffusive) {
                const double ju = jump_sign[us] * uv.value[j];
                v += eps * (uv.half_dn[j] * jv + ju * tv.half_dn[i]) - penalty * ju * jv;
              }
              out[i * n + j] += wq * v;
            }
          }
        }
      }
    }
  }

  std::vector<std::size_t> ptr(ne * n + 1, 0);
  std::vector<int> col;
  std::vector<double> val;
  for (std::size_t k = 0; k < ne; ++k) {
    const BlockRow& r = rows[k];
    for (int i = 0; i < n; ++i) {
      for (std::size_t b = 0; b < r.neighbours.size(); ++b) {
        for (int j = 0; j < n; ++j) {
          col.push_back(r.neighbours[b] * n + j);
          val.push_back(r.blocks[b][i * n + j]);
        }
      }
      ptr[k * n + i + 1] = col.size();
    }
  }
  a_ = SparseMatrix(ne * n, ne * n, std::move(ptr), std::move(col), std::move(val));
}

Vector DgOperator::source(double t, int derivative) const {
  if (derivative < 0 || derivative > 2) throw std::invalid_argument("source derivative must be 0, 1 or 2");
  const int n = basis_.size();
  Vector b(mesh_.num_elements() * n, 0.0);
  if (!problem_.has_source()) return b;
  for (std::size_t k = 0; k < mesh_.num_elements(); ++k) {
    const AffineMap& map = mesh_.element_map(k);
    const double scale = std::sqrt(map.det);
    for (std::size_t q = 0; q < source_rule_.points.size(); ++q) {
      const Vec2 x = map.to_physical(source_rule_.points[q]);
      const double g = problem_.source_derivative(derivative, x.x, x.y, t);
      const double wg = source_rule_.weights[q] * scale * g;
      for (int i = 0; i < n; ++i) b[k * n + i] += wg * source_basis_[q][i];
    }
  }
  return b;
}

Vector DgOperator::sigma(std::span<const double> w, double t) const {
  Vector s = spmv(a_, w);
  if (has_source()) axpy(1.0, source(t, 0), s);
  return s;
}

Vector DgOperator::tau(std::span<const double> sigma, double t) const {
  Vector s = spmv(a_, sigma);
  if (has_source()) axpy(1.0, source(t, 1), s);
  return s;
}

DgOperator assemble(const TriangularMesh& mesh, const BasisSet& basis, const Problem& problem, double eta) {
  return DgOperator(mesh, basis, problem, eta);
}

Vector source_vector(const DgOperator& op, double t, int derivative) { return op.source(t, derivative); }

Vector compute_sigma(const DgOperator& op, std::span<const double> w, double t) {
  if (w.size() != op.size()) throw std::invalid_argument("compute_sigma: dimension mismatch");
  return op.sigma(w, t);
}

Vector compute_tau(const DgOperator& op, std::span<const double> sigma, double t) {
  if (sigma.size() != op.size()) throw std::invalid_argument("compute_tau: dimension mismatch");
  return op.tau(sigma, t);
}

Vector project_l2(const TriangularMesh& mesh, const BasisSet& basis, const SpaceFunction& f) {
  const int n = basis.size();
  const TriangleQuadrature rule = triangle_rule(2 * basis.degree() + 4);
  std::vector<std::vector<double>> values;
  for (const Vec2& q : rule.points) values.push_back(basis.values(q));
  Vector w(mesh.num_elements() * n, 0.0);
  for (std::size_t k = 0; k < mesh.num_elements(); ++k) {
    const AffineMap& map = mesh.element_map(k);
    const double scale = std::sqrt(map.det);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const Vec2 x = map.to_physical(rule.points[q]);
      const double wf = rule.weights[q] * scale * f(x.x, x.y);
      for (int i = 0; i < n; ++i) w[k * n + i] += wf * values[q][i];
    }
  }
  return w;
}

double l2_error(const TriangularMesh& mesh, const BasisSet& basis, std::span<const double> w,
                const SpaceTimeFunction& exact, double t) {
  const int n = basis.size();
  if (w.size() != mesh.num_elements() * static_cast<std::size_t>(n)) {
    throw std::invalid_argument("l2_error: dimension mismatch");
  }
  const TriangleQuadrature rule = triangle_rule(2 * basis.degree() + 4);
  std::vector<std::vector<double>> values;
  for (const Vec2& q : rule.points) values.push_back(basis.values(q));
  double sum = 0.0;
  for (std::size_t k = 0; k < mesh.num_elements(); ++k) {
    const AffineMap& map = mesh.element_map(k);
    const double scale = 1.0 / std::sqrt(map.det);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const Vec2 x = map.to_physical(rule.points[q]);
      double wh = 0.0;
      for (int i = 0; i < n; ++i) wh += w[k * n + i] * values[q][i];
      const double d = scale * wh - exact(x.x, x.y, t);
      sum += rule.weights[q] * map.det * d * d;
    }
  }
  return std::sqrt(sum);
}

double l2_norm(std::span<const double> w) { return norm2(w); }

double evaluate(const TriangularMesh& mesh, const BasisSet& basis, std::span<const double> w, std::size_t k,
                Vec2 x) {
  const AffineMap& map = mesh.element_map(k);
  const std::vector<double> v = basis.values(map.to_reference(x));
  const std::size_t n = v.size();
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += w[k * n + i] * v[i];
  return s / std::sqrt(map.det);
}

}  // namespace mdg
