#include "mdg/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>

namespace mdg {

namespace {

constexpr double kPeriodicTolerance = 1e-10;

enum class BoundarySide { none, bottom, top, left, right };

BoundarySide classify(Vec2 p, Vec2 q) {
  auto near = [](double a, double b) { return std::abs(a - b) < kPeriodicTolerance; };
  if (near(p.y, 0.0) && near(q.y, 0.0)) return BoundarySide::bottom;
  if (near(p.y, 1.0) && near(q.y, 1.0)) return BoundarySide::top;
  if (near(p.x, 0.0) && near(q.x, 0.0)) return BoundarySide::left;
  if (near(p.x, 1.0) && near(q.x, 1.0)) return BoundarySide::right;
  return BoundarySide::none;
}

struct SideRef {
  int element;
  int side;
};

}  // namespace

double norm(Vec2 a) { return std::hypot(a.x, a.y); }

Vec2 AffineMap::to_physical(Vec2 ref) const {
  return {origin.x + jacobian[0][0] * ref.x + jacobian[0][1] * ref.y,
          origin.y + jacobian[1][0] * ref.x + jacobian[1][1] * ref.y};
}

Vec2 AffineMap::to_reference(Vec2 phys) const {
  const Vec2 d = phys - origin;
  return {inverse[0][0] * d.x + inverse[0][1] * d.y, inverse[1][0] * d.x + inverse[1][1] * d.y};
}

Vec2 AffineMap::physical_gradient(Vec2 g) const {
  // J^{-T} g
  return {inverse[0][0] * g.x + inverse[1][0] * g.y, inverse[0][1] * g.x + inverse[1][1] * g.y};
}

TriangularMesh::TriangularMesh(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> triangles,
                               int level)
    : vertices_(std::move(vertices)), triangles_(std::move(triangles)), level_(level) {
  if (level_ < 0) throw std::invalid_argument("mesh level must be non-negative");
  build_geometry();
  build_edges();
}

double TriangularMesh::max_edge_length() const {
  double h = 0.0;
  for (const auto& e : edges_) h = std::max(h, e.length);
  return h;
}

void TriangularMesh::build_geometry() {
  areas_.resize(triangles_.size());
  maps_.resize(triangles_.size());
  for (std::size_t k = 0; k < triangles_.size(); ++k) {
    const Vec2 v0 = vertex(k, 0);
    const Vec2 e1 = vertex(k, 1) - v0;
    const Vec2 e2 = vertex(k, 2) - v0;
    AffineMap& m = maps_[k];
    m.origin = v0;
    m.jacobian = {{{e1.x, e2.x}, {e1.y, e2.y}}};
    m.det = e1.x * e2.y - e2.x * e1.y;
    if (!(m.det > 0.0)) {
      throw std::invalid_argument("triangle " + std::to_string(k) + " is not counter-clockwise");
    }
    m.inverse = {{{e2.y / m.det, -e2.x / m.det}, {-e1.y / m.det, e1.x / m.det}}};
    areas_[k] = 0.5 * m.det;
  }
}

void TriangularMesh::build_edges() {
  edges_.clear();
  element_edges_.assign(triangles_.size(), {-1, -1, -1});

  std::map<std::pair<int, int>, SideRef> open;
  std::map<BoundarySide, std::vector<SideRef>> boundary;
  std::vector<std::pair<SideRef, SideRef>> pairs;

  for (std::size_t k = 0; k < triangles_.size(); ++k) {
    for (int s = 0; s < 3; ++s) {
      const int i = triangles_[k][s];
      const int j = triangles_[k][(s + 1) % 3];
      const SideRef ref{static_cast<int>(k), s};
      const BoundarySide where = classify(vertices_[i], vertices_[j]);
      if (where != BoundarySide::none) {
        boundary[where].push_back(ref);
        continue;
      }
      const auto key = std::minmax(i, j);
      auto it = open.find(key);
      if (it == open.end()) {
        open.emplace(key, ref);
      } else {
        pairs.emplace_back(it->second, ref);
        open.erase(it);
      }
    }
  }
  if (!open.empty()) throw std::logic_error("non-conforming mesh: unmatched interior side");

  auto midpoint = [this](SideRef r) {
    const Vec2 p = vertex(r.element, r.side);
    const Vec2 q = vertex(r.element, (r.side + 1) % 3);
    return 0.5 * (p + q);
  };
  auto match = [&](BoundarySide lo, BoundarySide hi, bool compare_x) {
    auto& from = boundary[lo];
    auto& to = boundary[hi];
    if (from.size() != to.size()) throw std::logic_error("periodic boundary sides do not pair up");
    std::vector<bool> used(to.size(), false);
    for (const SideRef& r : from) {
      const Vec2 m = midpoint(r);
      bool found = false;
      for (std::size_t t = 0; t < to.size(); ++t) {
        if (used[t]) continue;
        const Vec2 n = midpoint(to[t]);
        const double d = compare_x ? std::abs(m.x - n.x) : std::abs(m.y - n.y);
        if (d < kPeriodicTolerance) {
          used[t] = true;
          pairs.emplace_back(r, to[t]);
          found = true;
          break;
        }
      }
      if (!found) throw std::logic_error("periodic boundary side without partner");
    }
  };
  match(BoundarySide::bottom, BoundarySide::top, true);
  match(BoundarySide::left, BoundarySide::right, false);

  // Deterministic order: by (left element, left side).
  for (auto& [p, q] : pairs) {
    if (q.element < p.element) std::swap(p, q);
    if (p.element == q.element) throw std::logic_error("edge joins an element to itself");
  }
  std::sort(pairs.begin(), pairs.end(), [](const auto& u, const auto& v) {
    return std::pair(u.first.element, u.first.side) < std::pair(v.first.element, v.first.side);
  });

  edges_.reserve(pairs.size());
  for (const auto& [l, r] : pairs) {
    Edge e;
    e.left = l.element;
    e.right = r.element;
    e.left_side = l.side;
    e.right_side = r.side;
    e.a = vertex(l.element, l.side);
    e.b = vertex(l.element, (l.side + 1) % 3);
    const Vec2 d = e.b - e.a;
    e.length = norm(d);
    e.normal = {d.y / e.length, -d.x / e.length};
    const Vec2 off = midpoint(l) - midpoint(r);
    e.periodic_offset = {std::round(off.x), std::round(off.y)};
    element_edges_[l.element][l.side] = static_cast<int>(edges_.size());
    element_edges_[r.element][r.side] = static_cast<int>(edges_.size());
    edges_.push_back(e);
  }
}

TriangularMesh build_base_mesh() {
  std::vector<Vec2> v{{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}};
  std::vector<std::array<int, 3>> t{{0, 1, 2}, {0, 2, 3}};
  return TriangularMesh(std::move(v), std::move(t), 0);
}

TriangularMesh refine_uniform(const TriangularMesh& mesh) {
  std::vector<Vec2> vertices = mesh.vertices();
  std::map<std::pair<int, int>, int> midpoints;
  auto mid = [&](int i, int j) {
    const auto key = std::minmax(i, j);
    auto it = midpoints.find(key);
    if (it != midpoints.end()) return it->second;
    const int id = static_cast<int>(vertices.size());
    vertices.push_back(0.5 * (vertices[i] + vertices[j]));
    midpoints.emplace(key, id);
    return id;
  };

  std::vector<std::array<int, 3>> triangles;
  triangles.reserve(4 * mesh.num_elements());
  for (const auto& [a, b, c] : mesh.triangles()) {
    const int ab = mid(a, b);
    const int bc = mid(b, c);
    const int ca = mid(c, a);
    triangles.push_back({a, ab, ca});
    triangles.push_back({ab, b, bc});
    triangles.push_back({ca, bc, c});
    triangles.push_back({ab, bc, ca});
  }
  return TriangularMesh(std::move(vertices), std::move(triangles), mesh.level() + 1);
}

TriangularMesh build_mesh(int level) {
  if (level < 0) throw std::invalid_argument("mesh level must be non-negative");
  TriangularMesh mesh = build_base_mesh();
  for (int l = 0; l < level; ++l) mesh = refine_uniform(mesh);
  return mesh;
}

void write_mesh(std::ostream& out, const TriangularMesh& mesh) {
  const auto old = out.precision(17);
  for (const Vec2& v : mesh.vertices()) out << "v " << v.x << ' ' << v.y << '\n';
  for (const auto& t : mesh.triangles()) out << "t " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  out.precision(old);
}

}  // namespace mdg
