#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <vector>

namespace mdg {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
  friend bool operator==(Vec2, Vec2) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
double norm(Vec2 a);

/// Affine map x = origin + J (xi, eta) from the reference triangle
/// {(0,0),(1,0),(0,1)} onto a physical element.
struct AffineMap {
  Vec2 origin;
  std::array<std::array<double, 2>, 2> jacobian{};
  std::array<std::array<double, 2>, 2> inverse{};
  double det = 0.0;

  Vec2 to_physical(Vec2 ref) const;
  Vec2 to_reference(Vec2 phys) const;
  /// Maps a reference gradient to a physical one (J^{-T} g).
  Vec2 physical_gradient(Vec2 ref_grad) const;
};

/// Logical edge shared by two element sides. The normal points from the
/// left element (lower index, the "-" side) into the right element.
struct Edge {
  Vec2 a;  ///< endpoints as traversed by the left element's side
  Vec2 b;
  double length = 0.0;
  Vec2 normal;
  int left = -1;
  int right = -1;
  int left_side = -1;
  int right_side = -1;
  /// x_left = x_right + periodic_offset for the two physical traces.
  Vec2 periodic_offset;
};

/// Periodic triangulation of the unit square.
///
/// Vertices on opposite boundaries are kept as distinct physical points;
/// periodicity lives entirely in the edge pairing. Local side s of a
/// triangle joins its vertices s and (s+1) mod 3.
class TriangularMesh {
 public:
  TriangularMesh(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> triangles, int level);

  const std::vector<Vec2>& vertices() const { return vertices_; }
  const std::vector<std::array<int, 3>>& triangles() const { return triangles_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<double>& element_areas() const { return areas_; }
  const AffineMap& element_map(std::size_t k) const { return maps_[k]; }
  /// Edge index adjacent to local side s of element k.
  int element_edge(std::size_t k, int side) const { return element_edges_[k][side]; }
  int level() const { return level_; }

  std::size_t num_elements() const { return triangles_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  Vec2 vertex(std::size_t k, int local) const { return vertices_[triangles_[k][local]]; }
  double max_edge_length() const;

 private:
  void build_geometry();
  void build_edges();

  std::vector<Vec2> vertices_;
  std::vector<std::array<int, 3>> triangles_;
  std::vector<Edge> edges_;
  std::vector<double> areas_;
  std::vector<AffineMap> maps_;
  std::vector<std::array<int, 3>> element_edges_;
  int level_ = 0;
};

/// Unit square split along the diagonal (0,0)-(1,1) into two triangles.
TriangularMesh build_base_mesh();

/// Red refinement: children 4k..4k+3 of element k are the three corner
/// triangles followed by the midpoint triangle.
TriangularMesh refine_uniform(const TriangularMesh& mesh);

/// Base mesh refined `level` times.
TriangularMesh build_mesh(int level);

/// Debug dump: `v x y` per vertex, `t i j k` per triangle.
void write_mesh(std::ostream& out, const TriangularMesh& mesh);

}  // namespace mdg
