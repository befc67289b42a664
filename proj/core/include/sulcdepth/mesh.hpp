#pragma once

#include <Eigen/Core>
#include <array>
#include <optional>
#include <vector>

#include "sulcdepth/errors.hpp"

namespace sulcdepth {

/// Physical unit carried by a per-vertex scalar field. Lengths are in
/// millimeters throughout the library.
enum class Unit {
  millimeter,
  inv_millimeter,
  square_millimeter,
  dimensionless,
};

/// One scalar per vertex, tagged with its unit.
struct VertexField {
  Eigen::VectorXd values;
  Unit unit = Unit::dimensionless;
};

/// Total area, enclosed volume and characteristic length of a closed surface.
struct GlobalGeometry {
  double area_mm2 = 0.0;
  double volume_mm3 = 0.0;
  double length_mm = 0.0;  // cube root of the volume
};

/// Immutable triangle surface embedded in R^3 with cached connectivity and
/// per-face/per-vertex geometric quantities.
///
/// Construction validates the surface: face indices in range, no degenerate
/// faces, finite coordinates, edge-manifold (<= 2 faces per edge) and
/// consistent orientation on interior edges. Operations that need a closed
/// surface (volume, characteristic length) additionally check is_closed().
///
/// Instances are immutable after construction and safe to share across
/// threads.
class TriangleMesh {
public:
  using Vertices = Eigen::Matrix<double, Eigen::Dynamic, 3>;
  using Faces = Eigen::Matrix<int, Eigen::Dynamic, 3>;

  /// Validates and builds all cached quantities. Throws ValidationError.
  static TriangleMesh create(Vertices vertices, Faces faces);

  int vertex_count() const { return static_cast<int>(vertices_.rows()); }
  int face_count() const { return static_cast<int>(faces_.rows()); }

  const Vertices& vertices() const { return vertices_; }
  const Faces& faces() const { return faces_; }
  Eigen::Vector3d vertex(int v) const { return vertices_.row(v); }

  /// Sorted one-ring vertex neighborhoods.
  const std::vector<std::vector<int>>& vertex_neighbors() const { return neighbors_; }
  /// Per-face adjacent faces across each edge (-1 on boundary). Entry k is
  /// the face across the edge opposite corner k.
  const std::vector<std::array<int, 3>>& face_neighbors() const { return face_neighbors_; }

  bool are_adjacent(int a, int b) const;

  const Eigen::VectorXd& face_areas() const { return face_areas_; }
  const Vertices& face_normals() const { return face_normals_; }
  /// Area-weighted unit vertex normals (outward for consistently oriented
  /// closed surfaces).
  const Vertices& vertex_normals() const { return vertex_normals_; }

  double total_area() const { return total_area_; }
  double mean_edge_length() const { return mean_edge_length_; }

  /// True when every edge is shared by exactly two faces.
  bool is_closed() const { return is_closed_; }

private:
  TriangleMesh() = default;

  Vertices vertices_;
  Faces faces_;
  std::vector<std::vector<int>> neighbors_;
  std::vector<std::array<int, 3>> face_neighbors_;
  Eigen::VectorXd face_areas_;
  Vertices face_normals_;
  Vertices vertex_normals_;
  double total_area_ = 0.0;
  double mean_edge_length_ = 0.0;
  bool is_closed_ = false;
};

/// Barycentric (lumped) vertex areas: one third of the incident face areas.
/// Sums to the total surface area.
VertexField vertex_areas(const TriangleMesh& mesh);

/// Enclosed volume by the divergence theorem, |sum_f (p0 . (p1 x p2)) / 6|.
/// The absolute value makes the result orientation-sign-invariant.
/// Throws NotClosedError if the mesh has boundary edges.
double enclosed_volume(const TriangleMesh& mesh);

/// Characteristic length L = V^(1/3) of a closed surface.
double characteristic_length(const TriangleMesh& mesh);

GlobalGeometry global_geometry(const TriangleMesh& mesh);

/// Uniform scaling of all vertex coordinates; connectivity unchanged.
/// Throws DomainError for s <= 0.
TriangleMesh scale_mesh(const TriangleMesh& mesh, double s);

}  // namespace sulcdepth
