#include "sulcdepth/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>
#include <Eigen/Geometry>

namespace sulcdepth {
namespace {

// Key for an undirected edge; first <= second.
std::pair<int, int> edge_key(int a, int b) {
  return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
}

}  // namespace

TriangleMesh TriangleMesh::create(Vertices vertices, Faces faces) {
  const int nv = static_cast<int>(vertices.rows());
  const int nf = static_cast<int>(faces.rows());
  if (nv < 3) throw ValidationError("mesh needs at least 3 vertices, got " + std::to_string(nv));
  if (nf < 1) throw ValidationError("mesh needs at least 1 face");
  if (!vertices.allFinite()) {
    for (int v = 0; v < nv; ++v)
      if (!vertices.row(v).allFinite())
        throw ValidationError("non-finite vertex coordinate", v);
  }
  for (int f = 0; f < nf; ++f) {
    const int a = faces(f, 0), b = faces(f, 1), c = faces(f, 2);
    if (a < 0 || a >= nv || b < 0 || b >= nv || c < 0 || c >= nv)
      throw ValidationError("face references vertex out of range", f);
    if (a == b || b == c || a == c)
      throw ValidationError("degenerate face with repeated vertex", f);
  }

  TriangleMesh mesh;
  mesh.vertices_ = std::move(vertices);
  mesh.faces_ = std::move(faces);

  // Edge -> incident (face, whether the edge appears as (lo,hi) in that face).
  struct EdgeUse {
    int count = 0;
    int forward = 0;  // times the edge is traversed lo->hi
    std::array<int, 2> face{-1, -1};
    std::array<int, 2> corner{-1, -1};  // corner opposite the edge
  };
  std::map<std::pair<int, int>, EdgeUse> edges;
  for (int f = 0; f < nf; ++f) {
    for (int k = 0; k < 3; ++k) {
      const int a = mesh.faces_(f, (k + 1) % 3);
      const int b = mesh.faces_(f, (k + 2) % 3);
      EdgeUse& use = edges[edge_key(a, b)];
      if (use.count >= 2)
        throw ValidationError("edge shared by more than two faces", f);
      use.face[use.count] = f;
      use.corner[use.count] = k;
      if (a < b) ++use.forward;
      ++use.count;
    }
  }

  bool closed = true;
  double edge_sum = 0.0;
  mesh.face_neighbors_.assign(nf, {-1, -1, -1});
  for (const auto& [key, use] : edges) {
    edge_sum += (mesh.vertices_.row(key.first) - mesh.vertices_.row(key.second)).norm();
    if (use.count == 1) {
      closed = false;
      continue;
    }
    // Interior edge: consistent orientation means the two faces traverse it
    // in opposite directions.
    if (use.forward != 1)
      throw ValidationError("inconsistent face orientation across edge", use.face[1]);
    mesh.face_neighbors_[use.face[0]][use.corner[0]] = use.face[1];
    mesh.face_neighbors_[use.face[1]][use.corner[1]] = use.face[0];
  }
  mesh.is_closed_ = closed;
  mesh.mean_edge_length_ = edge_sum / static_cast<double>(edges.size());

  mesh.neighbors_.assign(nv, {});
  for (const auto& [key, use] : edges) {
    mesh.neighbors_[key.first].push_back(key.second);
    mesh.neighbors_[key.second].push_back(key.first);
  }
  for (auto& ring : mesh.neighbors_) std::sort(ring.begin(), ring.end());

  mesh.face_areas_.resize(nf);
  mesh.face_normals_.resize(nf, 3);
  mesh.vertex_normals_ = Vertices::Zero(nv, 3);
  double total = 0.0;
  for (int f = 0; f < nf; ++f) {
    const Eigen::Vector3d p0 = mesh.vertices_.row(mesh.faces_(f, 0));
    const Eigen::Vector3d p1 = mesh.vertices_.row(mesh.faces_(f, 1));
    const Eigen::Vector3d p2 = mesh.vertices_.row(mesh.faces_(f, 2));
    const Eigen::Vector3d cross = (p1 - p0).cross(p2 - p0);
    const double doubled = cross.norm();
    if (doubled <= 0.0 || !std::isfinite(doubled))
      throw ValidationError("geometrically degenerate face (zero area)", f);
    mesh.face_areas_(f) = 0.5 * doubled;
    mesh.face_normals_.row(f) = cross / doubled;
    total += 0.5 * doubled;
    for (int k = 0; k < 3; ++k)
      mesh.vertex_normals_.row(mesh.faces_(f, k)) += 0.5 * cross.transpose();
  }
  mesh.total_area_ = total;
  for (int v = 0; v < nv; ++v) {
    const double norm = mesh.vertex_normals_.row(v).norm();
    if (norm > 0.0) mesh.vertex_normals_.row(v) /= norm;
  }
  return mesh;
}

bool TriangleMesh::are_adjacent(int a, int b) const {
  const auto& ring = neighbors_[a];
  return std::binary_search(ring.begin(), ring.end(), b);
}

VertexField vertex_areas(const TriangleMesh& mesh) {
  Eigen::VectorXd areas = Eigen::VectorXd::Zero(mesh.vertex_count());
  for (int f = 0; f < mesh.face_count(); ++f) {
    const double third = mesh.face_areas()(f) / 3.0;
    for (int k = 0; k < 3; ++k) areas(mesh.faces()(f, k)) += third;
  }
  return {std::move(areas), Unit::square_millimeter};
}

double enclosed_volume(const TriangleMesh& mesh) {
  if (!mesh.is_closed())
    throw NotClosedError("enclosed_volume requires a closed surface");
  double six_v = 0.0;
  for (int f = 0; f < mesh.face_count(); ++f) {
    const Eigen::Vector3d p0 = mesh.vertices().row(mesh.faces()(f, 0));
    const Eigen::Vector3d p1 = mesh.vertices().row(mesh.faces()(f, 1));
    const Eigen::Vector3d p2 = mesh.vertices().row(mesh.faces()(f, 2));
    six_v += p0.dot(p1.cross(p2));
  }
  return std::abs(six_v) / 6.0;
}

double characteristic_length(const TriangleMesh& mesh) {
  return std::cbrt(enclosed_volume(mesh));
}

GlobalGeometry global_geometry(const TriangleMesh& mesh) {
  GlobalGeometry g;
  g.area_mm2 = mesh.total_area();
  g.volume_mm3 = enclosed_volume(mesh);
  g.length_mm = std::cbrt(g.volume_mm3);
  return g;
}

TriangleMesh scale_mesh(const TriangleMesh& mesh, double s) {
  if (!(s > 0.0)) throw DomainError("scale factor must be positive");
  return TriangleMesh::create(mesh.vertices() * s, mesh.faces());
}

}  // namespace sulcdepth
