#include "sulcdepth/primitives.hpp"

#include <cmath>
#include <map>
#include <vector>

namespace sulcdepth {
namespace {

struct Builder {
  std::vector<Eigen::Vector3d> verts;
  std::vector<std::array<int, 3>> faces;

  TriangleMesh build() const {
    TriangleMesh::Vertices v(verts.size(), 3);
    for (size_t i = 0; i < verts.size(); ++i) v.row(static_cast<int>(i)) = verts[i];
    TriangleMesh::Faces f(faces.size(), 3);
    for (size_t i = 0; i < faces.size(); ++i)
      for (int k = 0; k < 3; ++k) f(static_cast<int>(i), k) = faces[i][k];
    return TriangleMesh::create(std::move(v), std::move(f));
  }
};

}  // namespace

TriangleMesh make_icosphere(int subdivisions, double radius) {
  if (subdivisions < 0) throw DomainError("subdivisions must be >= 0");
  if (!(radius > 0.0)) throw DomainError("radius must be positive");

  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  Builder b;
  b.verts = {
      {-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0},
      {0, -1, t}, {0, 1, t}, {0, -1, -t}, {0, 1, -t},
      {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1},
  };
  b.faces = {
      {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
      {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
      {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
      {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1},
  };

  for (int level = 0; level < subdivisions; ++level) {
    std::map<std::pair<int, int>, int> midpoints;
    auto midpoint = [&](int va, int vb) {
      const auto key = va < vb ? std::make_pair(va, vb) : std::make_pair(vb, va);
      auto it = midpoints.find(key);
      if (it != midpoints.end()) return it->second;
      const int id = static_cast<int>(b.verts.size());
      b.verts.push_back(((b.verts[va] + b.verts[vb]) / 2.0).eval());
      midpoints.emplace(key, id);
      return id;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(b.faces.size() * 4);
    for (const auto& f : b.faces) {
      const int ab = midpoint(f[0], f[1]);
      const int bc = midpoint(f[1], f[2]);
      const int ca = midpoint(f[2], f[0]);
      next.push_back({f[0], ab, ca});
      next.push_back({f[1], bc, ab});
      next.push_back({f[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    b.faces = std::move(next);
  }

  for (auto& v : b.verts) v = v.normalized() * radius;
  return b.build();
}

TriangleMesh make_tetrahedron(double radius) {
  if (!(radius > 0.0)) throw DomainError("radius must be positive");
  const double s = radius / std::sqrt(3.0);
  Builder b;
  b.verts = {{s, s, s}, {s, -s, -s}, {-s, s, -s}, {-s, -s, s}};
  b.faces = {{0, 2, 1}, {0, 1, 3}, {0, 3, 2}, {1, 2, 3}};
  return b.build();
}

TriangleMesh make_cube(double half_extent) {
  if (!(half_extent > 0.0)) throw DomainError("half extent must be positive");
  const double h = half_extent;
  Builder b;
  b.verts = {
      {-h, -h, -h}, {h, -h, -h}, {h, h, -h}, {-h, h, -h},
      {-h, -h, h},  {h, -h, h},  {h, h, h},  {-h, h, h},
  };
  // Outward-oriented quads, each split along its first diagonal.
  const std::array<std::array<int, 4>, 6> quads = {{
      {0, 3, 2, 1},  // z = -h
      {4, 5, 6, 7},  // z = +h
      {0, 1, 5, 4},  // y = -h
      {2, 3, 7, 6},  // y = +h
      {0, 4, 7, 3},  // x = -h
      {1, 2, 6, 5},  // x = +h
  }};
  for (const auto& q : quads) {
    b.faces.push_back({q[0], q[1], q[2]});
    b.faces.push_back({q[0], q[2], q[3]});
  }
  return b.build();
}

TriangleMesh make_grid(int nx, int ny, double dx) {
  if (nx < 1 || ny < 1) throw DomainError("grid needs at least one cell per axis");
  if (!(dx > 0.0)) throw DomainError("cell size must be positive");
  Builder b;
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      b.verts.push_back({i * dx, j * dx, 0.0});
  auto id = [nx](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      b.faces.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      b.faces.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  return b.build();
}

}  // namespace sulcdepth
