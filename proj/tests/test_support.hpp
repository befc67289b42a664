#pragma once

#include <unistd.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <string>

#include <sulcdepth/mesh.hpp>
#include <sulcdepth/phantom.hpp>

namespace test_support {

/// Unique scratch directory, removed on destruction.
class TempDir {
public:
  TempDir() {
    static std::atomic<int> counter{0};
    auto base = std::filesystem::temp_directory_path();
    path_ = base / ("sulcdepth_test_" + std::to_string(::getpid()) + "_" +
                    std::to_string(counter.fetch_add(1)));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string file(const std::string& name) const { return (path_ / name).string(); }
  const std::filesystem::path& path() const { return path_; }

private:
  std::filesystem::path path_;
};

inline void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

inline sulcdepth::TriangleMesh make_icosphere(double radius, int subdivisions) {
  return sulcdepth::make_phantom_mesh({radius, 0.0, 6, subdivisions, 7});
}

inline sulcdepth::TriangleMesh make_tetrahedron() {
  sulcdepth::TriangleMesh::Vertices v(4, 3);
  v << 1, 1, 1, 1, -1, -1, -1, 1, -1, -1, -1, 1;
  sulcdepth::TriangleMesh::Faces f(4, 3);
  f << 0, 2, 1, 0, 1, 3, 0, 3, 2, 1, 2, 3;
  return sulcdepth::TriangleMesh::create(v, f);
}

/// Axis-aligned cube [0,1]^3 as 12 outward-oriented triangles.
inline sulcdepth::TriangleMesh make_cube() {
  sulcdepth::TriangleMesh::Vertices v(8, 3);
  v << 0, 0, 0, 1, 0, 0, 1, 1, 0, 0, 1, 0, 0, 0, 1, 1, 0, 1, 1, 1, 1, 0, 1, 1;
  sulcdepth::TriangleMesh::Faces f(12, 3);
  f << 0, 2, 1, 0, 3, 2,  // bottom (z=0, normal -z)
      4, 5, 6, 4, 6, 7,   // top
      0, 1, 5, 0, 5, 4,   // front (y=0)
      2, 3, 7, 2, 7, 6,   // back
      1, 2, 6, 1, 6, 5,   // right (x=1)
      3, 0, 4, 3, 4, 7;   // left
  return sulcdepth::TriangleMesh::create(v, f);
}

/// Planar grid in the z=0 plane, nx*ny vertices, consistently oriented.
inline sulcdepth::TriangleMesh make_grid(int nx, int ny, double spacing = 1.0) {
  sulcdepth::TriangleMesh::Vertices v(nx * ny, 3);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) v.row(j * nx + i) << i * spacing, j * spacing, 0.0;
  sulcdepth::TriangleMesh::Faces f(2 * (nx - 1) * (ny - 1), 3);
  int k = 0;
  for (int j = 0; j + 1 < ny; ++j)
    for (int i = 0; i + 1 < nx; ++i) {
      int a = j * nx + i, b = a + 1, c = a + nx, d = c + 1;
      f.row(k++) << a, b, d;
      f.row(k++) << a, d, c;
    }
  return sulcdepth::TriangleMesh::create(v, f);
}

inline bool grid_interior(int idx, int nx, int ny) {
  int i = idx % nx, j = idx / nx;
  return i > 0 && i + 1 < nx && j > 0 && j + 1 < ny;
}

/// Triangle strip whose bottom row is a unit-spaced chain; the top row sits
/// close enough that the bottom chain is the unique shortest route end to end.
inline sulcdepth::TriangleMesh make_strip(int bottom_count, double top_height = 0.25) {
  int nb = bottom_count, nt = bottom_count - 1;
  sulcdepth::TriangleMesh::Vertices v(nb + nt, 3);
  for (int i = 0; i < nb; ++i) v.row(i) << i, 0.0, 0.0;
  for (int i = 0; i < nt; ++i) v.row(nb + i) << i + 0.5, top_height, 0.0;
  sulcdepth::TriangleMesh::Faces f(2 * nt - 1, 3);
  int k = 0;
  for (int i = 0; i < nt; ++i) {
    f.row(k++) << i, i + 1, nb + i;
    if (i + 1 < nt) f.row(k++) << i + 1, nb + i + 1, nb + i;
  }
  return sulcdepth::TriangleMesh::create(v, f);
}

inline double max_rel_diff(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  double scale = std::max(a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff());
  if (scale == 0.0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff() / scale;
}

}  // namespace test_support
