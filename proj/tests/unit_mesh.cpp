#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include <sulcdepth/mesh.hpp>
#include <sulcdepth/mesh_io.hpp>

#include "test_support.hpp"

using namespace sulcdepth;
using namespace test_support;

namespace {

const char* kTetraPly =
    "ply\n"
    "format ascii 1.0\n"
    "element vertex 4\n"
    "property float x\n"
    "property float y\n"
    "property float z\n"
    "element face 4\n"
    "property list uchar int vertex_indices\n"
    "end_header\n"
    "1 1 1\n"
    "1 -1 -1\n"
    "-1 1 -1\n"
    "-1 -1 1\n"
    "3 0 2 1\n"
    "3 0 1 3\n"
    "3 0 3 2\n"
    "3 1 2 3\n";

}  // namespace

TEST_CASE("ascii ply tetrahedron loads as a closed mesh") {
  TempDir dir;
  write_text(dir.file("tet.ply"), kTetraPly);
  TriangleMesh m = load_mesh(dir.file("tet.ply"));
  CHECK(m.vertex_count() == 4);
  CHECK(m.face_count() == 4);
  CHECK(m.is_closed());
}

TEST_CASE("obj quad faces are fan-triangulated") {
  TempDir dir;
  write_text(dir.file("quad.obj"),
             "v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nf 1 2 3 4\n");
  TriangleMesh m = load_mesh(dir.file("quad.obj"));
  CHECK(m.vertex_count() == 4);
  CHECK(m.face_count() == 2);
}

TEST_CASE("obj accepts v//n face records and negative indices") {
  TempDir dir;
  write_text(dir.file("f.obj"),
             "v 0 0 0\nv 1 0 0\nv 0 1 0\nvn 0 0 1\nf 1//1 2//1 3//1\n");
  CHECK(load_mesh(dir.file("f.obj")).face_count() == 1);
  write_text(dir.file("neg.obj"), "v 0 0 0\nv 1 0 0\nv 0 1 0\nf -3 -2 -1\n");
  CHECK(load_mesh(dir.file("neg.obj")).face_count() == 1);
}

TEST_CASE("face index out of range is rejected with the offending element") {
  TempDir dir;
  std::string ply = kTetraPly;
  ply.replace(ply.find("3 1 2 3"), 7, "3 1 2 99");
  write_text(dir.file("bad.ply"), ply);
  try {
    load_mesh(dir.file("bad.ply"));
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(e.element == 3);
  }
}

TEST_CASE("structural validation rejects broken meshes") {
  TriangleMesh::Vertices v(4, 3);
  v << 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 1;

  SUBCASE("repeated vertex in a face") {
    TriangleMesh::Faces f(1, 3);
    f << 0, 1, 1;
    CHECK_THROWS_AS(TriangleMesh::create(v, f), ValidationError);
  }
  SUBCASE("non-finite coordinate") {
    TriangleMesh::Vertices bad = v;
    bad(2, 1) = std::nan("");
    TriangleMesh::Faces f(1, 3);
    f << 0, 1, 2;
    CHECK_THROWS_AS(TriangleMesh::create(bad, f), ValidationError);
  }
  SUBCASE("edge shared by three faces") {
    TriangleMesh::Faces f(3, 3);
    f << 0, 1, 2, 0, 3, 1, 1, 0, 3;
    CHECK_THROWS_AS(TriangleMesh::create(v, f), ValidationError);
  }
  SUBCASE("inconsistent orientation across an interior edge") {
    TriangleMesh::Faces f(2, 3);
    f << 0, 1, 2, 0, 1, 3;
    CHECK_THROWS_AS(TriangleMesh::create(v, f), ValidationError);
  }
  SUBCASE("zero-area face") {
    TriangleMesh::Vertices flat(3, 3);
    flat << 0, 0, 0, 1, 0, 0, 2, 0, 0;
    TriangleMesh::Faces f(1, 3);
    f << 0, 1, 2;
    CHECK_THROWS_AS(TriangleMesh::create(flat, f), ValidationError);
  }
}

TEST_CASE("barycentric vertex areas split faces a third each and sum to the total") {
  TriangleMesh::Vertices v(3, 3);
  v << 0, 0, 0, 1, 0, 0, 0.5, std::sqrt(3.0) / 2.0, 0;
  TriangleMesh::Faces f(1, 3);
  f << 0, 1, 2;
  TriangleMesh tri = TriangleMesh::create(v, f);
  VertexField areas = vertex_areas(tri);
  double third = std::sqrt(3.0) / 4.0 / 3.0;
  for (int i = 0; i < 3; ++i) CHECK(areas.values(i) == doctest::Approx(third).epsilon(1e-12));

  TriangleMesh sphere = make_icosphere(1.0, 3);
  double total = vertex_areas(sphere).values.sum();
  CHECK(total == doctest::Approx(sphere.total_area()).epsilon(1e-10));
  CHECK(total == doctest::Approx(4.0 * std::numbers::pi).epsilon(0.01));
}

TEST_CASE("vertex areas scale quadratically") {
  TriangleMesh m = make_icosphere(1.0, 2);
  TriangleMesh s = scale_mesh(m, 2.5);
  Eigen::VectorXd a = vertex_areas(m).values, b = vertex_areas(s).values;
  CHECK(max_rel_diff(b, Eigen::VectorXd(a * 6.25)) < 1e-10);
}

TEST_CASE("enclosed volume matches analytic solids") {
  CHECK(enclosed_volume(make_cube()) == doctest::Approx(1.0).epsilon(1e-12));
  double v = enclosed_volume(make_icosphere(1.0, 3));
  CHECK(v == doctest::Approx(4.0 * std::numbers::pi / 3.0).epsilon(0.01));
}

TEST_CASE("volume is orientation-sign-invariant and needs a closed surface") {
  TriangleMesh cube = make_cube();
  TriangleMesh::Faces flipped = cube.faces();
  flipped.col(1).swap(flipped.col(2));
  TriangleMesh inward = TriangleMesh::create(cube.vertices(), flipped);
  CHECK(enclosed_volume(inward) == doctest::Approx(1.0).epsilon(1e-12));

  TriangleMesh::Vertices v(3, 3);
  v << 0, 0, 0, 1, 0, 0, 0, 1, 0;
  TriangleMesh::Faces f(1, 3);
  f << 0, 1, 2;
  TriangleMesh open = TriangleMesh::create(v, f);
  CHECK_FALSE(open.is_closed());
  CHECK_THROWS_AS(enclosed_volume(open), NotClosedError);
  CHECK_THROWS_AS(characteristic_length(open), NotClosedError);
}

TEST_CASE("characteristic length is the cube root of the volume") {
  TriangleMesh cube2 = scale_mesh(make_cube(), 2.0);
  CHECK(characteristic_length(cube2) == doctest::Approx(2.0).epsilon(1e-12));

  TriangleMesh ph = make_phantom_mesh({20.0, 2.0, 6, 3, 3});
  CHECK(characteristic_length(ph) ==
        doctest::Approx(std::cbrt(enclosed_volume(ph))).epsilon(1e-12));

  GlobalGeometry g = global_geometry(ph);
  CHECK(g.area_mm2 == doctest::Approx(ph.total_area()).epsilon(1e-12));
  CHECK(g.volume_mm3 == doctest::Approx(enclosed_volume(ph)).epsilon(1e-12));
  CHECK(g.length_mm == doctest::Approx(std::cbrt(g.volume_mm3)).epsilon(1e-12));
}

TEST_CASE("scaling laws: area s^2, volume s^3, length s") {
  TriangleMesh m = make_phantom_mesh({15.0, 1.5, 6, 3, 5});
  for (double s : {2.0, 3.0, 5.0}) {
    TriangleMesh sm = scale_mesh(m, s);
    CHECK(sm.total_area() == doctest::Approx(s * s * m.total_area()).epsilon(1e-10));
    CHECK(enclosed_volume(sm) ==
          doctest::Approx(s * s * s * enclosed_volume(m)).epsilon(1e-10));
    CHECK(characteristic_length(sm) ==
          doctest::Approx(s * characteristic_length(m)).epsilon(1e-10));
  }
}

TEST_CASE("scale_mesh identity and domain checks") {
  TriangleMesh m = make_tetrahedron();
  TriangleMesh same = scale_mesh(m, 1.0);
  CHECK((same.vertices() - m.vertices()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(same.faces() == m.faces());
  CHECK_THROWS_AS(scale_mesh(m, 0.0), DomainError);
  CHECK_THROWS_AS(scale_mesh(m, -2.0), DomainError);
}

TEST_CASE("binary ply round-trip is exact") {
  TempDir dir;
  TriangleMesh m = make_phantom_mesh({10.0, 1.0, 5, 2, 9});
  save_mesh(m, dir.file("m.ply"));
  TriangleMesh back = load_mesh(dir.file("m.ply"));
  CHECK((back.vertices() - m.vertices()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(back.faces() == m.faces());
}

TEST_CASE("ascii ply round-trip preserves coordinates to 1e-6") {
  TempDir dir;
  TriangleMesh m = make_phantom_mesh({10.0, 1.0, 5, 2, 9});
  save_mesh(m, dir.file("m.ply"), PlyEncoding::ascii);
  TriangleMesh back = load_mesh(dir.file("m.ply"));
  CHECK((back.vertices() - m.vertices()).cwiseAbs().maxCoeff() < 1e-6);
  CHECK(back.faces() == m.faces());
}

TEST_CASE("format auto-detection falls back to content sniffing") {
  TempDir dir;
  write_text(dir.file("noext"), kTetraPly);
  CHECK(load_mesh(dir.file("noext")).vertex_count() == 4);
}

TEST_CASE("io failures carry distinct error types") {
  TempDir dir;
  CHECK_THROWS_AS(load_mesh(dir.file("absent.ply")), IoError);
  write_text(dir.file("garbage.ply"), "ply\nformat ascii 1.0\nelement vertex nope\n");
  CHECK_THROWS_AS(load_mesh(dir.file("garbage.ply")), ParseError);
  write_text(dir.file("trunc.ply"), kTetraPly + std::string());
  std::string t = read_text(dir.file("trunc.ply"));
  write_text(dir.file("trunc.ply"), t.substr(0, t.size() - 20));
  CHECK_THROWS_AS(load_mesh(dir.file("trunc.ply")), ParseError);
}

TEST_CASE("save_field writes an indexed csv that round-trips") {
  TempDir dir;
  TriangleMesh tet = make_tetrahedron();

  VertexField zeros{Eigen::VectorXd::Zero(4), Unit::millimeter};
  save_field(tet, zeros, dir.file("zeros.csv"));
  std::string text = read_text(dir.file("zeros.csv"));
  CHECK(text.substr(0, 18) == "vertex_index,value");
  CHECK(std::count(text.begin(), text.end(), '\n') == 5);
  CHECK(text.find('\r') == std::string::npos);

  VertexField field{Eigen::VectorXd::Random(4), Unit::millimeter};
  save_field(tet, field, dir.file("f.csv"));
  VertexField back = load_field(dir.file("f.csv"));
  CHECK((back.values - field.values).cwiseAbs().maxCoeff() < 1e-12);

  VertexField wrong{Eigen::VectorXd::Zero(3), Unit::millimeter};
  CHECK_THROWS_AS(save_field(tet, wrong, dir.file("w.csv")), ValidationError);
}

TEST_CASE("save_field with a .ply path emits a quality property") {
  TempDir dir;
  TriangleMesh tet = make_tetrahedron();
  VertexField field{Eigen::VectorXd::LinSpaced(4, 0.0, 3.0), Unit::millimeter};
  save_field(tet, field, dir.file("q.ply"));
  std::string text = read_text(dir.file("q.ply"));
  CHECK(text.find("property double quality") != std::string::npos);
  TriangleMesh back = load_mesh(dir.file("q.ply"));
  CHECK(back.vertex_count() == 4);
  CHECK((back.vertices() - tet.vertices()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("vertex neighborhoods are sorted and symmetric") {
  TriangleMesh m = make_icosphere(1.0, 2);
  const auto& nbrs = m.vertex_neighbors();
  for (int i = 0; i < m.vertex_count(); ++i) {
    CHECK(std::is_sorted(nbrs[i].begin(), nbrs[i].end()));
    for (int j : nbrs[i]) {
      CHECK(m.are_adjacent(i, j));
      CHECK(std::binary_search(nbrs[j].begin(), nbrs[j].end(), i));
    }
  }
}
