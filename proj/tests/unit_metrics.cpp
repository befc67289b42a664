#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <sulcdepth/depth.hpp>
#include <sulcdepth/metrics.hpp>
#include <sulcdepth/phantom.hpp>

#include "test_support.hpp"

using namespace sulcdepth;
using namespace test_support;

namespace {

DepthMap as_depth(Eigen::VectorXd values) {
  DepthMap d;
  d.values = {std::move(values), Unit::millimeter};
  d.method = DepthMethod::dpf_star;
  return d;
}

/// 20-vertex grid field whose sorted values are 9 zeros, 1, 3, 9 fours:
/// the 5th/95th percentiles land on 0 and 4, so the IPR is exactly 4.
struct StepFixture {
  TriangleMesh mesh = make_grid(5, 4);
  DepthMap depth;
  LandmarkSet landmarks;

  StepFixture() {
    Eigen::VectorXd v(20);
    v.setZero();
    for (int i = 11; i < 20; ++i) v(i) = 4.0;
    v(9) = 1.0;
    v(10) = 3.0;
    depth = as_depth(v);
    landmarks.crest = {15, 16, 17, 18, 19};
    landmarks.fundus_lines = {{0, 1, 2, 3, 4}};
  }
};

}  // namespace

TEST_CASE("percentiles interpolate linearly between order statistics") {
  Eigen::VectorXd v(6);
  v << 3.0, 1.0, 4.0, 1.5, 9.0, 2.6;
  CHECK(percentile(v, 5) == doctest::Approx(1.125).epsilon(1e-12));
  CHECK(percentile(v, 25) == doctest::Approx(1.775).epsilon(1e-12));
  CHECK(percentile(v, 50) == doctest::Approx(2.8).epsilon(1e-12));
  CHECK(percentile(v, 75) == doctest::Approx(3.75).epsilon(1e-12));
  CHECK(percentile(v, 95) == doctest::Approx(7.75).epsilon(1e-12));
  CHECK(percentile(v, 0) == 1.0);
  CHECK(percentile(v, 100) == 9.0);
  CHECK_THROWS_AS(percentile(v, -1), DomainError);
  CHECK_THROWS_AS(percentile(Eigen::VectorXd(), 50), EmptyInputError);
}

TEST_CASE("inter-percentile range on a uniform ramp") {
  DepthMap d = as_depth(Eigen::VectorXd::LinSpaced(101, 0.0, 100.0));
  CHECK(ipr(d) == doctest::Approx(90.0).epsilon(1e-12));

  DepthMap affine = as_depth(2.5 * Eigen::VectorXd::LinSpaced(101, 0.0, 100.0) +
                             Eigen::VectorXd::Constant(101, 7.0));
  CHECK(ipr(affine) == doctest::Approx(2.5 * 90.0).epsilon(1e-12));

  CHECK(ipr(as_depth(Eigen::VectorXd::Constant(10, 3.0))) == 0.0);
  CHECK_THROWS_AS(ipr(as_depth(Eigen::VectorXd::Constant(1, 3.0))), DomainError);
}

TEST_CASE("crest flatness: zero when depth is constant along crests") {
  StepFixture fx;
  LandmarkSet flat;
  flat.crest = {15, 16, 17};
  CHECK(std_crest(fx.depth, flat) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("crest flatness hand value and affine invariance") {
  StepFixture fx;
  LandmarkSet lm;
  lm.crest = {9, 10};  // depth values 1 and 3: population std 1, over IPR 4
  CHECK(std_crest(fx.depth, lm) == doctest::Approx(0.25).epsilon(1e-12));

  DepthMap affine = as_depth(3.0 * fx.depth.values.values +
                             Eigen::VectorXd::Constant(20, -5.0));
  CHECK(std_crest(affine, lm) == doctest::Approx(0.25).epsilon(1e-12));

  CHECK_THROWS_AS(std_crest(as_depth(Eigen::VectorXd::Constant(20, 1.0)), lm),
                  DegenerateError);
  LandmarkSet single;
  single.crest = {0};
  CHECK_THROWS_AS(std_crest(fx.depth, single), DegenerateError);
}

TEST_CASE("separation is 1 for an ideal step profile") {
  StepFixture fx;
  CHECK(sep(fx.depth, fx.landmarks) == doctest::Approx(1.0).epsilon(1e-12));

  DepthMap inverted = as_depth(-fx.depth.values.values);
  CHECK(sep(inverted, fx.landmarks) == doctest::Approx(-1.0).epsilon(1e-12));

  LandmarkSet same;
  same.crest = {0, 1};
  same.fundus_lines = {{2, 3}};
  CHECK(sep(fx.depth, same) == doctest::Approx(0.0).epsilon(1e-12));

  LandmarkSet empty;
  empty.fundus_lines = {{0, 1}};
  CHECK_THROWS_AS(sep(fx.depth, empty), DegenerateError);
}

TEST_CASE("gradient alignment angle on a planar strip") {
  TriangleMesh grid = make_grid(20, 5);
  auto row = [&](int j, int i) { return j * 20 + i; };
  LandmarkSet lm;
  lm.directional_lines.push_back({});
  for (int i = 2; i <= 17; ++i) lm.directional_lines[0].push_back(row(2, i));

  DepthMap dx = as_depth(grid.vertices().col(0));
  CHECK(dev(grid, dx, lm) < 2.0);

  DepthMap dy = as_depth(grid.vertices().col(1));
  CHECK(dev(grid, dy, lm) == doctest::Approx(90.0).epsilon(0.034));

  DepthMap neg = as_depth(-grid.vertices().col(0));
  CHECK(dev(grid, dx, lm) + dev(grid, neg, lm) == doctest::Approx(180.0).epsilon(1e-9));
}

TEST_CASE("alignment angle rejects short paths and all-flat fields") {
  TriangleMesh grid = make_grid(20, 5);
  LandmarkSet lm;
  lm.directional_lines = {{0, 1}};
  DepthMap dx = as_depth(grid.vertices().col(0));
  CHECK_THROWS_AS(dev(grid, dx, lm), DomainError);

  LandmarkSet ok;
  ok.directional_lines = {{0, 1, 2, 3}};
  DepthMap flat = as_depth(Eigen::VectorXd::Zero(grid.vertex_count()));
  CHECK_THROWS_AS(dev(grid, flat, ok), DegenerateError);

  LandmarkSet none;
  CHECK_THROWS_AS(dev(grid, dx, none), DegenerateError);
}

TEST_CASE("alignment angle on the phantom stays in the plausible band") {
  Phantom ph = generate_phantom({30.0, 3.0, 4, 3, 1, 0.18});
  LandmarkSet lm = directional_lines(ph.mesh, ph.landmarks);
  DepthMap d = dpf_star(ph.mesh, 500.0);
  double angle = dev(ph.mesh, d, lm);
  CHECK(angle >= 10.0);
  CHECK(angle <= 35.0);
}

TEST_CASE("metric bundle drops sub-3-vertex paths and reports counts") {
  Phantom ph = generate_phantom({30.0, 3.0, 6, 3, 5});
  LandmarkSet lm = directional_lines(ph.mesh, ph.landmarks);
  int full = static_cast<int>(lm.directional_lines.size());
  lm.directional_lines.push_back({0, 1});  // too short to carry a direction

  DepthMap d = dpf_star(ph.mesh, 500.0);
  MetricReport report = compute_metrics(ph.mesh, d, lm, "dpf_star");
  CHECK(report.n_paths == full);
  CHECK(report.n_crest_vertices == static_cast<int>(lm.crest.size()));
  CHECK(report.method == "dpf_star");
  CHECK(report.dev >= 0.0);
  CHECK(report.dev <= 180.0);
  CHECK(report.std_crest >= 0.0);
  CHECK(!report.path_angles.empty());
  CHECK(report.vertex_angles.size() >= report.path_angles.size());
}

TEST_CASE("metrics are invariant under vertex relabeling") {
  Phantom ph = generate_phantom({20.0, 2.0, 5, 3, 3});
  LandmarkSet lm = directional_lines(ph.mesh, ph.landmarks);
  DepthMap d = dpf_star(ph.mesh, 500.0);
  MetricReport base = compute_metrics(ph.mesh, d, lm, "m");

  int n = ph.mesh.vertex_count();
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937 rng(1234);
  std::shuffle(perm.begin(), perm.end(), rng);  // perm[old] = new

  TriangleMesh::Vertices pv(n, 3);
  for (int i = 0; i < n; ++i) pv.row(perm[i]) = ph.mesh.vertices().row(i);
  TriangleMesh::Faces pf = ph.mesh.faces();
  for (int f = 0; f < pf.rows(); ++f)
    for (int k = 0; k < 3; ++k) pf(f, k) = perm[pf(f, k)];
  TriangleMesh pm = TriangleMesh::create(pv, pf);

  DepthMap pd;
  pd.values.values.resize(n);
  pd.values.unit = d.values.unit;
  pd.method = d.method;
  for (int i = 0; i < n; ++i) pd.values.values(perm[i]) = d.values.values(i);

  LandmarkSet plm;
  for (int c : lm.crest) plm.crest.push_back(perm[c]);
  std::sort(plm.crest.begin(), plm.crest.end());
  for (const auto& line : lm.fundus_lines) {
    std::vector<int> mapped;
    for (int v : line) mapped.push_back(perm[v]);
    plm.fundus_lines.push_back(std::move(mapped));
  }
  for (const auto& line : lm.directional_lines) {
    std::vector<int> mapped;
    for (int v : line) mapped.push_back(perm[v]);
    plm.directional_lines.push_back(std::move(mapped));
  }

  MetricReport permuted = compute_metrics(pm, pd, plm, "m");
  CHECK(permuted.std_crest == doctest::Approx(base.std_crest).epsilon(1e-9));
  CHECK(permuted.sep == doctest::Approx(base.sep).epsilon(1e-9));
  CHECK(permuted.dev == doctest::Approx(base.dev).epsilon(1e-9));
}
