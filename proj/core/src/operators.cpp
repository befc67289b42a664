#include "sulcdepth/operators.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

namespace sulcdepth {
namespace {

constexpr double kCotClamp = 1e4;

double clamped_cot(const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
  // cot of the angle between a and b = (a.b) / |a x b|
  const double cross = a.cross(b).norm();
  const double dot = a.dot(b);
  if (cross <= 0.0) return dot >= 0.0 ? kCotClamp : -kCotClamp;
  return std::clamp(dot / cross, -kCotClamp, kCotClamp);
}

// Mixed Voronoi corner areas (Meyer et al.): true Voronoi split for acute
// triangles; obtuse triangles give half the area to the obtuse corner and a
// quarter to the others.
std::array<double, 3> corner_areas(const Eigen::Vector3d& p0, const Eigen::Vector3d& p1,
                                   const Eigen::Vector3d& p2, double face_area) {
  const std::array<Eigen::Vector3d, 3> p = {p0, p1, p2};
  std::array<double, 3> cot{};
  bool obtuse = false;
  int obtuse_corner = -1;
  for (int k = 0; k < 3; ++k) {
    const Eigen::Vector3d a = p[(k + 1) % 3] - p[k];
    const Eigen::Vector3d b = p[(k + 2) % 3] - p[k];
    cot[k] = clamped_cot(a, b);
    if (cot[k] < 0.0) {
      obtuse = true;
      obtuse_corner = k;
    }
  }
  std::array<double, 3> area{};
  if (obtuse) {
    for (int k = 0; k < 3; ++k)
      area[k] = face_area * (k == obtuse_corner ? 0.5 : 0.25);
    return area;
  }
  for (int k = 0; k < 3; ++k) {
    const double e_next = (p[(k + 2) % 3] - p[k]).squaredNorm();   // edge to k+2, opposite k+1
    const double e_prev = (p[(k + 1) % 3] - p[k]).squaredNorm();   // edge to k+1, opposite k+2
    area[k] = (e_next * cot[(k + 1) % 3] + e_prev * cot[(k + 2) % 3]) / 8.0;
  }
  return area;
}

// Orthonormal basis of the plane with normal n.
void plane_basis(const Eigen::Vector3d& n, Eigen::Vector3d& u, Eigen::Vector3d& v) {
  u = (std::abs(n.x()) > 0.9 ? Eigen::Vector3d(0, 1, 0) : Eigen::Vector3d(1, 0, 0));
  u = (u - u.dot(n) * n).normalized();
  v = n.cross(u);
}

}  // namespace

SparseOperator cotan_stiffness(const TriangleMesh& mesh) {
  const int n = mesh.vertex_count();
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<size_t>(mesh.face_count()) * 12);
  for (int f = 0; f < mesh.face_count(); ++f) {
    const Eigen::Vector3d p0 = mesh.vertices().row(mesh.faces()(f, 0));
    const Eigen::Vector3d p1 = mesh.vertices().row(mesh.faces()(f, 1));
    const Eigen::Vector3d p2 = mesh.vertices().row(mesh.faces()(f, 2));
    const std::array<Eigen::Vector3d, 3> p = {p0, p1, p2};
    for (int k = 0; k < 3; ++k) {
      const int i = mesh.faces()(f, (k + 1) % 3);
      const int j = mesh.faces()(f, (k + 2) % 3);
      const Eigen::Vector3d a = p[(k + 1) % 3] - p[k];
      const Eigen::Vector3d b = p[(k + 2) % 3] - p[k];
      const double w = 0.5 * clamped_cot(a, b);
      triplets.emplace_back(i, j, -w);
      triplets.emplace_back(j, i, -w);
      triplets.emplace_back(i, i, w);
      triplets.emplace_back(j, j, w);
    }
  }
  SparseOperator op;
  op.kind = OperatorKind::stiffness;
  op.matrix.resize(n, n);
  op.matrix.setFromTriplets(triplets.begin(), triplets.end());
  op.matrix.makeCompressed();
  return op;
}

SparseOperator mass_matrix(const TriangleMesh& mesh) {
  const VertexField areas = vertex_areas(mesh);
  const int n = mesh.vertex_count();
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(n);
  for (int v = 0; v < n; ++v) triplets.emplace_back(v, v, areas.values(v));
  SparseOperator op;
  op.kind = OperatorKind::mass;
  op.matrix.resize(n, n);
  op.matrix.setFromTriplets(triplets.begin(), triplets.end());
  op.matrix.makeCompressed();
  return op;
}

namespace {

CurvatureField curvature_tensor(const TriangleMesh& mesh) {
  const int n = mesh.vertex_count();
  Eigen::VectorXd k_sum = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd w_sum = Eigen::VectorXd::Zero(n);
  for (int f = 0; f < mesh.face_count(); ++f) {
    const int i0 = mesh.faces()(f, 0), i1 = mesh.faces()(f, 1), i2 = mesh.faces()(f, 2);
    const Eigen::Vector3d p0 = mesh.vertices().row(i0);
    const Eigen::Vector3d p1 = mesh.vertices().row(i1);
    const Eigen::Vector3d p2 = mesh.vertices().row(i2);
    const Eigen::Vector3d n0 = mesh.vertex_normals().row(i0);
    const Eigen::Vector3d n1 = mesh.vertex_normals().row(i1);
    const Eigen::Vector3d n2 = mesh.vertex_normals().row(i2);

    Eigen::Vector3d u, v;
    plane_basis(mesh.face_normals().row(f).transpose(), u, v);

    // Least-squares fit of the symmetric 2x2 second fundamental form from
    // the finite differences of vertex normals along the three edges:
    //   II * (dp.u, dp.v)^T = (dn.u, dn.v)^T.
    // The half-trace (mean curvature) is invariant to the in-plane frame and
    // to the parallel-transport rotation into the vertex tangent plane, so
    // only the fitted trace is accumulated per corner.
    const std::array<Eigen::Vector3d, 3> dp = {p2 - p1, p0 - p2, p1 - p0};
    const std::array<Eigen::Vector3d, 3> dn = {n2 - n1, n0 - n2, n1 - n0};
    Eigen::Matrix3d ata = Eigen::Matrix3d::Zero();
    Eigen::Vector3d atb = Eigen::Vector3d::Zero();
    for (int e = 0; e < 3; ++e) {
      const double du = dp[e].dot(u), dv = dp[e].dot(v);
      const double gu = dn[e].dot(u), gv = dn[e].dot(v);
      // Rows for unknowns (e, f, g): [du dv 0] -> gu, [0 du dv] -> gv.
      Eigen::Vector3d r1(du, dv, 0.0), r2(0.0, du, dv);
      ata += r1 * r1.transpose() + r2 * r2.transpose();
      atb += r1 * gu + r2 * gv;
    }
    const Eigen::Vector3d efg = ata.ldlt().solve(atb);
    const double k_face = 0.5 * (efg(0) + efg(2));
    if (!std::isfinite(k_face)) continue;

    const auto areas = corner_areas(p0, p1, p2, mesh.face_areas()(f));
    const std::array<int, 3> idx = {i0, i1, i2};
    for (int k = 0; k < 3; ++k) {
      k_sum(idx[k]) += areas[k] * k_face;
      w_sum(idx[k]) += areas[k];
    }
  }
  Eigen::VectorXd values = Eigen::VectorXd::Zero(n);
  for (int vtx = 0; vtx < n; ++vtx)
    if (w_sum(vtx) > 0.0) values(vtx) = k_sum(vtx) / w_sum(vtx);
  return {{std::move(values), Unit::inv_millimeter}, CurvatureMethod::tensor};
}

CurvatureField curvature_cotan_normal(const TriangleMesh& mesh) {
  const SparseOperator S = cotan_stiffness(mesh);
  const VertexField areas = vertex_areas(mesh);
  const int n = mesh.vertex_count();
  Eigen::Matrix<double, Eigen::Dynamic, 3> lap(n, 3);
  for (int c = 0; c < 3; ++c) lap.col(c) = S.matrix * mesh.vertices().col(c);
  Eigen::VectorXd values(n);
  for (int v = 0; v < n; ++v) {
    const Eigen::Vector3d h = lap.row(v).transpose() / areas.values(v);  // 2H * outward normal
    const double mag = 0.5 * h.norm();
    const double sign = h.dot(mesh.vertex_normals().row(v).transpose()) >= 0.0 ? 1.0 : -1.0;
    values(v) = sign * mag;
  }
  return {{std::move(values), Unit::inv_millimeter}, CurvatureMethod::cotan_normal};
}

}  // namespace

CurvatureField mean_curvature(const TriangleMesh& mesh, CurvatureMethod method) {
  return method == CurvatureMethod::tensor ? curvature_tensor(mesh)
                                           : curvature_cotan_normal(mesh);
}

Eigen::Matrix<double, Eigen::Dynamic, 3> field_gradient(const TriangleMesh& mesh,
                                                        const VertexField& field) {
  if (field.values.size() != mesh.vertex_count())
    throw ValidationError("field length does not match vertex count");
  const int n = mesh.vertex_count();
  Eigen::Matrix<double, Eigen::Dynamic, 3> grad =
      Eigen::Matrix<double, Eigen::Dynamic, 3>::Zero(n, 3);
  Eigen::VectorXd w_sum = Eigen::VectorXd::Zero(n);
  for (int f = 0; f < mesh.face_count(); ++f) {
    const int i0 = mesh.faces()(f, 0), i1 = mesh.faces()(f, 1), i2 = mesh.faces()(f, 2);
    const Eigen::Vector3d p0 = mesh.vertices().row(i0);
    const Eigen::Vector3d p1 = mesh.vertices().row(i1);
    const Eigen::Vector3d p2 = mesh.vertices().row(i2);
    const Eigen::Vector3d nrm = mesh.face_normals().row(f);
    const double area = mesh.face_areas()(f);
    // Gradient of the linear interpolant: sum_i f_i (n x e_opp_i) / (2A).
    const Eigen::Vector3d g = (field.values(i0) * nrm.cross(p2 - p1) +
                               field.values(i1) * nrm.cross(p0 - p2) +
                               field.values(i2) * nrm.cross(p1 - p0)) /
                              (2.0 * area);
    for (int k = 0; k < 3; ++k) {
      const int vtx = mesh.faces()(f, k);
      grad.row(vtx) += area * g.transpose();
      w_sum(vtx) += area;
    }
  }
  for (int v = 0; v < n; ++v)
    if (w_sum(v) > 0.0) grad.row(v) /= w_sum(v);
  return grad;
}

EigenPairs generalized_eigenpairs(const SparseOperator& stiffness, const SparseOperator& mass,
                                  int k) {
  const int n = stiffness.dimension();
  if (mass.dimension() != n) throw DomainError("operator dimensions disagree");
  if (k < 1) throw DomainError("need at least one eigenpair");
  k = std::min(k, n);

  // Symmetric reduction B = M^-1/2 S M^-1/2 (M is diagonal positive).
  Eigen::VectorXd m_diag = mass.matrix.diagonal();
  if ((m_diag.array() <= 0.0).any()) throw DomainError("mass matrix must be positive");
  const Eigen::VectorXd inv_sqrt = m_diag.array().rsqrt();
  Eigen::MatrixXd b = Eigen::MatrixXd(stiffness.matrix);
  b = inv_sqrt.asDiagonal() * b * inv_sqrt.asDiagonal();
  b = 0.5 * (b + b.transpose());  // symmetrize against round-off

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(b);
  if (solver.info() != Eigen::Success) throw EigensolverError("dense eigensolve failed");
  EigenPairs out;
  out.eigenvalues = solver.eigenvalues().head(k);
  out.eigenvectors = inv_sqrt.asDiagonal() * solver.eigenvectors().leftCols(k);
  return out;
}

}  // namespace sulcdepth
