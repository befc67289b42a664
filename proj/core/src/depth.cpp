#include "sulcdepth/depth.hpp"

#include <Eigen/Geometry>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <cmath>
#include <vector>

namespace sulcdepth {
namespace {

Eigen::VectorXd solve_spd(const Eigen::SparseMatrix<double>& a, const Eigen::VectorXd& b,
                          const SolverConfig& config) {
  if (config.backend == SolverBackend::direct_cholesky) {
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(a);
    if (solver.info() != Eigen::Success)
      throw SolverError("Cholesky factorization failed");
    Eigen::VectorXd x = solver.solve(b);
    if (solver.info() != Eigen::Success) throw SolverError("Cholesky solve failed");
    return x;
  }
  Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper> cg;
  cg.setTolerance(config.cg_tolerance);
  cg.setMaxIterations(config.cg_max_iterations > 0 ? config.cg_max_iterations
                                                   : 10 * static_cast<int>(a.rows()));
  cg.compute(a);
  Eigen::VectorXd x = cg.solve(b);
  if (cg.info() != Eigen::Success)
    throw SolverError("conjugate gradient did not converge (residual " +
                      std::to_string(cg.error()) + ")");
  return x;
}

// Singular alpha = 0 system: S x = b with null space span{1}. Solves the
// reduced SPD system with vertex 0 pinned, then shifts to zero area-mean.
Eigen::VectorXd solve_singular(const Eigen::SparseMatrix<double>& s, const Eigen::VectorXd& b,
                               const Eigen::VectorXd& mass_diag, const SolverConfig& config) {
  const int n = static_cast<int>(s.rows());
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(s.nonZeros());
  for (int col = 0; col < n; ++col)
    for (Eigen::SparseMatrix<double>::InnerIterator it(s, col); it; ++it)
      if (it.row() > 0 && col > 0) triplets.emplace_back(it.row() - 1, col - 1, it.value());
  Eigen::SparseMatrix<double> reduced(n - 1, n - 1);
  reduced.setFromTriplets(triplets.begin(), triplets.end());
  const Eigen::VectorXd x_tail = solve_spd(reduced, b.tail(n - 1), config);
  Eigen::VectorXd x(n);
  x(0) = 0.0;
  x.tail(n - 1) = x_tail;
  const double mean = mass_diag.dot(x) / mass_diag.sum();
  return x.array() - mean;
}

}  // namespace

DepthMap dpf(const TriangleMesh& mesh, double alpha, const CurvatureField& curvature,
             const SolverConfig& config) {
  if (alpha < 0.0) throw DomainError("alpha must be >= 0");
  if (curvature.field.values.size() != mesh.vertex_count())
    throw ValidationError("curvature length does not match vertex count");

  const SparseOperator s = cotan_stiffness(mesh);
  const SparseOperator m = mass_matrix(mesh);
  const Eigen::VectorXd mass_diag = m.matrix.diagonal();
  Eigen::VectorXd rhs = 2.0 * mass_diag.cwiseProduct(curvature.field.values);

  DepthMap out;
  out.method = DepthMethod::dpf;
  out.alpha = alpha;
  if (mesh.is_closed()) out.characteristic_length = characteristic_length(mesh);
  if (alpha == 0.0) {
    if (!mesh.is_closed())
      throw DomainError("alpha = 0 requires a closed mesh");
    // Compatibility projection: subtract the area-weighted mean of the
    // source so the singular system has a solution.
    const double mean_rhs = rhs.sum() / mass_diag.sum();
    rhs -= mean_rhs * mass_diag;
    out.values = {solve_singular(s.matrix, rhs, mass_diag, config), Unit::millimeter};
    return out;
  }
  Eigen::SparseMatrix<double> a = s.matrix + alpha * m.matrix;
  out.values = {solve_spd(a, rhs, config), Unit::millimeter};
  return out;
}

double adapt_alpha(double s, double alpha) {
  if (!(s > 0.0)) throw DomainError("scale factor must be positive");
  return alpha / (s * s);
}

DepthMap dpf_star(const TriangleMesh& mesh, double alpha, const SolverConfig& config,
                  CurvatureMethod curvature) {
  const double len = characteristic_length(mesh);
  const double s = len / 1.0;  // reference surface has characteristic length 1 mm
  const CurvatureField k = mean_curvature(mesh, curvature);
  DepthMap d = dpf(mesh, adapt_alpha(s, alpha), k, config);
  DepthMap out;
  out.values = {d.values.values / s, Unit::dimensionless};
  out.method = DepthMethod::dpf_star;
  out.alpha = alpha;
  out.characteristic_length = len;
  return out;
}

DepthMap dpf_star_abs(const TriangleMesh& mesh, double alpha, const SolverConfig& config,
                      CurvatureMethod curvature) {
  DepthMap star = dpf_star(mesh, alpha, config, curvature);
  DepthMap out;
  out.values = {star.values.values * star.characteristic_length, Unit::millimeter};
  out.method = DepthMethod::dpf_star_abs;
  out.alpha = alpha;
  out.characteristic_length = star.characteristic_length;
  return out;
}

VertexField green_impulse(const TriangleMesh& mesh, double alpha, int p,
                          const SolverConfig& config) {
  if (!(alpha > 0.0)) throw DomainError("alpha must be positive");
  if (p < 0 || p >= mesh.vertex_count()) throw DomainError("source vertex out of range");
  const SparseOperator s = cotan_stiffness(mesh);
  const SparseOperator m = mass_matrix(mesh);
  Eigen::SparseMatrix<double> a = s.matrix + alpha * m.matrix;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(mesh.vertex_count());
  rhs(p) = 1.0;
  return {solve_spd(a, rhs, config), Unit::dimensionless};
}

double spectral_check(const TriangleMesh& mesh, double alpha, int k, CurvatureMethod curvature) {
  if (!(alpha > 0.0)) throw DomainError("alpha must be positive");
  const SparseOperator s = cotan_stiffness(mesh);
  const SparseOperator m = mass_matrix(mesh);
  const EigenPairs pairs = generalized_eigenpairs(s, m, k);
  const CurvatureField curv = mean_curvature(mesh, curvature);
  const DepthMap direct = dpf(mesh, alpha, curv);

  // M-orthonormal eigenvectors: coefficient of f on mode i is phi_i^T M f.
  const Eigen::VectorXd mass_diag = m.matrix.diagonal();
  const Eigen::VectorXd k_coef =
      pairs.eigenvectors.transpose() * mass_diag.cwiseProduct(curv.field.values);
  const Eigen::VectorXd d_coef =
      pairs.eigenvectors.transpose() * mass_diag.cwiseProduct(direct.values.values);

  double max_err = 0.0;
  double max_d = 0.0;
  for (int i = 0; i < pairs.eigenvalues.size(); ++i) {
    const double predicted = 2.0 * k_coef(i) / (alpha + pairs.eigenvalues(i));
    max_err = std::max(max_err, std::abs(d_coef(i) - predicted));
    max_d = std::max(max_d, std::abs(d_coef(i)));
  }
  if (max_d == 0.0) return 0.0;
  return max_err / max_d;
}

namespace {

// Area-weighted unit vertex normals and barycentric vertex areas for a moving
// copy of the surface (connectivity from the original mesh).
void moving_normals(const TriangleMesh::Faces& faces,
                    const Eigen::Matrix<double, Eigen::Dynamic, 3>& pos,
                    Eigen::Matrix<double, Eigen::Dynamic, 3>& normals, Eigen::VectorXd& areas) {
  normals.setZero();
  areas.setZero();
  for (int f = 0; f < faces.rows(); ++f) {
    const Eigen::Vector3d p0 = pos.row(faces(f, 0));
    const Eigen::Vector3d p1 = pos.row(faces(f, 1));
    const Eigen::Vector3d p2 = pos.row(faces(f, 2));
    const Eigen::Vector3d cross = (p1 - p0).cross(p2 - p0);
    const double area = 0.5 * cross.norm();
    for (int k = 0; k < 3; ++k) {
      normals.row(faces(f, k)) += 0.5 * cross.transpose();
      areas(faces(f, k)) += area / 3.0;
    }
  }
  for (int v = 0; v < normals.rows(); ++v) {
    const double norm = normals.row(v).norm();
    if (norm > 0.0) normals.row(v) /= norm;
  }
}

}  // namespace

DepthMap sulc(const TriangleMesh& mesh, int iterations, double step, double lambda,
              double stop_tol) {
  if (iterations < 1) throw DomainError("iterations must be >= 1");
  const double mean_edge = mesh.mean_edge_length();
  if (step <= 0.0) step = 0.1;

  const int n = mesh.vertex_count();
  const auto& neighbors = mesh.vertex_neighbors();
  Eigen::Matrix<double, Eigen::Dynamic, 3> pos = mesh.vertices();

  // Rest lengths d_iv(0), stored per directed neighbor slot.
  std::vector<std::vector<double>> rest(n);
  for (int i = 0; i < n; ++i) {
    rest[i].reserve(neighbors[i].size());
    for (int v : neighbors[i]) rest[i].push_back((pos.row(v) - pos.row(i)).norm());
  }

  Eigen::Matrix<double, Eigen::Dynamic, 3> normals(n, 3);
  Eigen::VectorXd areas(n);
  Eigen::Matrix<double, Eigen::Dynamic, 3> velocity(n, 3);
  Eigen::VectorXd accumulated = Eigen::VectorXd::Zero(n);
  const double limit = 10.0 * mean_edge;

  for (int it = 0; it < iterations; ++it) {
    moving_normals(mesh.faces(), pos, normals, areas);
    for (int i = 0; i < n; ++i) {
      Eigen::Vector3d s_i = Eigen::Vector3d::Zero();
      const auto& ring = neighbors[i];
      for (size_t j = 0; j < ring.size(); ++j) {
        const Eigen::Vector3d e = pos.row(ring[j]) - pos.row(i);
        const double d = e.norm();
        if (d <= 0.0) continue;
        s_i += e * (1.0 + lambda * (d - rest[i][j]) / d);
      }
      velocity.row(i) = s_i / static_cast<double>(ring.size());
    }

    // Remove the area-weighted mean normal velocity (global contraction).
    double normal_flux = 0.0;
    for (int i = 0; i < n; ++i)
      normal_flux += areas(i) * velocity.row(i).dot(normals.row(i));
    const double mean_velocity = normal_flux / areas.sum();

    double max_move = 0.0;
    for (int i = 0; i < n; ++i) {
      velocity.row(i) -= mean_velocity * normals.row(i);
      const Eigen::Vector3d move = step * velocity.row(i).transpose();
      const double norm = move.norm();
      if (norm > limit)
        throw DivergenceError("vertex " + std::to_string(i) + " moved " +
                              std::to_string(norm) + " mm in one step");
      max_move = std::max(max_move, norm);
      accumulated(i) += move.dot(normals.row(i));
      pos.row(i) += move.transpose();
    }
    if (max_move < stop_tol) break;
  }

  DepthMap out;
  // Inflation pushes fundi outward (positive normal motion); flip so crests
  // end up positive like the potential-based estimators.
  out.values = {-accumulated, Unit::millimeter};
  out.method = DepthMethod::sulc;
  if (mesh.is_closed()) out.characteristic_length = characteristic_length(mesh);
  return out;
}

}  // namespace sulcdepth
