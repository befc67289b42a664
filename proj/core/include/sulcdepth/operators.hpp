#pragma once

#include <Eigen/Sparse>

#include "sulcdepth/mesh.hpp"

namespace sulcdepth {

enum class OperatorKind { stiffness, mass };

/// Symmetric sparse operator on vertex fields.
struct SparseOperator {
  Eigen::SparseMatrix<double> matrix;
  OperatorKind kind = OperatorKind::stiffness;

  int dimension() const { return static_cast<int>(matrix.rows()); }
};

enum class CurvatureMethod { tensor, cotan_normal };

/// Mean curvature per vertex, in 1/mm. Positive where the surface is locally
/// convex with respect to the outward normal.
struct CurvatureField {
  VertexField field;
  CurvatureMethod method = CurvatureMethod::tensor;
};

/// Positive semidefinite cotangent stiffness: S = -(cotan Laplacian), with
/// off-diagonal -w_ij, w_ij = (cot a + cot b)/2, diagonal = sum of incident
/// w_ij. Rows sum to zero. Cot values are clamped to [-1e4, 1e4] so
/// near-degenerate triangles cannot produce infinities.
SparseOperator cotan_stiffness(const TriangleMesh& mesh);

/// Diagonal lumped mass from barycentric vertex areas; trace = total area.
SparseOperator mass_matrix(const TriangleMesh& mesh);

/// Per-vertex mean curvature.
///   tensor: per-face second-fundamental-form fit from vertex normal
///           differences, averaged to vertices with mixed-area corner
///           weights; K = half trace.
///   cotan_normal: K = (1/2)|M^-1 S x|, signed by agreement of the Laplacian
///           displacement with the outward vertex normal. Scales exactly as
///           1/s under uniform mesh scaling by s.
CurvatureField mean_curvature(const TriangleMesh& mesh,
                              CurvatureMethod method = CurvatureMethod::tensor);

/// Per-vertex 3-D gradient of a scalar field: constant per-face gradients of
/// the linear interpolant, averaged to vertices with face-area weights.
Eigen::Matrix<double, Eigen::Dynamic, 3> field_gradient(const TriangleMesh& mesh,
                                                        const VertexField& field);

/// First k generalized eigenpairs of (S, M), ascending. Dense solve intended
/// for verification-scale meshes (a few thousand vertices).
/// Returns eigenvalues lambda and vertex-space eigenvectors (M-orthonormal).
struct EigenPairs {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;
};
EigenPairs generalized_eigenpairs(const SparseOperator& stiffness, const SparseOperator& mass,
                                  int k);

}  // namespace sulcdepth
