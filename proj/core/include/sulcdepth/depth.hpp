#pragma once

#include "sulcdepth/mesh.hpp"
#include "sulcdepth/operators.hpp"

namespace sulcdepth {

enum class DepthMethod { dpf, dpf_star, dpf_star_abs, sulc, curv };

/// Per-vertex depth estimate. Units: mm for dpf, dpf_star_abs and sulc;
/// dimensionless for dpf_star; 1/mm for curv.
struct DepthMap {
  VertexField values;
  DepthMethod method = DepthMethod::dpf;
  double alpha = 0.0;
  double characteristic_length = 0.0;  // mm; recorded for the star variants
};

enum class SolverBackend { direct_cholesky, conjugate_gradient };

struct SolverConfig {
  SolverBackend backend = SolverBackend::direct_cholesky;
  double cg_tolerance = 1e-10;  // relative residual
  int cg_max_iterations = 0;    // 0 means 10 * vertex count
};

/// Depth potential: solves the screened Poisson weak form
/// (S + alpha*M) D = 2 M K with S the cotan stiffness and M the lumped mass.
/// alpha has units 1/mm^2. For alpha = 0 the system is singular up to
/// constants: the right-hand side is projected onto the solvable subspace
/// (equivalent to removing the area-weighted mean of K) and the solution is
/// pinned to area-weighted mean zero.
/// Throws DomainError (alpha < 0, alpha = 0 on open mesh), SolverError.
DepthMap dpf(const TriangleMesh& mesh, double alpha, const CurvatureField& curvature,
             const SolverConfig& config = {});

/// Scale transport for the regularization weight: alpha -> alpha / s^2.
double adapt_alpha(double s, double alpha);

/// Scale-invariant depth: s = L / 1 mm with L the characteristic length,
/// D* = (1/s) * dpf(mesh, alpha / s^2). alpha is dimensionless; the default
/// working value is 500. Result is dimensionless.
DepthMap dpf_star(const TriangleMesh& mesh, double alpha, const SolverConfig& config = {},
                  CurvatureMethod curvature = CurvatureMethod::tensor);

/// Millimeter-valued variant: L * dpf_star.
DepthMap dpf_star_abs(const TriangleMesh& mesh, double alpha, const SolverConfig& config = {},
                      CurvatureMethod curvature = CurvatureMethod::tensor);

/// Impulse response of the screened operator: solves (S + alpha*M) G = e_p.
/// On a closed mesh alpha * 1^T M G = 1 (the stiffness integrates to zero).
VertexField green_impulse(const TriangleMesh& mesh, double alpha, int p,
                          const SolverConfig& config = {});

/// Cross-validates the direct solve against the spectral transfer function:
/// in the generalized eigenbasis of (S, M), the solution coefficients obey
/// d_i = 2 k_i / (alpha + lambda_i). Returns
/// max_i |d_i - 2 k_i/(alpha+lambda_i)| / max_i |d_i| over the first k modes.
double spectral_check(const TriangleMesh& mesh, double alpha, int k,
                      CurvatureMethod curvature = CurvatureMethod::tensor);

/// Inflation-based depth. Iteratively relaxes each vertex toward its
/// neighborhood average with a metric-preservation term weighted by lambda,
/// accumulating the normal component of the motion. The area-weighted mean
/// normal velocity is removed each step: it fixes the implicit zero level and
/// stops the global contraction the raw flow would superimpose on every
/// vertex. The accumulated sign is flipped at the end so crests are positive.
/// step is a dimensionless explicit-Euler factor (velocity already carries
/// the mesh's length unit); step <= 0 selects 0.1, safely inside the
/// stability bound of the neighborhood-average relaxation. The flow runs
/// until the largest per-vertex movement of an iteration drops below
/// stop_tol (absolute, mm) or `iterations` steps elapse; the absolute
/// tolerance is what makes the estimate genuinely scale-sensitive.
/// Throws DivergenceError if a vertex moves more than 10 mean edge lengths
/// in a single iteration.
DepthMap sulc(const TriangleMesh& mesh, int iterations = 2000, double step = 0.0,
              double lambda = 0.5, double stop_tol = 1e-3);

}  // namespace sulcdepth
