#pragma once

#include <string>
#include <vector>

#include "sulcdepth/depth.hpp"

namespace sulcdepth {

/// Pairwise 1-D Wasserstein distances between subjects, rows/columns sorted
/// by characteristic length ascending.
struct DistanceMatrix {
  Eigen::MatrixXd distances;
  std::vector<std::string> ids;    // per row, in sorted order
  std::vector<double> lengths;     // characteristic lengths, ascending
  std::string method;
};

struct RegressionResult {
  double slope = 0.0;
  double intercept = 0.0;
  double r = 0.0;  // Pearson correlation; 0 by convention when var(y) = 0
  Eigen::VectorXd residuals;
};

struct WelchResult {
  double t = 0.0;
  double df = 0.0;
  double p = 1.0;  // two-sided
};

/// Exact W1 between the empirical distributions. Equal sizes reduce to the
/// mean absolute difference of the sorted samples; unequal sizes use the
/// quantile-function integral over the merged breakpoints.
double wasserstein1d(const std::vector<double>& a, const std::vector<double>& b);

/// Weighted variant (weights > 0, need not be normalized). With uniform
/// weights this equals wasserstein1d; used for area-weighted sensitivity
/// checks.
double wasserstein1d_weighted(const std::vector<double>& a, const std::vector<double>& wa,
                              const std::vector<double>& b, const std::vector<double>& wb);

/// Two-sample Kolmogorov-Smirnov statistic sup_x |ECDF_a - ECDF_b|, in
/// [0, 1]. No p-value.
double ks_two_sample(const std::vector<double>& a, const std::vector<double>& b);

/// Welch unequal-variance t-test with Welch-Satterthwaite degrees of freedom
/// and two-sided p from the t CDF. Throws DegenerateError when both sample
/// variances are zero, DomainError when a sample has fewer than 2 points.
WelchResult welch_ttest(const std::vector<double>& a, const std::vector<double>& b);

/// Regularized incomplete beta function I_x(a, b), absolute accuracy ~1e-12.
double regularized_incomplete_beta(double a, double b, double x);

/// Ordinary least squares y ~ slope*x + intercept. Throws DegenerateError
/// when x has zero variance or fewer than 2 points are given.
RegressionResult linear_regression(const std::vector<double>& x, const std::vector<double>& y);

/// Pairwise wasserstein1d over the per-vertex values of each map; subjects
/// sorted by the characteristic_length recorded on the maps. ids must be
/// empty or match maps in size (defaults to subject_<input index>).
DistanceMatrix distance_matrix(const std::vector<DepthMap>& maps,
                               const std::vector<std::string>& ids = {},
                               const std::string& method = "");

/// KS statistic of each window's within-window distances (strict upper
/// triangle) against the reference window holding the largest subjects.
/// Windows of `window` consecutive size-ordered subjects, evenly spaced;
/// the last window is the reference, so the profile ends with 0.
/// Throws DomainError when window < 2, n_windows < 1 or window > n.
std::vector<double> subgroup_ks_profile(const DistanceMatrix& matrix, int window, int n_windows);

void save_distance_matrix(const DistanceMatrix& matrix, const std::string& path);

}  // namespace sulcdepth
