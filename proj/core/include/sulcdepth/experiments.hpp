#pragma once

#include <string>
#include <vector>

#include "sulcdepth/depth.hpp"
#include "sulcdepth/landmarks.hpp"
#include "sulcdepth/metrics.hpp"
#include "sulcdepth/stats.hpp"

namespace sulcdepth {

std::string method_name(DepthMethod method);
DepthMethod method_from_name(const std::string& name);

/// One-call depth dispatcher shared by the command-line tool and the
/// experiment harnesses. alpha is ignored by sulc and curv.
DepthMap compute_depth(const TriangleMesh& mesh, DepthMethod method, double alpha,
                       const SolverConfig& solver = {},
                       CurvatureMethod curvature = CurvatureMethod::tensor);

struct SurfaceInput {
  std::string id;
  TriangleMesh mesh;
  LandmarkSet landmarks;  // may be empty when the experiment ignores landmarks
};

// Alpha sweep over landmarked surfaces: per-(subject, alpha) metric rows,
// per-alpha medians, the best alpha per metric, and Welch-t equivalence
// ranges (p > 0.05 against the best).
struct Expe1Config {
  std::vector<double> alphas = {0, 10, 50, 150, 400, 500, 1000, 2000};
  CurvatureMethod curvature = CurvatureMethod::tensor;
  SolverConfig solver;
};

struct Expe1Row {
  std::string subject;
  double alpha = 0.0;
  MetricReport report;
};

struct Expe1Result {
  std::vector<Expe1Row> rows;  // subject-major, alpha-minor
  std::vector<double> median_std_crest, median_sep, median_dev;  // aligned with alphas
  double best_alpha_std_crest = 0.0;  // lowest median
  double best_alpha_sep = 0.0;        // highest median
  double best_alpha_dev = 0.0;        // lowest median
  std::vector<double> equivalent_std_crest, equivalent_sep, equivalent_dev;
  std::vector<double> intersection;  // alphas equivalent for all three metrics
};

/// Same-size landmarked suite with graded wrinkle amplitude (1.6 to 2.4 mm
/// on a 30 mm radius, frequency 12) and a seeded prolate bulge: enough
/// between-subject variance for the equivalence tests, large-scale shape
/// variation contaminating the small-alpha regime, and a folding wavelength
/// the alpha sweep actually resolves.
std::vector<SurfaceInput> phantom_suite(int count, unsigned seed);

Expe1Result run_expe1(const std::vector<SurfaceInput>& surfaces, const Expe1Config& config);

// Global-scaling study on one surface: regress depth(s*M) against depth(M)
// per method and scale.
struct Expe2Config {
  std::vector<double> scales = {2, 3, 4, 5};
  std::vector<DepthMethod> methods = {DepthMethod::dpf_star, DepthMethod::sulc};
  double alpha = 500.0;
  CurvatureMethod curvature = CurvatureMethod::tensor;
  SolverConfig solver;
};

struct Expe2Row {
  DepthMethod method = DepthMethod::dpf_star;
  double scale = 1.0;
  double slope = 0.0;
  double r = 0.0;
  double max_rel_dev = 0.0;  // max_i |y_i - x_i| / max_i |x_i|
  Eigen::VectorXd residuals;
};

struct Expe2Result {
  std::vector<Expe2Row> rows;  // method-major, scale-minor
};

Expe2Result run_expe2(const TriangleMesh& mesh, const Expe2Config& config);

// Population study: per-surface depth distributions ordered by size,
// centile table, Wasserstein distance matrix, subgroup KS profile.
struct Expe3Config {
  std::vector<DepthMethod> methods = {DepthMethod::dpf_star, DepthMethod::sulc};
  double alpha = 500.0;
  int window = 10;
  int n_windows = 8;
  CurvatureMethod curvature = CurvatureMethod::tensor;
  SolverConfig solver;
};

struct CentileRow {
  std::string subject;
  double length = 0.0;  // characteristic length, mm
  double p5 = 0, p25 = 0, p50 = 0, p75 = 0, p95 = 0, mean = 0;
};

struct Expe3MethodResult {
  DepthMethod method = DepthMethod::dpf_star;
  std::vector<CentileRow> centiles;  // ascending characteristic length
  DistanceMatrix matrix;
  std::vector<double> ks_profile;
};

struct Expe3Result {
  std::vector<Expe3MethodResult> per_method;
};

/// Throws DomainError when fewer than 2 * window surfaces are given.
Expe3Result run_expe3(const std::vector<SurfaceInput>& surfaces, const Expe3Config& config);

// Report writers (CSV + JSON with the full effective configuration echoed).
void write_expe1_outputs(const Expe1Result& result, const Expe1Config& config,
                         const std::string& out_dir);
void write_expe2_outputs(const Expe2Result& result, const Expe2Config& config,
                         const std::string& out_dir);
void write_expe3_outputs(const Expe3Result& result, const Expe3Config& config,
                         const std::string& out_dir);

void write_metric_report_json(const MetricReport& report, const std::string& path);

}  // namespace sulcdepth
