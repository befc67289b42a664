#include "sulcdepth/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "sulcdepth/operators.hpp"

namespace sulcdepth {
namespace {

constexpr double kPi = 3.14159265358979323846;

Eigen::VectorXd gather(const Eigen::VectorXd& values, const std::vector<int>& idx) {
  Eigen::VectorXd out(idx.size());
  for (size_t i = 0; i < idx.size(); ++i) out(static_cast<int>(i)) = values(idx[i]);
  return out;
}

double population_std(const Eigen::VectorXd& v) {
  const double mean = v.mean();
  return std::sqrt((v.array() - mean).square().sum() / static_cast<double>(v.size()));
}

}  // namespace

double percentile(const Eigen::VectorXd& values, double p) {
  if (values.size() == 0) throw EmptyInputError("percentile of empty sample");
  if (p < 0.0 || p > 100.0) throw DomainError("percentile must be in [0, 100]");
  std::vector<double> sorted(values.data(), values.data() + values.size());
  std::sort(sorted.begin(), sorted.end());
  const double h = p / 100.0 * static_cast<double>(sorted.size() - 1);
  const size_t lo = static_cast<size_t>(std::floor(h));
  const size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double ipr(const DepthMap& depth) {
  if (depth.values.values.size() < 2) throw DomainError("ipr needs at least 2 vertices");
  return percentile(depth.values.values, 95.0) - percentile(depth.values.values, 5.0);
}

double std_crest(const DepthMap& depth, const LandmarkSet& landmarks) {
  if (landmarks.crest.size() < 2) throw DegenerateError("need at least 2 crest vertices");
  const double range = ipr(depth);
  if (range == 0.0) throw DegenerateError("constant depth field (IPR = 0)");
  return population_std(gather(depth.values.values, landmarks.crest)) / range;
}

double sep(const DepthMap& depth, const LandmarkSet& landmarks) {
  const std::vector<int> fundus = landmarks.fundus_vertices();
  if (landmarks.crest.empty() || fundus.empty())
    throw DegenerateError("sep needs non-empty crest and fundus sets");
  const double range = ipr(depth);
  if (range == 0.0) throw DegenerateError("constant depth field (IPR = 0)");
  const double crest_median = percentile(gather(depth.values.values, landmarks.crest), 50.0);
  const double fundus_median = percentile(gather(depth.values.values, fundus), 50.0);
  return (crest_median - fundus_median) / range;
}

double dev(const TriangleMesh& mesh, const DepthMap& depth, const LandmarkSet& landmarks,
           std::vector<double>* path_angles, std::vector<double>* vertex_angles) {
  if (landmarks.directional_lines.empty()) throw DegenerateError("no directional lines");
  const Eigen::Matrix<double, Eigen::Dynamic, 3> grad = field_gradient(mesh, depth.values);

  double path_sum = 0.0;
  int path_count = 0;
  for (const auto& chain : landmarks.directional_lines) {
    if (chain.size() < 3) throw DomainError("directional line with fewer than 3 vertices");
    double angle_sum = 0.0;
    int angle_count = 0;
    for (size_t j = 1; j + 1 < chain.size(); ++j) {
      const int v = chain[j];
      const Eigen::Vector3d normal = mesh.vertex_normals().row(v);
      Eigen::Vector3d dir = mesh.vertices().row(chain[j + 1]) - mesh.vertices().row(chain[j - 1]);
      dir -= dir.dot(normal) * normal;
      Eigen::Vector3d g = grad.row(v);
      g -= g.dot(normal) * normal;
      const double dn = dir.norm(), gn = g.norm();
      if (dn == 0.0 || gn == 0.0) continue;  // flat spot or degenerate chord
      const double cosine = std::clamp(dir.dot(g) / (dn * gn), -1.0, 1.0);
      const double angle = std::acos(cosine) * 180.0 / kPi;
      angle_sum += angle;
      ++angle_count;
      if (vertex_angles) vertex_angles->push_back(angle);
    }
    if (angle_count == 0) continue;
    const double path_mean = angle_sum / angle_count;
    if (path_angles) path_angles->push_back(path_mean);
    path_sum += path_mean;
    ++path_count;
  }
  if (path_count == 0) throw DegenerateError("every path vertex had a degenerate gradient");
  return path_sum / path_count;
}

MetricReport compute_metrics(const TriangleMesh& mesh, const DepthMap& depth,
                             const LandmarkSet& landmarks, const std::string& method_name) {
  MetricReport report;
  report.method = method_name;
  report.alpha = depth.alpha;
  report.n_crest_vertices = static_cast<int>(landmarks.crest.size());
  report.std_crest = std_crest(depth, landmarks);
  report.sep = sep(depth, landmarks);

  LandmarkSet usable = landmarks;
  usable.directional_lines.clear();
  for (const auto& chain : landmarks.directional_lines)
    if (chain.size() >= 3) usable.directional_lines.push_back(chain);
  report.n_paths = static_cast<int>(usable.directional_lines.size());
  report.dev = dev(mesh, depth, usable, &report.path_angles, &report.vertex_angles);
  return report;
}

}  // namespace sulcdepth
