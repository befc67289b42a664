#pragma once

#include <string>
#include <vector>

#include "sulcdepth/depth.hpp"
#include "sulcdepth/landmarks.hpp"

namespace sulcdepth {

/// Landmark-based quality summary of one depth map.
struct MetricReport {
  std::string method;
  double alpha = 0.0;
  double std_crest = 0.0;
  double sep = 0.0;
  double dev = 0.0;  // degrees
  int n_paths = 0;
  int n_crest_vertices = 0;
  std::vector<double> path_angles;    // per-path mean angle, degrees
  std::vector<double> vertex_angles;  // every contributing interior vertex
};

/// Linear-interpolation percentile of the sample, p in [0, 100].
double percentile(const Eigen::VectorXd& values, double p);

/// Inter-percentile range percentile(D,95) - percentile(D,5). Returns 0 for
/// a constant field; the normalized metrics below reject that case.
double ipr(const DepthMap& depth);

/// Population standard deviation of depth over crest vertices, divided by
/// the IPR. Throws DegenerateError when IPR = 0 or fewer than 2 crest
/// vertices.
double std_crest(const DepthMap& depth, const LandmarkSet& landmarks);

/// (median depth over crests - median depth over fundus vertices) / IPR.
/// 1 is the ideal step profile; throws DegenerateError on empty sets or
/// IPR = 0.
double sep(const DepthMap& depth, const LandmarkSet& landmarks);

/// Mean angular deviation (degrees) between the depth gradient and the
/// directional-line direction. At each interior path vertex the direction is
/// the central difference of the neighboring path vertices (oriented
/// fundus -> crest) projected onto the vertex tangent plane; the angle is
/// taken against the tangent-projected depth gradient. Vertices with zero
/// projected gradient are excluded; paths end-to-end excluded are skipped.
/// Averages per path first, then across paths. Throws DomainError (a path
/// has < 3 vertices), DegenerateError (everything excluded or no paths).
double dev(const TriangleMesh& mesh, const DepthMap& depth, const LandmarkSet& landmarks,
           std::vector<double>* path_angles = nullptr,
           std::vector<double>* vertex_angles = nullptr);

/// Bundles the three metrics; paths with fewer than 3 vertices are dropped
/// before dev (n_paths counts the survivors).
MetricReport compute_metrics(const TriangleMesh& mesh, const DepthMap& depth,
                             const LandmarkSet& landmarks, const std::string& method_name);

}  // namespace sulcdepth
