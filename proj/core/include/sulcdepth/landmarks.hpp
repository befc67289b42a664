#pragma once

#include <string>
#include <vector>

#include "sulcdepth/mesh.hpp"

namespace sulcdepth {

/// Crest vertices, fundus polylines, and the derived directional lines.
/// Fundus chains have adjacent consecutive vertices; crest and fundus vertex
/// sets are disjoint. Directional lines run fundus -> crest.
struct LandmarkSet {
  std::vector<int> crest;                            // sorted, unique
  std::vector<std::vector<int>> fundus_lines;        // ordered chains
  std::vector<std::vector<int>> directional_lines;   // derived, fundus -> crest

  /// Sorted unique union of all fundus-line vertices.
  std::vector<int> fundus_vertices() const;
};

struct GeodesicPath {
  std::vector<int> chain;  // source first, target last
  double length = 0.0;     // sum of Euclidean edge lengths, mm
};

/// Checks index bounds, fundus chain adjacency, and crest/fundus
/// disjointness. Throws ValidationError naming the offending element.
void validate_landmarks(const TriangleMesh& mesh, const LandmarkSet& landmarks);

/// Crest file: CSV `vertex_index` (one per row); fundi file: CSV
/// `vertex_index,line_id`. Both carry a header row. Returns a validated set
/// with empty directional lines.
LandmarkSet load_landmarks(const TriangleMesh& mesh, const std::string& crest_path,
                           const std::string& fundi_path);

void save_crest(const std::vector<int>& crest, const std::string& path);
void save_fundi(const std::vector<std::vector<int>>& lines, const std::string& path);
/// CSV `path_id,sequence_index,vertex_index`.
void save_directional_lines(const std::vector<std::vector<int>>& lines, const std::string& path);

/// Dijkstra over the edge graph with Euclidean weights; unreachable vertices
/// get +infinity.
Eigen::VectorXd dijkstra_distances(const TriangleMesh& mesh, int source);

/// Graph-shortest path from source to the nearest of the targets (ties
/// broken by smallest target index; equal-length path alternatives resolved
/// by smallest predecessor index). Throws UnreachableError when no target is
/// reachable, EmptyInputError on an empty target set.
GeodesicPath shortest_path(const TriangleMesh& mesh, int source, const std::vector<int>& targets);

/// Fills directional_lines: for every fundus vertex the graph-nearest crest
/// vertex is paired with it, and symmetrically for every crest vertex; pairs
/// present in both maps are kept and their fundus -> crest shortest paths
/// returned. Throws EmptyResultError when no mutual pair exists.
LandmarkSet directional_lines(const TriangleMesh& mesh, const LandmarkSet& landmarks);

}  // namespace sulcdepth
