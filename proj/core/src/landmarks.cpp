#include "sulcdepth/landmarks.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <queue>
#include <set>
#include <sstream>
#include <unordered_set>

#include "sulcdepth/parallel.hpp"

namespace sulcdepth {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Parses non-negative integers from one CSV row; returns false on a header
// row (only tolerated as the first line).
bool parse_int_row(const std::string& line, std::vector<long>& out) {
  out.clear();
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      size_t used = 0;
      const long value = std::stol(cell, &used);
      while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used]))) ++used;
      if (used != cell.size()) return false;
      out.push_back(value);
    } catch (const std::exception&) {
      return false;
    }
  }
  return !out.empty();
}

struct DijkstraResult {
  Eigen::VectorXd dist;
  std::vector<int> pred;
};

DijkstraResult dijkstra(const TriangleMesh& mesh, int source) {
  const int n = mesh.vertex_count();
  DijkstraResult r;
  r.dist = Eigen::VectorXd::Constant(n, kInf);
  r.pred.assign(n, -1);
  r.dist(source) = 0.0;
  using Entry = std::pair<double, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> queue;
  queue.emplace(0.0, source);
  while (!queue.empty()) {
    const auto [d, u] = queue.top();
    queue.pop();
    if (d > r.dist(u)) continue;
    for (int v : mesh.vertex_neighbors()[u]) {
      const double nd = d + (mesh.vertices().row(v) - mesh.vertices().row(u)).norm();
      if (nd < r.dist(v)) {
        r.dist(v) = nd;
        r.pred[v] = u;
        queue.emplace(nd, v);
      } else if (nd == r.dist(v) && u < r.pred[v]) {
        r.pred[v] = u;  // deterministic among equal-length alternatives
      }
    }
  }
  return r;
}

GeodesicPath extract_path(const DijkstraResult& r, int source, int target) {
  GeodesicPath path;
  path.length = r.dist(target);
  for (int v = target; v != -1; v = r.pred[v]) path.chain.push_back(v);
  std::reverse(path.chain.begin(), path.chain.end());
  if (path.chain.front() != source) throw UnreachableError("broken predecessor chain");
  return path;
}

}  // namespace

std::vector<int> LandmarkSet::fundus_vertices() const {
  std::set<int> all;
  for (const auto& line : fundus_lines) all.insert(line.begin(), line.end());
  return {all.begin(), all.end()};
}

void validate_landmarks(const TriangleMesh& mesh, const LandmarkSet& landmarks) {
  const int n = mesh.vertex_count();
  for (int c : landmarks.crest)
    if (c < 0 || c >= n) throw ValidationError("crest vertex out of range", c);
  for (size_t l = 0; l < landmarks.fundus_lines.size(); ++l) {
    const auto& line = landmarks.fundus_lines[l];
    for (int v : line)
      if (v < 0 || v >= n) throw ValidationError("fundus vertex out of range", v);
    for (size_t i = 0; i + 1 < line.size(); ++i)
      if (!mesh.are_adjacent(line[i], line[i + 1]))
        throw ValidationError("fundus line " + std::to_string(l) + " has non-adjacent vertices " +
                                  std::to_string(line[i]) + "," + std::to_string(line[i + 1]),
                              static_cast<long>(l));
  }
  const std::vector<int> fundus = landmarks.fundus_vertices();
  std::unordered_set<int> crest_set(landmarks.crest.begin(), landmarks.crest.end());
  for (int v : fundus)
    if (crest_set.count(v))
      throw ValidationError("vertex labeled as both crest and fundus", v);
}

LandmarkSet load_landmarks(const TriangleMesh& mesh, const std::string& crest_path,
                           const std::string& fundi_path) {
  LandmarkSet set;
  {
    std::ifstream in(crest_path);
    if (!in) throw IoError("cannot open " + crest_path);
    std::string line;
    std::vector<long> row;
    long lineno = 0;
    std::set<int> crest;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.size() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      if (!parse_int_row(line, row) || row.size() != 1) {
        if (lineno == 1) continue;  // header
        throw ParseError(crest_path + ":" + std::to_string(lineno) + ": expected vertex_index");
      }
      crest.insert(static_cast<int>(row[0]));
    }
    set.crest.assign(crest.begin(), crest.end());
  }
  {
    std::ifstream in(fundi_path);
    if (!in) throw IoError("cannot open " + fundi_path);
    std::string line;
    std::vector<long> row;
    long lineno = 0;
    std::map<long, std::vector<int>> lines;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.size() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      if (!parse_int_row(line, row) || row.size() != 2) {
        if (lineno == 1) continue;  // header
        throw ParseError(fundi_path + ":" + std::to_string(lineno) +
                         ": expected vertex_index,line_id");
      }
      lines[row[1]].push_back(static_cast<int>(row[0]));
    }
    for (auto& [id, chain] : lines) set.fundus_lines.push_back(std::move(chain));
  }
  validate_landmarks(mesh, set);
  return set;
}

void save_crest(const std::vector<int>& crest, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << "vertex_index\n";
  for (int v : crest) out << v << '\n';
  if (!out) throw IoError("write failed for " + path);
}

void save_fundi(const std::vector<std::vector<int>>& lines, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << "vertex_index,line_id\n";
  for (size_t l = 0; l < lines.size(); ++l)
    for (int v : lines[l]) out << v << ',' << l << '\n';
  if (!out) throw IoError("write failed for " + path);
}

void save_directional_lines(const std::vector<std::vector<int>>& lines, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << "path_id,sequence_index,vertex_index\n";
  for (size_t p = 0; p < lines.size(); ++p)
    for (size_t i = 0; i < lines[p].size(); ++i)
      out << p << ',' << i << ',' << lines[p][i] << '\n';
  if (!out) throw IoError("write failed for " + path);
}

Eigen::VectorXd dijkstra_distances(const TriangleMesh& mesh, int source) {
  if (source < 0 || source >= mesh.vertex_count()) throw DomainError("source out of range");
  return dijkstra(mesh, source).dist;
}

GeodesicPath shortest_path(const TriangleMesh& mesh, int source, const std::vector<int>& targets) {
  if (source < 0 || source >= mesh.vertex_count()) throw DomainError("source out of range");
  if (targets.empty()) throw EmptyInputError("no targets");
  const DijkstraResult r = dijkstra(mesh, source);
  int best = -1;
  for (int t : targets) {
    if (t < 0 || t >= mesh.vertex_count()) throw DomainError("target out of range");
    if (best == -1 || r.dist(t) < r.dist(best) || (r.dist(t) == r.dist(best) && t < best))
      best = t;
  }
  if (r.dist(best) == kInf) throw UnreachableError("no target reachable from vertex " +
                                                   std::to_string(source));
  return extract_path(r, source, best);
}

LandmarkSet directional_lines(const TriangleMesh& mesh, const LandmarkSet& landmarks) {
  if (landmarks.crest.empty()) throw EmptyInputError("crest set is empty");
  const std::vector<int> fundus = landmarks.fundus_vertices();
  if (fundus.empty()) throw EmptyInputError("fundus set is empty");

  // Graph-nearest crest for each fundus vertex, with the path kept, and
  // graph-nearest fundus for each crest vertex.
  std::vector<GeodesicPath> fundus_to_crest(fundus.size());
  parallel_for(static_cast<int>(fundus.size()), [&](int i) {
    fundus_to_crest[i] = shortest_path(mesh, fundus[i], landmarks.crest);
  });
  std::vector<int> crest_to_fundus(landmarks.crest.size());
  parallel_for(static_cast<int>(landmarks.crest.size()), [&](int i) {
    crest_to_fundus[i] = shortest_path(mesh, landmarks.crest[i], fundus).chain.back();
  });

  std::map<int, int> nearest_fundus_of_crest;
  for (size_t i = 0; i < landmarks.crest.size(); ++i)
    nearest_fundus_of_crest[landmarks.crest[i]] = crest_to_fundus[i];

  LandmarkSet out = landmarks;
  out.directional_lines.clear();
  for (size_t i = 0; i < fundus.size(); ++i) {
    const int crest_vertex = fundus_to_crest[i].chain.back();
    const auto it = nearest_fundus_of_crest.find(crest_vertex);
    if (it != nearest_fundus_of_crest.end() && it->second == fundus[i])
      out.directional_lines.push_back(fundus_to_crest[i].chain);
  }
  if (out.directional_lines.empty())
    throw EmptyResultError("no mutual nearest crest/fundus pair");
  return out;
}

}  // namespace sulcdepth
