#include "sulcdepth/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>

#include <json.hpp>

#include "sulcdepth/operators.hpp"
#include "sulcdepth/parallel.hpp"
#include "sulcdepth/phantom.hpp"

namespace sulcdepth {
namespace {

using nlohmann::json;

constexpr double kEquivalenceP = 0.05;

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  return out;
}

void write_json(const json& j, const std::string& path) {
  std::ofstream out = open_out(path);
  out << j.dump(2) << '\n';
  if (!out) throw IoError("write failed for " + path);
}

std::string tool_version() {
#ifdef SULCDEPTH_VERSION
  return SULCDEPTH_VERSION;
#else
  return "unknown";
#endif
}

double median_of(std::vector<double> v) {
  Eigen::Map<Eigen::VectorXd> map(v.data(), static_cast<int>(v.size()));
  return percentile(map, 50.0);
}

std::string curvature_name(CurvatureMethod m) {
  return m == CurvatureMethod::tensor ? "tensor" : "cotan_normal";
}

std::string solver_name(const SolverConfig& s) {
  return s.backend == SolverBackend::direct_cholesky ? "direct" : "cg";
}

}  // namespace

std::string method_name(DepthMethod method) {
  switch (method) {
    case DepthMethod::dpf: return "dpf";
    case DepthMethod::dpf_star: return "dpf_star";
    case DepthMethod::dpf_star_abs: return "dpf_star_abs";
    case DepthMethod::sulc: return "sulc";
    case DepthMethod::curv: return "curv";
  }
  throw DomainError("unknown depth method");
}

DepthMethod method_from_name(const std::string& name) {
  if (name == "dpf") return DepthMethod::dpf;
  if (name == "dpf_star") return DepthMethod::dpf_star;
  if (name == "dpf_star_abs") return DepthMethod::dpf_star_abs;
  if (name == "sulc") return DepthMethod::sulc;
  if (name == "curv") return DepthMethod::curv;
  throw DomainError("unknown depth method: " + name);
}

DepthMap compute_depth(const TriangleMesh& mesh, DepthMethod method, double alpha,
                       const SolverConfig& solver, CurvatureMethod curvature) {
  switch (method) {
    case DepthMethod::dpf:
      return dpf(mesh, alpha, mean_curvature(mesh, curvature), solver);
    case DepthMethod::dpf_star:
      return dpf_star(mesh, alpha, solver, curvature);
    case DepthMethod::dpf_star_abs:
      return dpf_star_abs(mesh, alpha, solver, curvature);
    case DepthMethod::sulc: {
      return sulc(mesh);
    }
    case DepthMethod::curv: {
      DepthMap map;
      map.values = mean_curvature(mesh, curvature).field;
      map.method = DepthMethod::curv;
      map.alpha = alpha;
      if (mesh.is_closed()) map.characteristic_length = characteristic_length(mesh);
      return map;
    }
  }
  throw DomainError("unknown depth method");
}

// Folding wavelength (~7.9 mm at frequency 12) sits inside the screening
// lengths spanned by the default alpha grid, so the sweep crosses the
// under-resolved-to-resolved transition the way it does on real surfaces.
std::vector<SurfaceInput> phantom_suite(int count, unsigned seed) {
  if (count < 1) throw DomainError("suite needs at least one phantom");
  std::vector<SurfaceInput> surfaces;
  surfaces.reserve(count);
  for (int i = 0; i < count; ++i) {
    PhantomSpec spec;
    spec.radius = 30.0;
    spec.amplitude = count == 1 ? 2.0 : 1.6 + 0.8 * i / (count - 1);
    spec.frequency = 10 + i % 5;
    spec.subdivisions = 5;
    spec.seed = seed + static_cast<unsigned>(i);
    spec.bulge = 0.18;
    Phantom phantom = generate_phantom(spec);
    char name[32];
    std::snprintf(name, sizeof(name), "phantom_%03d", i);
    surfaces.push_back({name, std::move(phantom.mesh), std::move(phantom.landmarks)});
  }
  return surfaces;
}

Expe1Result run_expe1(const std::vector<SurfaceInput>& surfaces, const Expe1Config& config) {
  if (surfaces.empty()) throw EmptyInputError("no surfaces");
  if (config.alphas.empty()) throw EmptyInputError("no alphas");

  // Directional lines depend only on geometry: derive them once per surface.
  // Sequential outer loop; the Dijkstra fan-out inside is already parallel.
  std::vector<LandmarkSet> with_paths;
  with_paths.reserve(surfaces.size());
  for (const auto& surface : surfaces)
    with_paths.push_back(directional_lines(surface.mesh, surface.landmarks));

  const int n_rows = static_cast<int>(surfaces.size() * config.alphas.size());
  Expe1Result result;
  result.rows.resize(n_rows);
  parallel_for(n_rows, [&](int row) {
    const size_t si = row / config.alphas.size();
    const size_t ai = row % config.alphas.size();
    const double alpha = config.alphas[ai];
    const DepthMap depth = dpf_star(surfaces[si].mesh, alpha, config.solver, config.curvature);
    result.rows[row].subject = surfaces[si].id;
    result.rows[row].alpha = alpha;
    result.rows[row].report =
        compute_metrics(surfaces[si].mesh, depth, with_paths[si], "dpf_star");
  });

  // Per-alpha medians across subjects.
  const size_t na = config.alphas.size();
  std::vector<std::vector<double>> std_crest_by_alpha(na), sep_by_alpha(na), dev_by_alpha(na);
  for (const auto& row : result.rows) {
    const size_t ai =
        std::find(config.alphas.begin(), config.alphas.end(), row.alpha) - config.alphas.begin();
    std_crest_by_alpha[ai].push_back(row.report.std_crest);
    sep_by_alpha[ai].push_back(row.report.sep);
    dev_by_alpha[ai].push_back(row.report.dev);
  }
  for (size_t ai = 0; ai < na; ++ai) {
    result.median_std_crest.push_back(median_of(std_crest_by_alpha[ai]));
    result.median_sep.push_back(median_of(sep_by_alpha[ai]));
    result.median_dev.push_back(median_of(dev_by_alpha[ai]));
  }

  const auto argbest = [&](const std::vector<double>& medians, bool lowest) {
    size_t best = 0;
    for (size_t ai = 1; ai < na; ++ai)
      if (lowest ? medians[ai] < medians[best] : medians[ai] > medians[best]) best = ai;
    return best;
  };
  const size_t bi_std = argbest(result.median_std_crest, true);
  const size_t bi_sep = argbest(result.median_sep, false);
  const size_t bi_dev = argbest(result.median_dev, true);
  result.best_alpha_std_crest = config.alphas[bi_std];
  result.best_alpha_sep = config.alphas[bi_sep];
  result.best_alpha_dev = config.alphas[bi_dev];

  // Equivalence range: alphas whose per-subject distribution is not
  // distinguishable from the best one (Welch p > 0.05). With a single
  // subject the test is undefined and the range collapses to the best alpha.
  const auto equivalence = [&](const std::vector<std::vector<double>>& by_alpha, size_t best) {
    std::vector<double> range;
    for (size_t ai = 0; ai < na; ++ai) {
      if (ai == best) {
        range.push_back(config.alphas[ai]);
        continue;
      }
      if (by_alpha[ai].size() < 2) continue;
      if (welch_ttest(by_alpha[ai], by_alpha[best]).p > kEquivalenceP)
        range.push_back(config.alphas[ai]);
    }
    return range;
  };
  result.equivalent_std_crest = equivalence(std_crest_by_alpha, bi_std);
  result.equivalent_sep = equivalence(sep_by_alpha, bi_sep);
  result.equivalent_dev = equivalence(dev_by_alpha, bi_dev);
  for (double alpha : result.equivalent_std_crest) {
    const auto in = [alpha](const std::vector<double>& v) {
      return std::find(v.begin(), v.end(), alpha) != v.end();
    };
    if (in(result.equivalent_sep) && in(result.equivalent_dev))
      result.intersection.push_back(alpha);
  }
  return result;
}

Expe2Result run_expe2(const TriangleMesh& mesh, const Expe2Config& config) {
  if (config.scales.empty() || config.methods.empty())
    throw EmptyInputError("expe2 needs scales and methods");

  Expe2Result result;
  for (DepthMethod method : config.methods) {
    const DepthMap base = compute_depth(mesh, method, config.alpha, config.solver,
                                        config.curvature);
    const double base_max = base.values.values.cwiseAbs().maxCoeff();
    std::vector<Expe2Row> rows(config.scales.size());
    parallel_for(static_cast<int>(config.scales.size()), [&](int k) {
      const double s = config.scales[k];
      const TriangleMesh scaled = scale_mesh(mesh, s);
      const DepthMap other =
          compute_depth(scaled, method, config.alpha, config.solver, config.curvature);
      const std::vector<double> x(base.values.values.data(),
                                  base.values.values.data() + base.values.values.size());
      const std::vector<double> y(other.values.values.data(),
                                  other.values.values.data() + other.values.values.size());
      const RegressionResult reg = linear_regression(x, y);
      rows[k].method = method;
      rows[k].scale = s;
      rows[k].slope = reg.slope;
      rows[k].r = reg.r;
      rows[k].residuals = reg.residuals;
      rows[k].max_rel_dev = base_max > 0.0
                                ? (other.values.values - base.values.values).cwiseAbs().maxCoeff() /
                                      base_max
                                : 0.0;
    });
    for (auto& row : rows) result.rows.push_back(std::move(row));
  }
  return result;
}

Expe3Result run_expe3(const std::vector<SurfaceInput>& surfaces, const Expe3Config& config) {
  const int n = static_cast<int>(surfaces.size());
  if (n < 2 * config.window)
    throw DomainError("need at least 2*window surfaces, got " + std::to_string(n));
  if (config.methods.empty()) throw EmptyInputError("no methods");

  Expe3Result result;
  for (DepthMethod method : config.methods) {
    std::vector<DepthMap> maps(n);
    parallel_for(n, [&](int i) {
      maps[i] = compute_depth(surfaces[i].mesh, method, config.alpha, config.solver,
                              config.curvature);
      if (maps[i].characteristic_length == 0.0 && surfaces[i].mesh.is_closed())
        maps[i].characteristic_length = characteristic_length(surfaces[i].mesh);
    });
    std::vector<std::string> ids(n);
    for (int i = 0; i < n; ++i) ids[i] = surfaces[i].id;

    Expe3MethodResult mr;
    mr.method = method;
    mr.matrix = distance_matrix(maps, ids, method_name(method));
    mr.ks_profile = subgroup_ks_profile(mr.matrix, config.window, config.n_windows);

    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return maps[a].characteristic_length < maps[b].characteristic_length;
    });
    for (int k = 0; k < n; ++k) {
      const DepthMap& map = maps[order[k]];
      CentileRow row;
      row.subject = ids[order[k]];
      row.length = map.characteristic_length;
      row.p5 = percentile(map.values.values, 5.0);
      row.p25 = percentile(map.values.values, 25.0);
      row.p50 = percentile(map.values.values, 50.0);
      row.p75 = percentile(map.values.values, 75.0);
      row.p95 = percentile(map.values.values, 95.0);
      row.mean = map.values.values.mean();
      mr.centiles.push_back(row);
    }
    result.per_method.push_back(std::move(mr));
  }
  return result;
}

void write_metric_report_json(const MetricReport& report, const std::string& path) {
  const json j = {
      {"method", report.method},         {"alpha", report.alpha},
      {"std_crest", report.std_crest},   {"sep", report.sep},
      {"dev", report.dev},               {"n_paths", report.n_paths},
      {"n_crest_vertices", report.n_crest_vertices},
  };
  write_json(j, path);
}

void write_expe1_outputs(const Expe1Result& result, const Expe1Config& config,
                         const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  {
    std::ofstream out = open_out(out_dir + "/metrics.csv");
    out << "subject,alpha,std_crest,sep,dev,n_paths,n_crest_vertices\n";
    for (const auto& row : result.rows)
      out << row.subject << ',' << row.alpha << ',' << row.report.std_crest << ','
          << row.report.sep << ',' << row.report.dev << ',' << row.report.n_paths << ','
          << row.report.n_crest_vertices << '\n';
  }
  json j;
  j["experiment"] = "expe1";
  j["version"] = tool_version();
  j["config"] = {{"alphas", config.alphas},
                 {"curvature", curvature_name(config.curvature)},
                 {"solver", solver_name(config.solver)},
                 {"method", "dpf_star"}};
  j["median_std_crest"] = result.median_std_crest;
  j["median_sep"] = result.median_sep;
  j["median_dev"] = result.median_dev;
  j["best_alpha"] = {{"std_crest", result.best_alpha_std_crest},
                     {"sep", result.best_alpha_sep},
                     {"dev", result.best_alpha_dev}};
  j["equivalent_alphas"] = {{"std_crest", result.equivalent_std_crest},
                            {"sep", result.equivalent_sep},
                            {"dev", result.equivalent_dev}};
  j["intersection"] = result.intersection;
  write_json(j, out_dir + "/summary.json");
}

void write_expe2_outputs(const Expe2Result& result, const Expe2Config& config,
                         const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  {
    std::ofstream out = open_out(out_dir + "/regressions.csv");
    out << "method,scale,slope,r,max_rel_dev\n";
    for (const auto& row : result.rows)
      out << method_name(row.method) << ',' << row.scale << ',' << row.slope << ',' << row.r
          << ',' << row.max_rel_dev << '\n';
  }
  for (const auto& row : result.rows) {
    std::ofstream out = open_out(out_dir + "/residuals_" + method_name(row.method) + "_s" +
                                 std::to_string(row.scale).substr(0, 4) + ".csv");
    out << "vertex_index,value\n";
    for (int v = 0; v < row.residuals.size(); ++v) out << v << ',' << row.residuals(v) << '\n';
  }
  json j;
  j["experiment"] = "expe2";
  j["version"] = tool_version();
  std::vector<std::string> methods;
  for (DepthMethod m : config.methods) methods.push_back(method_name(m));
  j["config"] = {{"scales", config.scales},
                 {"methods", methods},
                 {"alpha", config.alpha},
                 {"curvature", curvature_name(config.curvature)},
                 {"solver", solver_name(config.solver)}};
  json rows = json::array();
  for (const auto& row : result.rows)
    rows.push_back({{"method", method_name(row.method)},
                    {"scale", row.scale},
                    {"slope", row.slope},
                    {"r", row.r},
                    {"max_rel_dev", row.max_rel_dev}});
  j["rows"] = rows;
  write_json(j, out_dir + "/summary.json");
}

void write_expe3_outputs(const Expe3Result& result, const Expe3Config& config,
                         const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  json j;
  j["experiment"] = "expe3";
  j["version"] = tool_version();
  std::vector<std::string> methods;
  for (DepthMethod m : config.methods) methods.push_back(method_name(m));
  j["config"] = {{"methods", methods},
                 {"alpha", config.alpha},
                 {"window", config.window},
                 {"n_windows", config.n_windows},
                 {"curvature", curvature_name(config.curvature)},
                 {"solver", solver_name(config.solver)}};
  for (const auto& mr : result.per_method) {
    const std::string name = method_name(mr.method);
    {
      std::ofstream out = open_out(out_dir + "/centiles_" + name + ".csv");
      out << "subject,length_mm,p5,p25,p50,p75,p95,mean\n";
      for (const auto& row : mr.centiles)
        out << row.subject << ',' << row.length << ',' << row.p5 << ',' << row.p25 << ','
            << row.p50 << ',' << row.p75 << ',' << row.p95 << ',' << row.mean << '\n';
    }
    save_distance_matrix(mr.matrix, out_dir + "/distance_matrix_" + name + ".csv");
    write_json(json(mr.ks_profile), out_dir + "/ks_profile_" + name + ".json");
    j["ks_profile"][name] = mr.ks_profile;
  }
  write_json(j, out_dir + "/summary.json");
}

}  // namespace sulcdepth
