// Command-line front end: depth estimation, phantom generation, and the
// three experiment harnesses. Exit codes: 0 success, 1 runtime error,
// 2 usage error.

#include <array>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sulcdepth/experiments.hpp"
#include "sulcdepth/mesh_io.hpp"
#include "sulcdepth/phantom.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace sulcdepth;

namespace {

struct DepthArgs {
  std::string mesh_path;
  std::string method = "dpf_star";
  double alpha = 500.0;
  std::string out_path;
  std::string solver = "direct";
  std::string curvature = "tensor";
};

struct PhantomArgs {
  PhantomSpec spec;
  int count = 1;  // > 1 writes a graded family into out_dir
  std::string out_mesh;
  std::string out_crest;
  std::string out_fundi;
  std::string out_dir;
  double base_radius = 20.0;
};

struct Expe1Args {
  std::vector<std::string> surfaces;
  std::string landmark_dir;
  std::vector<double> alphas = {0, 10, 50, 150, 400, 500, 1000, 2000};
  std::string out_dir;
  int phantom_count = 0;
  unsigned phantom_seed = 1;
  std::string solver = "direct";
  std::string curvature = "tensor";
};

struct Expe2Args {
  std::string mesh_path;
  std::vector<double> scales = {2, 3, 4, 5};
  std::vector<std::string> methods = {"dpf_star", "sulc"};
  double alpha = 500.0;
  std::string out_dir;
  std::string solver = "direct";
  std::string curvature = "tensor";
};

struct Expe3Args {
  std::vector<std::string> surfaces;
  std::vector<std::string> methods = {"dpf_star", "sulc"};
  double alpha = 500.0;
  int window = 10;
  int n_windows = 8;
  std::string out_dir;
  int phantom_count = 0;
  unsigned phantom_seed = 1;
  double base_radius = 20.0;
  std::string solver = "direct";
  std::string curvature = "tensor";
};

// Flat key=value file; '#' starts a comment. Keys name long options of the
// invoked subcommand. Explicit command-line flags win over file entries.
int apply_flat_config(CLI::App* cmd, const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "error: cannot open config file '" << path << "'\n";
    return 2;
  }
  auto trim = [](const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string();
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
  };
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string entry = trim(line);
    if (entry.empty()) continue;
    const auto eq = entry.find('=');
    if (eq == std::string::npos) {
      std::cerr << "error: " << path << ":" << line_no << ": expected key=value\n";
      return 2;
    }
    const std::string key = trim(entry.substr(0, eq));
    const std::string value = trim(entry.substr(eq + 1));
    CLI::Option* op = key == "config" ? nullptr : cmd->get_option_no_throw("--" + key);
    if (op == nullptr) {
      std::cerr << "error: " << path << ":" << line_no << ": unknown key '" << key << "'\n";
      return 2;
    }
    if (op->count() > 0) continue;
    try {
      op->add_result(value);
      op->run_callback();
    } catch (const CLI::Error& e) {
      std::cerr << "error: " << path << ":" << line_no << ": " << e.what() << '\n';
      return 2;
    }
  }
  return 0;
}

SolverConfig parse_solver(const std::string& name) {
  SolverConfig config;
  config.backend =
      name == "cg" ? SolverBackend::conjugate_gradient : SolverBackend::direct_cholesky;
  return config;
}

CurvatureMethod parse_curvature(const std::string& name) {
  return name == "cotan_normal" ? CurvatureMethod::cotan_normal : CurvatureMethod::tensor;
}

std::string stem_of(const std::string& path) { return fs::path(path).stem().string(); }

// Landmark files live next to the surfaces or in an explicit directory,
// named <stem>_crest.csv / <stem>_fundi.csv.
SurfaceInput load_surface(const std::string& path, const std::string& landmark_dir,
                          bool need_landmarks) {
  const std::string id = stem_of(path);
  TriangleMesh mesh = load_mesh(path);
  LandmarkSet landmarks;
  if (need_landmarks) {
    const fs::path dir = landmark_dir.empty() ? fs::path(path).parent_path() : fs::path(landmark_dir);
    const std::string crest = (dir / (id + "_crest.csv")).string();
    const std::string fundi = (dir / (id + "_fundi.csv")).string();
    landmarks = load_landmarks(mesh, crest, fundi);
  }
  return {id, std::move(mesh), std::move(landmarks)};
}

int run_depth(const DepthArgs& args) {
  const auto t0 = std::chrono::steady_clock::now();
  const TriangleMesh mesh = load_mesh(args.mesh_path);
  const DepthMap depth = compute_depth(mesh, method_from_name(args.method), args.alpha,
                                       parse_solver(args.solver),
                                       parse_curvature(args.curvature));
  save_field(mesh, depth.values, args.out_path);
  const auto runtime =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0);

  const json sidecar = {
      {"method", args.method},
      {"alpha", args.alpha},
      {"L_mm", depth.characteristic_length},
      {"volume_mm3", mesh.is_closed() ? enclosed_volume(mesh) : 0.0},
      {"solver", args.solver},
      {"runtime_ms", runtime.count()},
  };
  std::ofstream out(args.out_path + ".json", std::ios::binary);
  if (!out) throw IoError("cannot open " + args.out_path + ".json for writing");
  out << sidecar.dump(2) << '\n';
  return 0;
}

int run_phantom(const PhantomArgs& args) {
  if (args.count > 1) {
    if (args.out_dir.empty()) throw DomainError("--count > 1 requires --out-dir");
    fs::create_directories(args.out_dir);
    const auto family =
        phantom_family(args.count, args.spec.seed, args.base_radius, args.spec.subdivisions);
    for (size_t i = 0; i < family.size(); ++i) {
      const Phantom phantom = generate_phantom(family[i]);
      char name[32];
      std::snprintf(name, sizeof(name), "phantom_%03zu", i);
      const std::string base = (fs::path(args.out_dir) / name).string();
      save_mesh(phantom.mesh, base + ".ply");
      save_crest(phantom.landmarks.crest, base + "_crest.csv");
      save_fundi(phantom.landmarks.fundus_lines, base + "_fundi.csv");
    }
    return 0;
  }
  if (args.out_mesh.empty()) throw DomainError("--out-mesh is required");
  const TriangleMesh mesh = make_phantom_mesh(args.spec);
  save_mesh(mesh, args.out_mesh);
  if (!args.out_crest.empty() || !args.out_fundi.empty()) {
    const LandmarkSet landmarks = make_phantom_landmarks(args.spec, mesh);
    if (!args.out_crest.empty()) save_crest(landmarks.crest, args.out_crest);
    if (!args.out_fundi.empty()) save_fundi(landmarks.fundus_lines, args.out_fundi);
  }
  return 0;
}

int run_expe1(const Expe1Args& args) {
  std::vector<SurfaceInput> surfaces;
  if (args.phantom_count > 0) {
    surfaces = phantom_suite(args.phantom_count, args.phantom_seed);
  } else {
    for (const auto& path : args.surfaces)
      surfaces.push_back(load_surface(path, args.landmark_dir, true));
  }
  Expe1Config config;
  config.alphas = args.alphas;
  config.solver = parse_solver(args.solver);
  config.curvature = parse_curvature(args.curvature);
  const Expe1Result result = run_expe1(surfaces, config);
  write_expe1_outputs(result, config, args.out_dir);
  return 0;
}

int run_expe2(const Expe2Args& args) {
  TriangleMesh mesh = args.mesh_path.empty()
                          ? make_phantom_mesh({15.0, 1.5, 6, 4, 7})
                          : load_mesh(args.mesh_path);
  Expe2Config config;
  config.scales = args.scales;
  config.methods.clear();
  for (const auto& name : args.methods) config.methods.push_back(method_from_name(name));
  config.alpha = args.alpha;
  config.solver = parse_solver(args.solver);
  config.curvature = parse_curvature(args.curvature);
  const Expe2Result result = run_expe2(mesh, config);
  write_expe2_outputs(result, config, args.out_dir);
  return 0;
}

int run_expe3(const Expe3Args& args) {
  std::vector<SurfaceInput> surfaces;
  if (args.phantom_count > 0) {
    const auto family = phantom_family(args.phantom_count, args.phantom_seed, args.base_radius);
    for (size_t i = 0; i < family.size(); ++i) {
      char name[32];
      std::snprintf(name, sizeof(name), "phantom_%03zu", i);
      surfaces.push_back({name, make_phantom_mesh(family[i]), {}});
    }
  } else {
    for (const auto& path : args.surfaces) surfaces.push_back(load_surface(path, "", false));
  }
  Expe3Config config;
  config.methods.clear();
  for (const auto& name : args.methods) config.methods.push_back(method_from_name(name));
  config.alpha = args.alpha;
  config.window = args.window;
  config.n_windows = args.n_windows;
  config.solver = parse_solver(args.solver);
  config.curvature = parse_curvature(args.curvature);
  const Expe3Result result = run_expe3(surfaces, config);
  write_expe3_outputs(result, config, args.out_dir);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scale-controlled sulcal depth estimation on triangle meshes"};
  app.require_subcommand(1);
#ifdef SULCDEPTH_VERSION
  app.set_version_flag("--version", std::string(SULCDEPTH_VERSION));
#endif

  DepthArgs depth_args;
  CLI::App* depth_cmd = app.add_subcommand("depth", "Compute a per-vertex depth map");
  depth_cmd->add_option("--mesh", depth_args.mesh_path, "Input mesh (PLY or OBJ)")->required();
  depth_cmd->add_option("--method", depth_args.method, "Depth estimator")
      ->check(CLI::IsMember({"dpf", "dpf_star", "dpf_star_abs", "sulc", "curv"}));
  depth_cmd->add_option("--alpha", depth_args.alpha, "Regularization weight");
  depth_cmd->add_option("--out", depth_args.out_path, "Output CSV (or PLY with quality)")
      ->required();
  depth_cmd->add_option("--solver", depth_args.solver, "Linear solver backend")
      ->check(CLI::IsMember({"direct", "cg"}));
  depth_cmd->add_option("--curvature", depth_args.curvature, "Mean-curvature estimator")
      ->check(CLI::IsMember({"tensor", "cotan_normal"}));

  PhantomArgs phantom_args;
  CLI::App* phantom_cmd =
      app.add_subcommand("phantom", "Generate wrinkled-sphere surfaces with known landmarks");
  phantom_cmd->add_option("--radius", phantom_args.spec.radius, "Base radius, mm");
  phantom_cmd->add_option("--amplitude", phantom_args.spec.amplitude, "Wrinkle amplitude, mm");
  phantom_cmd->add_option("--frequency", phantom_args.spec.frequency, "Polar wave count");
  phantom_cmd->add_option("--subdiv", phantom_args.spec.subdivisions, "Icosphere subdivisions");
  phantom_cmd->add_option("--seed", phantom_args.spec.seed, "Deterministic seed");
  phantom_cmd->add_option("--bulge", phantom_args.spec.bulge,
                          "Prolate large-scale deformation factor, [0, 0.5)");
  phantom_cmd->add_option("--count", phantom_args.count, "Family size (>1 writes a family)");
  phantom_cmd->add_option("--base-radius", phantom_args.base_radius, "Family base radius, mm");
  phantom_cmd->add_option("--out-mesh", phantom_args.out_mesh, "Output mesh path (.ply)");
  phantom_cmd->add_option("--out-crest", phantom_args.out_crest, "Crest CSV output");
  phantom_cmd->add_option("--out-fundi", phantom_args.out_fundi, "Fundus CSV output");
  phantom_cmd->add_option("--out-dir", phantom_args.out_dir, "Family output directory");

  Expe1Args expe1_args;
  CLI::App* expe1_cmd = app.add_subcommand("expe1", "Alpha sweep with landmark metrics");
  expe1_cmd->add_option("--surfaces", expe1_args.surfaces, "Surface files");
  expe1_cmd->add_option("--landmarks", expe1_args.landmark_dir,
                        "Directory of <stem>_crest.csv / <stem>_fundi.csv files");
  expe1_cmd->add_option("--alphas", expe1_args.alphas, "Alpha grid")->delimiter(',');
  expe1_cmd->add_option("--out", expe1_args.out_dir, "Output directory")->required();
  expe1_cmd->add_option("--phantom-count", expe1_args.phantom_count,
                        "Generate this many phantoms instead of reading surfaces");
  expe1_cmd->add_option("--phantom-seed", expe1_args.phantom_seed, "Suite seed");
  expe1_cmd->add_option("--solver", expe1_args.solver)->check(CLI::IsMember({"direct", "cg"}));
  expe1_cmd->add_option("--curvature", expe1_args.curvature)
      ->check(CLI::IsMember({"tensor", "cotan_normal"}));

  Expe2Args expe2_args;
  CLI::App* expe2_cmd = app.add_subcommand("expe2", "Global-scaling regression study");
  expe2_cmd->add_option("--mesh", expe2_args.mesh_path,
                        "Input mesh (a default phantom is used when omitted)");
  expe2_cmd->add_option("--scales", expe2_args.scales, "Scale factors")->delimiter(',');
  expe2_cmd->add_option("--methods", expe2_args.methods, "Depth methods")->delimiter(',');
  expe2_cmd->add_option("--alpha", expe2_args.alpha, "Regularization weight");
  expe2_cmd->add_option("--out", expe2_args.out_dir, "Output directory")->required();
  expe2_cmd->add_option("--solver", expe2_args.solver)->check(CLI::IsMember({"direct", "cg"}));
  expe2_cmd->add_option("--curvature", expe2_args.curvature)
      ->check(CLI::IsMember({"tensor", "cotan_normal"}));

  Expe3Args expe3_args;
  CLI::App* expe3_cmd = app.add_subcommand("expe3", "Population distribution study");
  expe3_cmd->add_option("--surfaces", expe3_args.surfaces, "Surface files");
  expe3_cmd->add_option("--methods", expe3_args.methods, "Depth methods")->delimiter(',');
  expe3_cmd->add_option("--alpha", expe3_args.alpha, "Regularization weight");
  expe3_cmd->add_option("--window", expe3_args.window, "Subgroup window size");
  expe3_cmd->add_option("--n-windows", expe3_args.n_windows, "Number of windows");
  expe3_cmd->add_option("--out", expe3_args.out_dir, "Output directory")->required();
  expe3_cmd->add_option("--phantom-count", expe3_args.phantom_count,
                        "Generate a graded phantom family instead of reading surfaces");
  expe3_cmd->add_option("--phantom-seed", expe3_args.phantom_seed, "Family seed");
  expe3_cmd->add_option("--base-radius", expe3_args.base_radius, "Family base radius, mm");
  expe3_cmd->add_option("--solver", expe3_args.solver)->check(CLI::IsMember({"direct", "cg"}));
  expe3_cmd->add_option("--curvature", expe3_args.curvature)
      ->check(CLI::IsMember({"tensor", "cotan_normal"}));

  const std::array<CLI::App*, 5> commands = {depth_cmd, phantom_cmd, expe1_cmd, expe2_cmd,
                                             expe3_cmd};
  std::array<std::string, 5> config_paths;
  for (size_t i = 0; i < commands.size(); ++i)
    commands[i]->add_option("--config", config_paths[i], "Flat key=value configuration file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  for (size_t i = 0; i < commands.size(); ++i) {
    if (!commands[i]->parsed() || config_paths[i].empty()) continue;
    if (const int rc = apply_flat_config(commands[i], config_paths[i]); rc != 0) return rc;
  }

  try {
    if (depth_cmd->parsed()) return run_depth(depth_args);
    if (phantom_cmd->parsed()) return run_phantom(phantom_args);
    if (expe1_cmd->parsed()) return run_expe1(expe1_args);
    if (expe2_cmd->parsed()) return run_expe2(expe2_args);
    if (expe3_cmd->parsed()) return run_expe3(expe3_args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
