#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "test_support.hpp"

using test_support::TempDir;
using test_support::read_text;
using test_support::write_text;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

RunResult run_cli(const TempDir& dir, const std::string& args) {
  std::string out_path = dir.file("stdout.txt"), err_path = dir.file("stderr.txt");
  std::string cmd = std::string(SULCDEPTH_CLI) + " " + args + " >" + out_path + " 2>" + err_path;
  int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = read_text(out_path);
  r.err = read_text(err_path);
  return r;
}

std::vector<double> csv_values(const std::string& path) {
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);  // header
  std::vector<double> values;
  while (std::getline(in, line)) {
    auto comma = line.find(',');
    values.push_back(std::stod(line.substr(comma + 1)));
  }
  return values;
}

}  // namespace

TEST_CASE("usage errors exit with 2 and print guidance") {
  TempDir dir;
  RunResult none = run_cli(dir, "");
  CHECK(none.exit_code == 2);

  RunResult missing = run_cli(dir, "depth --out x.csv");
  CHECK(missing.exit_code == 2);
  CHECK((missing.err + missing.out).find("--mesh") != std::string::npos);

  RunResult version = run_cli(dir, "--version");
  CHECK(version.exit_code == 0);
  CHECK(version.out.find_first_of("0123456789") != std::string::npos);
}

TEST_CASE("runtime errors exit with 1 and one diagnostic line") {
  TempDir dir;
  REQUIRE(run_cli(dir, "phantom --radius 1 --amplitude 0 --subdiv 2 --out-mesh " +
                           dir.file("ico.ply"))
              .exit_code == 0);
  RunResult r = run_cli(dir, "depth --mesh " + dir.file("ico.ply") + " --alpha -1 --out " +
                                 dir.file("d.csv"));
  CHECK(r.exit_code == 1);
  CHECK(r.err.rfind("error:", 0) == 0);
  CHECK(std::count(r.err.begin(), r.err.end(), '\n') == 1);

  RunResult absent = run_cli(dir, "depth --mesh " + dir.file("nope.ply") + " --out " +
                                      dir.file("d.csv"));
  CHECK(absent.exit_code == 1);
}

TEST_CASE("depth on a unit sphere writes the constant map and its sidecar") {
  TempDir dir;
  REQUIRE(run_cli(dir, "phantom --radius 1 --amplitude 0 --subdiv 4 --out-mesh " +
                           dir.file("ico.ply"))
              .exit_code == 0);
  RunResult r = run_cli(dir, "depth --mesh " + dir.file("ico.ply") +
                                 " --method dpf_star --alpha 500 --out " + dir.file("d.csv"));
  REQUIRE(r.exit_code == 0);

  std::vector<double> values = csv_values(dir.file("d.csv"));
  REQUIRE(values.size() == 2562);
  for (double v : values) CHECK(std::abs(v - 0.0064480) < 1e-4);

  std::ifstream sidecar_in(dir.file("d.csv") + ".json");
  REQUIRE(sidecar_in.good());
  nlohmann::json sidecar = nlohmann::json::parse(sidecar_in);
  CHECK(sidecar["method"] == "dpf_star");
  CHECK(sidecar["alpha"].get<double>() == 500.0);
  CHECK(sidecar["L_mm"].get<double>() > 1.0);
  CHECK(sidecar["volume_mm3"].get<double>() > 4.0);
  CHECK(sidecar["solver"] == "direct");
  CHECK(sidecar["runtime_ms"].get<double>() >= 0.0);

  std::string csv = read_text(dir.file("d.csv"));
  CHECK(csv.find('\r') == std::string::npos);
}

TEST_CASE("depth output is bit-identical across reruns") {
  TempDir dir;
  REQUIRE(run_cli(dir, "phantom --radius 20 --amplitude 2 --frequency 6 --subdiv 3 --seed 5"
                       " --out-mesh " +
                           dir.file("ph.ply"))
              .exit_code == 0);
  std::string base = "depth --mesh " + dir.file("ph.ply") + " --alpha 500 --solver direct";
  REQUIRE(run_cli(dir, base + " --out " + dir.file("a.csv")).exit_code == 0);
  REQUIRE(run_cli(dir, base + " --out " + dir.file("b.csv")).exit_code == 0);
  CHECK(read_text(dir.file("a.csv")) == read_text(dir.file("b.csv")));
}

TEST_CASE("flat key=value config files override defaults") {
  TempDir dir;
  REQUIRE(run_cli(dir, "phantom --radius 1 --amplitude 0 --subdiv 2 --out-mesh " +
                           dir.file("ico.ply"))
              .exit_code == 0);
  write_text(dir.file("cfg.ini"), "# working weight\nalpha=50\n");
  RunResult r = run_cli(dir, "depth --config " + dir.file("cfg.ini") + " --mesh " +
                                 dir.file("ico.ply") + " --out " + dir.file("d.csv"));
  REQUIRE(r.exit_code == 0);
  std::ifstream sidecar_in(dir.file("d.csv") + ".json");
  nlohmann::json sidecar = nlohmann::json::parse(sidecar_in);
  CHECK(sidecar["alpha"].get<double>() == 50.0);

  SUBCASE("explicit flags beat file entries") {
    RunResult cli_wins = run_cli(dir, "depth --config " + dir.file("cfg.ini") + " --mesh " +
                                          dir.file("ico.ply") + " --alpha 75 --out " +
                                          dir.file("d2.csv"));
    REQUIRE(cli_wins.exit_code == 0);
    std::ifstream in2(dir.file("d2.csv") + ".json");
    CHECK(nlohmann::json::parse(in2)["alpha"].get<double>() == 75.0);
  }
  SUBCASE("unknown keys are usage errors") {
    write_text(dir.file("bad.ini"), "alfa=50\n");
    RunResult bad = run_cli(dir, "depth --config " + dir.file("bad.ini") + " --mesh " +
                                     dir.file("ico.ply") + " --out " + dir.file("d3.csv"));
    CHECK(bad.exit_code == 2);
    CHECK(bad.err.find("alfa") != std::string::npos);
  }
  SUBCASE("file values pass option validators") {
    write_text(dir.file("bad.ini"), "solver=bogus\n");
    RunResult bad = run_cli(dir, "depth --config " + dir.file("bad.ini") + " --mesh " +
                                     dir.file("ico.ply") + " --out " + dir.file("d4.csv"));
    CHECK(bad.exit_code == 2);
  }
}

TEST_CASE("phantom families are written as numbered annotated surfaces") {
  TempDir dir;
  std::string cmd = "phantom --count 3 --seed 11 --subdiv 2 --out-dir " + dir.file("fam");
  REQUIRE(run_cli(dir, cmd).exit_code == 0);
  for (int i = 0; i < 3; ++i) {
    std::string base = dir.file("fam") + "/phantom_00" + std::to_string(i);
    CHECK(std::filesystem::exists(base + ".ply"));
    CHECK(std::filesystem::exists(base + "_crest.csv"));
    CHECK(std::filesystem::exists(base + "_fundi.csv"));
  }
  std::string first = read_text(dir.file("fam") + "/phantom_000.ply");
  REQUIRE(run_cli(dir, "phantom --count 3 --seed 11 --subdiv 2 --out-dir " + dir.file("fam2"))
              .exit_code == 0);
  CHECK(read_text(dir.file("fam2") + "/phantom_000.ply") == first);
}

TEST_CASE("scaling harness reports unit slopes for the normalized method") {
  TempDir dir;
  RunResult r = run_cli(dir, "expe2 --scales 2 --methods dpf_star --out " + dir.file("e2"));
  REQUIRE(r.exit_code == 0);
  std::ifstream in(dir.file("e2") + "/summary.json");
  nlohmann::json doc = nlohmann::json::parse(in);
  REQUIRE(doc["rows"].size() == 1);
  CHECK(std::abs(doc["rows"][0]["slope"].get<double>() - 1.0) < 1e-8);
  CHECK(std::abs(doc["rows"][0]["r"].get<double>() - 1.0) < 1e-8);
}

TEST_CASE("alpha sweep harness emits metrics and summary for a generated suite") {
  TempDir dir;
  RunResult r = run_cli(dir, "expe1 --phantom-count 2 --alphas 400,500 --out " + dir.file("e1"));
  REQUIRE(r.exit_code == 0);
  std::string csv = read_text(dir.file("e1") + "/metrics.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
  std::ifstream in(dir.file("e1") + "/summary.json");
  nlohmann::json doc = nlohmann::json::parse(in);
  CHECK(doc["config"]["alphas"].size() == 2);
  CHECK(!doc["intersection"].empty());
}

TEST_CASE("population harness writes a reference-anchored ks profile") {
  TempDir dir;
  RunResult r = run_cli(dir, "expe3 --phantom-count 4 --window 2 --n-windows 3"
                             " --methods dpf_star --out " +
                                 dir.file("e3"));
  REQUIRE(r.exit_code == 0);
  std::ifstream in(dir.file("e3") + "/ks_profile_dpf_star.json");
  REQUIRE(in.good());
  nlohmann::json profile = nlohmann::json::parse(in);
  REQUIRE(profile.size() == 3);
  CHECK(profile.back().get<double>() == 0.0);
  for (const auto& v : profile) {
    CHECK(v.get<double>() >= 0.0);
    CHECK(v.get<double>() <= 1.0);
  }
}
