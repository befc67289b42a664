#include "sulcdepth/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "sulcdepth/primitives.hpp"

namespace sulcdepth {
namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

void check_spec(const PhantomSpec& spec) {
  if (!(spec.radius > 0.0)) throw DomainError("phantom radius must be positive");
  if (spec.amplitude < 0.0 || spec.amplitude >= spec.radius / 2.0)
    throw DomainError("phantom amplitude must be in [0, radius/2)");
  if (spec.frequency < 1) throw DomainError("phantom frequency must be >= 1");
  if (spec.subdivisions < 0) throw DomainError("phantom subdivisions must be >= 0");
  if (spec.bulge < 0.0 || spec.bulge >= 0.5)
    throw DomainError("phantom bulge must be in [0, 0.5)");
}

struct SeedParams {
  double psi;            // azimuthal phase of the wrinkle envelope
  Eigen::Vector3d axis;  // prolate bulge axis, unit length
};

SeedParams params_from_seed(unsigned seed) {
  std::mt19937 rng(seed);
  const auto uniform = [&rng] { return static_cast<double>(rng()) / 4294967296.0; };
  SeedParams params;
  params.psi = kTwoPi * uniform();
  const double z = 2.0 * uniform() - 1.0;
  const double az = kTwoPi * uniform();
  const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
  params.axis = {s * std::cos(az), s * std::sin(az), z};
  return params;
}

double legendre_p2(double t) { return 0.5 * (3.0 * t * t - 1.0); }

// Polar angles of the circles where sin(frequency * theta) hits target.
std::vector<double> extremal_circles(int frequency, double target_phase) {
  std::vector<double> circles;
  for (int k = 0;; ++k) {
    const double theta = (target_phase + kTwoPi * k) / frequency;
    if (theta >= kPi) break;
    if (theta > 0.0) circles.push_back(theta);
  }
  return circles;
}

double polar_angle(const Eigen::Vector3d& p) { return std::acos(std::clamp(p.normalized().z(), -1.0, 1.0)); }
double azimuth(const Eigen::Vector3d& p) {
  const double phi = std::atan2(p.y(), p.x());
  return phi < 0.0 ? phi + kTwoPi : phi;
}

// Vertices within the angular band around any of the circles.
std::vector<int> band_vertices(const TriangleMesh& mesh, const std::vector<double>& circles,
                               double band) {
  std::vector<int> out;
  for (int v = 0; v < mesh.vertex_count(); ++v) {
    const double theta = polar_angle(mesh.vertex(v));
    for (double c : circles) {
      if (std::abs(theta - c) <= band) {
        out.push_back(v);
        break;
      }
    }
  }
  return out;
}

}  // namespace

TriangleMesh make_phantom_mesh(const PhantomSpec& spec) {
  check_spec(spec);
  const TriangleMesh sphere = make_icosphere(spec.subdivisions, 1.0);
  const SeedParams params = params_from_seed(spec.seed);
  TriangleMesh::Vertices vertices(sphere.vertex_count(), 3);
  for (int v = 0; v < sphere.vertex_count(); ++v) {
    const Eigen::Vector3d u = sphere.vertex(v).normalized();
    const double theta = polar_angle(u);
    const double phi = azimuth(u);
    const double wobble = 1.0 + 0.15 * std::cos(3.0 * phi + params.psi);
    const double base = spec.radius * (1.0 + spec.bulge * legendre_p2(u.dot(params.axis)));
    const double r = base + spec.amplitude * wobble * std::sin(spec.frequency * theta);
    vertices.row(v) = r * u;
  }
  return TriangleMesh::create(std::move(vertices), sphere.faces());
}

LandmarkSet make_phantom_landmarks(const PhantomSpec& spec, const TriangleMesh& mesh) {
  check_spec(spec);
  if (spec.amplitude == 0.0) throw EmptyResultError("flat phantom has no landmark candidates");
  const double band = 0.5 * mesh.mean_edge_length() / spec.radius;
  const std::vector<double> ridges = extremal_circles(spec.frequency, kPi / 2.0);
  const std::vector<double> valleys = extremal_circles(spec.frequency, 3.0 * kPi / 2.0);

  LandmarkSet set;
  set.crest = band_vertices(mesh, ridges, band);
  std::set<int> crest_lookup(set.crest.begin(), set.crest.end());

  for (double valley : valleys) {
    std::vector<int> candidates = band_vertices(mesh, {valley}, band);
    // Keep crest/fundus disjoint even for degenerate bands.
    candidates.erase(std::remove_if(candidates.begin(), candidates.end(),
                                    [&](int v) { return crest_lookup.count(v) > 0; }),
                     candidates.end());
    if (candidates.empty()) continue;
    std::stable_sort(candidates.begin(), candidates.end(), [&](int a, int b) {
      const double pa = azimuth(mesh.vertex(a)), pb = azimuth(mesh.vertex(b));
      return pa < pb || (pa == pb && a < b);
    });
    std::vector<int> chain = {candidates.front()};
    for (size_t i = 1; i < candidates.size(); ++i) {
      const int next = candidates[i];
      if (next == chain.back()) continue;
      if (mesh.are_adjacent(chain.back(), next)) {
        chain.push_back(next);
        continue;
      }
      // Bridge the azimuth gap along the surface graph.
      const GeodesicPath bridge = shortest_path(mesh, chain.back(), {next});
      for (size_t j = 1; j < bridge.chain.size(); ++j) chain.push_back(bridge.chain[j]);
    }
    // Bridged vertices may touch a ridge band only on pathological shapes;
    // drop the chain rather than emit an overlapping label set.
    const bool overlaps = std::any_of(chain.begin(), chain.end(),
                                      [&](int v) { return crest_lookup.count(v) > 0; });
    if (!overlaps) set.fundus_lines.push_back(std::move(chain));
  }

  if (set.crest.empty() && set.fundus_lines.empty())
    throw EmptyResultError("no landmark candidates near the analytic circles");
  validate_landmarks(mesh, set);
  return set;
}

Phantom generate_phantom(const PhantomSpec& spec) {
  Phantom phantom{make_phantom_mesh(spec), {}};
  phantom.landmarks = make_phantom_landmarks(spec, phantom.mesh);
  return phantom;
}

std::vector<PhantomSpec> phantom_family(int count, unsigned seed, double base_radius,
                                        int subdivisions) {
  if (count < 1) throw DomainError("family needs at least one phantom");
  std::vector<PhantomSpec> family;
  family.reserve(count);
  std::mt19937 rng(seed);
  for (int i = 0; i < count; ++i) {
    const double t = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
    const double jitter = 0.97 + 0.06 * (static_cast<double>(rng()) / 4294967296.0);
    PhantomSpec spec;
    spec.radius = base_radius * std::pow(4.0, t) * jitter;
    spec.amplitude = (0.06 + 0.06 * t) * spec.radius;
    spec.frequency = 6;
    spec.subdivisions = subdivisions;
    spec.seed = seed + 1000003u * static_cast<unsigned>(i + 1);
    family.push_back(spec);
  }
  return family;
}

}  // namespace sulcdepth
