#pragma once

#include <vector>

#include "sulcdepth/landmarks.hpp"
#include "sulcdepth/mesh.hpp"

namespace sulcdepth {

/// Wrinkled sphere: radius displaced by
///   r(theta, phi) = R * (1 + bulge * P2(u . a)) +
///                   amplitude * (1 + 0.15 cos(3 phi + psi)) * sin(frequency * theta)
/// with psi and the prolate axis a drawn from the seed (P2 the second
/// Legendre polynomial, u the unit position). Ridge circles sit where the
/// sine is +1, valley circles where it is -1, so crest/fundus positions are
/// known analytically; the bulge adds large-scale shape variation without
/// moving those circles.
struct PhantomSpec {
  double radius = 30.0;     // mm
  double amplitude = 3.0;   // mm; must stay below radius/2
  int frequency = 6;        // polar wave count, >= 1
  int subdivisions = 4;
  unsigned seed = 0;
  double bulge = 0.0;       // prolate deformation factor, in [0, 0.5)
};

struct Phantom {
  TriangleMesh mesh;
  LandmarkSet landmarks;
};

TriangleMesh make_phantom_mesh(const PhantomSpec& spec);

/// Crest vertices within half a mean edge of the analytic ridge circles;
/// fundus chains walked along the analytic valley circles in azimuth order
/// (gaps bridged with graph-shortest paths so consecutive vertices stay
/// adjacent). Throws EmptyResultError when no landmark candidates exist
/// (amplitude 0 leaves the sphere unwrinkled).
LandmarkSet make_phantom_landmarks(const PhantomSpec& spec, const TriangleMesh& mesh);

Phantom generate_phantom(const PhantomSpec& spec);

/// Population with radii spanning base_radius..4*base_radius (geometric
/// ramp) and relative wrinkle amplitude rising from 6% to 12% of the radius,
/// mimicking the coupling of folding to size. Deterministic in the seed;
/// returned in size order.
std::vector<PhantomSpec> phantom_family(int count, unsigned seed, double base_radius = 20.0,
                                        int subdivisions = 4);

}  // namespace sulcdepth
