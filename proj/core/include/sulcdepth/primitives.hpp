#pragma once

#include "sulcdepth/mesh.hpp"

namespace sulcdepth {

/// Unit-radius icosahedron subdivided `subdivisions` times and reprojected to
/// the sphere of the given radius, centered at the origin. subdivisions = 0
/// gives the raw icosahedron (12 vertices). Each level quadruples the faces.
TriangleMesh make_icosphere(int subdivisions, double radius = 1.0);

/// Regular tetrahedron inscribed in the sphere of the given radius.
TriangleMesh make_tetrahedron(double radius = 1.0);

/// Axis-aligned cube of the given half extent, two triangles per side.
TriangleMesh make_cube(double half_extent = 1.0);

/// Open planar grid in the z = 0 plane spanning [0, nx*dx] x [0, ny*dx] with
/// (nx+1)*(ny+1) vertices; each quad split into two triangles. Not closed.
TriangleMesh make_grid(int nx, int ny, double dx = 1.0);

}  // namespace sulcdepth
