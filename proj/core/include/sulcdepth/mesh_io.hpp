#pragma once

#include <string>

#include "sulcdepth/mesh.hpp"

namespace sulcdepth {

enum class MeshFormat { ply, obj, auto_detect };
enum class PlyEncoding { ascii, binary_little_endian };

/// Loads PLY (ASCII or binary little-endian; float/double positions,
/// int/uint face indices) or ASCII OBJ (v/f records; polygon faces are
/// fan-triangulated). auto_detect dispatches on the file extension, falling
/// back to content sniffing ("ply" magic).
/// Throws IoError (unreadable), ParseError (malformed), ValidationError.
TriangleMesh load_mesh(const std::string& path, MeshFormat format = MeshFormat::auto_detect);

/// Writes the mesh as PLY. Binary is exact; ASCII uses max_digits10 doubles
/// so coordinates round-trip to 1e-6 or better.
void save_mesh(const TriangleMesh& mesh, const std::string& path,
               PlyEncoding encoding = PlyEncoding::binary_little_endian);

/// Writes a per-vertex field. Always writes CSV `vertex_index,value` with a
/// header; when `path` ends in .ply, writes instead an ASCII PLY carrying the
/// field as a per-vertex `quality` property.
void save_field(const TriangleMesh& mesh, const VertexField& field, const std::string& path);

/// Reads a `vertex_index,value` CSV written by save_field. The unit is not
/// stored in the file and defaults to dimensionless.
VertexField load_field(const std::string& path);

}  // namespace sulcdepth
