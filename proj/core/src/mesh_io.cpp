#include "sulcdepth/mesh_io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <vector>

namespace sulcdepth {
namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// PLY scalar types we accept, with their byte widths.
int ply_type_size(const std::string& t) {
  if (t == "char" || t == "uchar" || t == "int8" || t == "uint8") return 1;
  if (t == "short" || t == "ushort" || t == "int16" || t == "uint16") return 2;
  if (t == "int" || t == "uint" || t == "int32" || t == "uint32" || t == "float" || t == "float32") return 4;
  if (t == "double" || t == "float64") return 8;
  throw ParseError("unknown PLY type: " + t);
}

bool ply_type_is_float(const std::string& t) {
  return t == "float" || t == "float32" || t == "double" || t == "float64";
}

double read_binary_scalar(std::istream& in, const std::string& type) {
  char buf[8];
  const int size = ply_type_size(type);
  if (!in.read(buf, size)) throw ParseError("unexpected end of binary PLY data");
  if (type == "float" || type == "float32") {
    float v;
    std::memcpy(&v, buf, 4);
    return static_cast<double>(v);
  }
  if (type == "double" || type == "float64") {
    double v;
    std::memcpy(&v, buf, 8);
    return v;
  }
  // Integer types, little endian, sign-extended where signed.
  const bool is_signed = type[0] != 'u';
  std::uint64_t raw = 0;
  for (int i = size - 1; i >= 0; --i) raw = (raw << 8) | static_cast<unsigned char>(buf[i]);
  if (is_signed) {
    switch (size) {
      case 1: return static_cast<double>(static_cast<std::int8_t>(raw));
      case 2: return static_cast<double>(static_cast<std::int16_t>(raw));
      case 4: return static_cast<double>(static_cast<std::int32_t>(raw));
      default: return static_cast<double>(static_cast<std::int64_t>(raw));
    }
  }
  return static_cast<double>(raw);
}

struct PlyProperty {
  bool is_list = false;
  std::string count_type;
  std::string value_type;
  std::string name;
};

struct PlyElement {
  std::string name;
  long count = 0;
  std::vector<PlyProperty> properties;
};

TriangleMesh load_ply(std::ifstream& in, const std::string& path) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path + ": empty file");
  if (line.size() && line.back() == '\r') line.pop_back();
  if (line != "ply") throw ParseError(path + ": missing ply magic");

  std::string format;
  std::vector<PlyElement> elements;
  while (std::getline(in, line)) {
    if (line.size() && line.back() == '\r') line.pop_back();
    std::istringstream ls(line);
    std::string word;
    ls >> word;
    if (word == "comment" || word == "obj_info" || word.empty()) continue;
    if (word == "format") {
      ls >> format;
      if (format != "ascii" && format != "binary_little_endian")
        throw ParseError(path + ": unsupported PLY format " + format);
    } else if (word == "element") {
      PlyElement e;
      ls >> e.name >> e.count;
      if (!ls || e.count < 0) throw ParseError(path + ": malformed element line");
      elements.push_back(e);
    } else if (word == "property") {
      if (elements.empty()) throw ParseError(path + ": property before element");
      PlyProperty p;
      std::string t;
      ls >> t;
      if (t == "list") {
        p.is_list = true;
        ls >> p.count_type >> p.value_type >> p.name;
      } else {
        p.value_type = t;
        ls >> p.name;
      }
      if (!ls) throw ParseError(path + ": malformed property line");
      ply_type_size(p.value_type);
      elements.back().properties.push_back(p);
    } else if (word == "end_header") {
      break;
    } else {
      throw ParseError(path + ": unexpected header keyword " + word);
    }
  }
  if (format.empty()) throw ParseError(path + ": missing format line");

  const bool binary = format == "binary_little_endian";
  TriangleMesh::Vertices vertices;
  std::vector<std::array<int, 3>> tris;

  auto read_ascii_token = [&](double& out) {
    if (!(in >> out)) throw ParseError(path + ": unexpected end of ASCII PLY data");
  };

  for (const PlyElement& e : elements) {
    if (e.name == "vertex") {
      int ix = -1, iy = -1, iz = -1;
      for (size_t i = 0; i < e.properties.size(); ++i) {
        const auto& p = e.properties[i];
        if (p.is_list) throw ParseError(path + ": list property on vertex element");
        if (p.name == "x") ix = static_cast<int>(i);
        if (p.name == "y") iy = static_cast<int>(i);
        if (p.name == "z") iz = static_cast<int>(i);
        if ((p.name == "x" || p.name == "y" || p.name == "z") && !ply_type_is_float(p.value_type))
          throw ParseError(path + ": vertex positions must be float or double");
      }
      if (ix < 0 || iy < 0 || iz < 0) throw ParseError(path + ": vertex element lacks x/y/z");
      vertices.resize(e.count, 3);
      std::vector<double> row(e.properties.size());
      for (long v = 0; v < e.count; ++v) {
        for (size_t i = 0; i < e.properties.size(); ++i) {
          if (binary)
            row[i] = read_binary_scalar(in, e.properties[i].value_type);
          else
            read_ascii_token(row[i]);
        }
        vertices(v, 0) = row[ix];
        vertices(v, 1) = row[iy];
        vertices(v, 2) = row[iz];
      }
    } else if (e.name == "face") {
      int ilist = -1;
      for (size_t i = 0; i < e.properties.size(); ++i)
        if (e.properties[i].is_list &&
            (e.properties[i].name == "vertex_indices" || e.properties[i].name == "vertex_index"))
          ilist = static_cast<int>(i);
      if (ilist < 0) throw ParseError(path + ": face element lacks vertex_indices list");
      tris.reserve(tris.size() + static_cast<size_t>(e.count));
      for (long f = 0; f < e.count; ++f) {
        for (size_t i = 0; i < e.properties.size(); ++i) {
          const auto& p = e.properties[i];
          if (!p.is_list) {
            double ignored;
            if (binary)
              ignored = read_binary_scalar(in, p.value_type);
            else
              read_ascii_token(ignored);
            (void)ignored;
            continue;
          }
          double dcount;
          if (binary)
            dcount = read_binary_scalar(in, p.count_type);
          else
            read_ascii_token(dcount);
          const long count = static_cast<long>(dcount);
          if (count < 3) throw ParseError(path + ": face with fewer than 3 vertices");
          std::vector<long> poly(count);
          for (long k = 0; k < count; ++k) {
            double idx;
            if (binary)
              idx = read_binary_scalar(in, p.value_type);
            else
              read_ascii_token(idx);
            poly[k] = static_cast<long>(idx);
          }
          if (static_cast<int>(i) == ilist) {
            for (long k = 1; k + 1 < count; ++k)
              tris.push_back({static_cast<int>(poly[0]), static_cast<int>(poly[k]),
                              static_cast<int>(poly[k + 1])});
          }
        }
      }
    } else {
      // Skip unknown elements.
      for (long r = 0; r < e.count; ++r) {
        for (const auto& p : e.properties) {
          if (p.is_list) {
            double dcount;
            if (binary)
              dcount = read_binary_scalar(in, p.count_type);
            else
              read_ascii_token(dcount);
            for (long k = 0; k < static_cast<long>(dcount); ++k) {
              double ignored;
              if (binary)
                ignored = read_binary_scalar(in, p.value_type);
              else
                read_ascii_token(ignored);
              (void)ignored;
            }
          } else {
            double ignored;
            if (binary)
              ignored = read_binary_scalar(in, p.value_type);
            else
              read_ascii_token(ignored);
            (void)ignored;
          }
        }
      }
    }
  }

  TriangleMesh::Faces faces(tris.size(), 3);
  for (size_t i = 0; i < tris.size(); ++i)
    for (int k = 0; k < 3; ++k) faces(static_cast<int>(i), k) = tris[i][k];
  return TriangleMesh::create(std::move(vertices), std::move(faces));
}

TriangleMesh load_obj(std::ifstream& in, const std::string& path) {
  std::vector<Eigen::Vector3d> verts;
  std::vector<std::array<int, 3>> tris;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.size() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "v") {
      Eigen::Vector3d p;
      if (!(ls >> p.x() >> p.y() >> p.z()))
        throw ParseError(path + ":" + std::to_string(lineno) + ": malformed vertex");
      verts.push_back(p);
    } else if (tag == "f") {
      std::vector<long> poly;
      std::string token;
      while (ls >> token) {
        // Formats: i, i/t, i//n, i/t/n. Only the position index matters.
        const size_t slash = token.find('/');
        const std::string head = slash == std::string::npos ? token : token.substr(0, slash);
        long idx;
        try {
          idx = std::stol(head);
        } catch (const std::exception&) {
          throw ParseError(path + ":" + std::to_string(lineno) + ": malformed face index");
        }
        if (idx < 0) idx = static_cast<long>(verts.size()) + idx + 1;  // relative indexing
        poly.push_back(idx - 1);                                       // OBJ is 1-based
      }
      if (poly.size() < 3)
        throw ParseError(path + ":" + std::to_string(lineno) + ": face with fewer than 3 vertices");
      for (size_t k = 1; k + 1 < poly.size(); ++k)
        tris.push_back({static_cast<int>(poly[0]), static_cast<int>(poly[k]),
                        static_cast<int>(poly[k + 1])});
    }
    // vn/vt/usemtl/etc are ignored.
  }
  TriangleMesh::Vertices vertices(verts.size(), 3);
  for (size_t i = 0; i < verts.size(); ++i) vertices.row(static_cast<int>(i)) = verts[i];
  TriangleMesh::Faces faces(tris.size(), 3);
  for (size_t i = 0; i < tris.size(); ++i)
    for (int k = 0; k < 3; ++k) faces(static_cast<int>(i), k) = tris[i][k];
  return TriangleMesh::create(std::move(vertices), std::move(faces));
}

void write_binary_header(std::ostream& out, int nv, int nf, bool with_quality) {
  out << "ply\nformat binary_little_endian 1.0\n"
      << "element vertex " << nv << "\n"
      << "property double x\nproperty double y\nproperty double z\n";
  if (with_quality) out << "property double quality\n";
  out << "element face " << nf << "\n"
      << "property list uchar uint vertex_indices\nend_header\n";
}

}  // namespace

TriangleMesh load_mesh(const std::string& path, MeshFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  if (format == MeshFormat::auto_detect) {
    const std::string low = lower(path);
    if (ends_with(low, ".obj")) {
      format = MeshFormat::obj;
    } else if (ends_with(low, ".ply")) {
      format = MeshFormat::ply;
    } else {
      char magic[3] = {0, 0, 0};
      in.read(magic, 3);
      in.seekg(0);
      format = std::strncmp(magic, "ply", 3) == 0 ? MeshFormat::ply : MeshFormat::obj;
    }
  }
  return format == MeshFormat::ply ? load_ply(in, path) : load_obj(in, path);
}

void save_mesh(const TriangleMesh& mesh, const std::string& path, PlyEncoding encoding) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  const int nv = mesh.vertex_count();
  const int nf = mesh.face_count();
  if (encoding == PlyEncoding::ascii) {
    out << "ply\nformat ascii 1.0\n"
        << "element vertex " << nv << "\n"
        << "property double x\nproperty double y\nproperty double z\n"
        << "element face " << nf << "\n"
        << "property list uchar uint vertex_indices\nend_header\n";
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (int v = 0; v < nv; ++v)
      out << mesh.vertices()(v, 0) << ' ' << mesh.vertices()(v, 1) << ' '
          << mesh.vertices()(v, 2) << '\n';
    for (int f = 0; f < nf; ++f)
      out << "3 " << mesh.faces()(f, 0) << ' ' << mesh.faces()(f, 1) << ' '
          << mesh.faces()(f, 2) << '\n';
  } else {
    write_binary_header(out, nv, nf, false);
    for (int v = 0; v < nv; ++v) {
      double xyz[3] = {mesh.vertices()(v, 0), mesh.vertices()(v, 1), mesh.vertices()(v, 2)};
      out.write(reinterpret_cast<const char*>(xyz), sizeof(xyz));
    }
    for (int f = 0; f < nf; ++f) {
      const unsigned char count = 3;
      out.write(reinterpret_cast<const char*>(&count), 1);
      const std::uint32_t idx[3] = {static_cast<std::uint32_t>(mesh.faces()(f, 0)),
                                    static_cast<std::uint32_t>(mesh.faces()(f, 1)),
                                    static_cast<std::uint32_t>(mesh.faces()(f, 2))};
      out.write(reinterpret_cast<const char*>(idx), sizeof(idx));
    }
  }
  if (!out) throw IoError("write failed for " + path);
}

void save_field(const TriangleMesh& mesh, const VertexField& field, const std::string& path) {
  if (field.values.size() != mesh.vertex_count())
    throw ValidationError("field length does not match vertex count");
  if (ends_with(lower(path), ".ply")) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << "ply\nformat ascii 1.0\n"
        << "element vertex " << mesh.vertex_count() << "\n"
        << "property double x\nproperty double y\nproperty double z\nproperty double quality\n"
        << "element face " << mesh.face_count() << "\n"
        << "property list uchar uint vertex_indices\nend_header\n";
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (int v = 0; v < mesh.vertex_count(); ++v)
      out << mesh.vertices()(v, 0) << ' ' << mesh.vertices()(v, 1) << ' '
          << mesh.vertices()(v, 2) << ' ' << field.values(v) << '\n';
    for (int f = 0; f < mesh.face_count(); ++f)
      out << "3 " << mesh.faces()(f, 0) << ' ' << mesh.faces()(f, 1) << ' '
          << mesh.faces()(f, 2) << '\n';
    if (!out) throw IoError("write failed for " + path);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << "vertex_index,value\n";
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (int v = 0; v < mesh.vertex_count(); ++v) out << v << ',' << field.values(v) << '\n';
  if (!out) throw IoError("write failed for " + path);
}

VertexField load_field(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path + ": empty field file");
  std::vector<std::pair<long, double>> rows;
  long max_index = -1;
  long lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.size() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const size_t comma = line.find(',');
    if (comma == std::string::npos)
      throw ParseError(path + ":" + std::to_string(lineno) + ": expected vertex_index,value");
    try {
      const long idx = std::stol(line.substr(0, comma));
      const double value = std::stod(line.substr(comma + 1));
      if (idx < 0) throw ParseError(path + ":" + std::to_string(lineno) + ": negative vertex index");
      rows.emplace_back(idx, value);
      max_index = std::max(max_index, idx);
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception&) {
      throw ParseError(path + ":" + std::to_string(lineno) + ": malformed row");
    }
  }
  if (rows.empty()) throw ParseError(path + ": no data rows");
  VertexField field;
  field.values = Eigen::VectorXd::Zero(max_index + 1);
  for (const auto& [idx, value] : rows) field.values(idx) = value;
  return field;
}

}  // namespace sulcdepth
