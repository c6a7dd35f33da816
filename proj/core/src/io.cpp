#include "adaptudf/io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

#include "adaptudf/error.hpp"

namespace adaptudf {
namespace {

std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

[[noreturn]] void parse_fail_line(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + what);
}

[[noreturn]] void parse_fail_byte(std::size_t offset, const std::string& what) {
  throw Error(ErrorCode::ParseError, "byte " + std::to_string(offset) + ": " + what);
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; }

std::vector<std::string_view> split_tokens(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    const std::size_t start = i;
    while (i < line.size() && !is_space(line[i])) ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

std::optional<double> to_double(std::string_view token) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) return std::nullopt;
  return value;
}

// Iterates over lines of a text buffer, tracking 1-based line numbers.
class LineReader {
 public:
  explicit LineReader(std::string_view text) : text_(text) {}

  bool next(std::string_view& line) {
    if (pos_ >= text_.size()) return false;
    const std::size_t end = text_.find('\n', pos_);
    const std::size_t stop = end == std::string_view::npos ? text_.size() : end;
    line = text_.substr(pos_, stop - pos_);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    pos_ = end == std::string_view::npos ? text_.size() : end + 1;
    ++line_no_;
    return true;
  }

  std::size_t line_number() const noexcept { return line_no_; }
  std::size_t offset() const noexcept { return pos_; }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_no_ = 0;
};

void normalize_normals(PointCloud& cloud) {
  for (std::size_t i = 0; i < cloud.normals.size(); ++i) {
    const double len = norm(cloud.normals[i]);
    if (!(len > 0.0) || !std::isfinite(len)) {
      throw Error(ErrorCode::ParseError, "record " + std::to_string(i) + ": zero-length normal");
    }
    cloud.normals[i] = cloud.normals[i] / len;
  }
}

PointCloud parse_xyz(std::string_view content) {
  PointCloud cloud;
  bool with_normals = false;
  LineReader reader(content);
  std::string_view line;
  while (reader.next(line)) {
    const auto tokens = split_tokens(line);
    if (tokens.empty() || tokens.front().front() == '#') continue;
    if (tokens.size() != 3 && tokens.size() != 6) {
      parse_fail_line(reader.line_number(), "expected 3 or 6 values, found " + std::to_string(tokens.size()));
    }
    const bool has_normal = tokens.size() == 6;
    if (cloud.points.empty()) {
      with_normals = has_normal;
    } else if (has_normal != with_normals) {
      parse_fail_line(reader.line_number(), "inconsistent column count");
    }
    std::array<double, 6> v{};
    for (std::size_t t = 0; t < tokens.size(); ++t) {
      const auto value = to_double(tokens[t]);
      if (!value) parse_fail_line(reader.line_number(), "invalid number '" + std::string(tokens[t]) + "'");
      v[t] = *value;
    }
    cloud.points.push_back({v[0], v[1], v[2]});
    if (has_normal) cloud.normals.push_back({v[3], v[4], v[5]});
  }
  normalize_normals(cloud);
  return cloud;
}

PointCloud parse_obj_points(std::string_view content) {
  PointCloud cloud;
  std::vector<Point3> vn;
  LineReader reader(content);
  std::string_view line;
  while (reader.next(line)) {
    const auto tokens = split_tokens(line);
    if (tokens.empty()) continue;
    const bool is_v = tokens[0] == "v";
    const bool is_vn = tokens[0] == "vn";
    if (!is_v && !is_vn) continue;
    if (tokens.size() < 4) parse_fail_line(reader.line_number(), "vertex record needs 3 coordinates");
    Point3 p;
    for (int a = 0; a < 3; ++a) {
      const auto value = to_double(tokens[a + 1]);
      if (!value) parse_fail_line(reader.line_number(), "invalid number '" + std::string(tokens[a + 1]) + "'");
      p[a] = *value;
    }
    (is_v ? cloud.points : vn).push_back(p);
  }
  if (!vn.empty() && vn.size() == cloud.points.size()) {
    cloud.normals = std::move(vn);
    normalize_normals(cloud);
  }
  return cloud;
}

// ---------------------------------------------------------------------------
// PLY

enum class PlyType { Int8, UInt8, Int16, UInt16, Int32, UInt32, Float32, Float64 };

std::optional<PlyType> ply_type(std::string_view name) {
  if (name == "char" || name == "int8") return PlyType::Int8;
  if (name == "uchar" || name == "uint8") return PlyType::UInt8;
  if (name == "short" || name == "int16") return PlyType::Int16;
  if (name == "ushort" || name == "uint16") return PlyType::UInt16;
  if (name == "int" || name == "int32") return PlyType::Int32;
  if (name == "uint" || name == "uint32") return PlyType::UInt32;
  if (name == "float" || name == "float32") return PlyType::Float32;
  if (name == "double" || name == "float64") return PlyType::Float64;
  return std::nullopt;
}

std::size_t ply_size(PlyType t) {
  switch (t) {
    case PlyType::Int8:
    case PlyType::UInt8: return 1;
    case PlyType::Int16:
    case PlyType::UInt16: return 2;
    case PlyType::Int32:
    case PlyType::UInt32:
    case PlyType::Float32: return 4;
    case PlyType::Float64: return 8;
  }
  return 0;
}

template <typename T>
T load_le(const unsigned char* p) {
  std::array<unsigned char, sizeof(T)> bytes;
  std::memcpy(bytes.data(), p, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  T value;
  std::memcpy(&value, bytes.data(), sizeof(T));
  return value;
}

double load_ply_value(PlyType t, const unsigned char* p) {
  switch (t) {
    case PlyType::Int8: return load_le<std::int8_t>(p);
    case PlyType::UInt8: return load_le<std::uint8_t>(p);
    case PlyType::Int16: return load_le<std::int16_t>(p);
    case PlyType::UInt16: return load_le<std::uint16_t>(p);
    case PlyType::Int32: return load_le<std::int32_t>(p);
    case PlyType::UInt32: return load_le<std::uint32_t>(p);
    case PlyType::Float32: return load_le<float>(p);
    case PlyType::Float64: return load_le<double>(p);
  }
  return 0.0;
}

struct PlyProperty {
  std::string name;
  PlyType type = PlyType::Float32;
  bool is_list = false;
  PlyType count_type = PlyType::UInt8;
};

struct PlyElement {
  std::string name;
  std::size_t count = 0;
  std::vector<PlyProperty> properties;
};

struct PlyHeader {
  bool binary = false;
  std::vector<PlyElement> elements;
  std::size_t body_offset = 0;
  std::size_t body_line = 0;
};

PlyHeader parse_ply_header(std::string_view content) {
  PlyHeader header;
  LineReader reader(content);
  std::string_view line;
  if (!reader.next(line) || split_tokens(line) != std::vector<std::string_view>{"ply"}) {
    parse_fail_line(1, "missing 'ply' magic");
  }
  bool have_format = false;
  while (true) {
    if (!reader.next(line)) parse_fail_line(reader.line_number(), "missing end_header");
    const auto tokens = split_tokens(line);
    if (tokens.empty()) continue;
    const auto& key = tokens[0];
    if (key == "end_header") break;
    if (key == "comment" || key == "obj_info") continue;
    if (key == "format") {
      if (tokens.size() != 3) parse_fail_line(reader.line_number(), "malformed format line");
      if (tokens[1] == "ascii") {
        header.binary = false;
      } else if (tokens[1] == "binary_little_endian") {
        header.binary = true;
      } else {
        throw Error(ErrorCode::UnsupportedFormat, "PLY encoding '" + std::string(tokens[1]) + "'");
      }
      have_format = true;
    } else if (key == "element") {
      if (tokens.size() != 3) parse_fail_line(reader.line_number(), "malformed element line");
      const auto count = to_double(tokens[2]);
      if (!count || *count < 0 || *count != static_cast<double>(static_cast<std::size_t>(*count))) {
        parse_fail_line(reader.line_number(), "invalid element count");
      }
      header.elements.push_back({std::string(tokens[1]), static_cast<std::size_t>(*count), {}});
    } else if (key == "property") {
      if (header.elements.empty()) parse_fail_line(reader.line_number(), "property before element");
      PlyProperty prop;
      if (tokens.size() == 5 && tokens[1] == "list") {
        const auto ct = ply_type(tokens[2]);
        const auto it = ply_type(tokens[3]);
        if (!ct || !it) parse_fail_line(reader.line_number(), "unknown list property type");
        prop.is_list = true;
        prop.count_type = *ct;
        prop.type = *it;
        prop.name = std::string(tokens[4]);
      } else if (tokens.size() == 3) {
        const auto t = ply_type(tokens[1]);
        if (!t) parse_fail_line(reader.line_number(), "unknown property type '" + std::string(tokens[1]) + "'");
        prop.type = *t;
        prop.name = std::string(tokens[2]);
      } else {
        parse_fail_line(reader.line_number(), "malformed property line");
      }
      header.elements.back().properties.push_back(std::move(prop));
    } else {
      parse_fail_line(reader.line_number(), "unexpected header keyword '" + std::string(key) + "'");
    }
  }
  if (!have_format) parse_fail_line(reader.line_number(), "missing format line");
  header.body_offset = reader.offset();
  header.body_line = reader.line_number();
  return header;
}

// Column positions of the vertex attributes the pipeline consumes.
struct VertexLayout {
  std::array<int, 3> position{-1, -1, -1};
  std::array<int, 3> normal{-1, -1, -1};
  bool has_normals() const { return normal[0] >= 0 && normal[1] >= 0 && normal[2] >= 0; }
};

VertexLayout vertex_layout(const PlyElement& element) {
  VertexLayout layout;
  constexpr std::array<std::string_view, 3> pos_names{"x", "y", "z"};
  constexpr std::array<std::string_view, 3> nrm_names{"nx", "ny", "nz"};
  for (std::size_t i = 0; i < element.properties.size(); ++i) {
    const auto& prop = element.properties[i];
    for (int a = 0; a < 3; ++a) {
      if (prop.name == pos_names[a]) layout.position[a] = static_cast<int>(i);
      if (prop.name == nrm_names[a]) layout.normal[a] = static_cast<int>(i);
    }
  }
  for (int a = 0; a < 3; ++a) {
    if (layout.position[a] < 0) {
      throw Error(ErrorCode::ParseError, "vertex element lacks property '" + std::string(pos_names[a]) + "'");
    }
    if (element.properties[layout.position[a]].is_list) {
      throw Error(ErrorCode::ParseError, "vertex coordinate declared as list");
    }
  }
  if (layout.has_normals()) {
    for (int a = 0; a < 3; ++a) {
      if (element.properties[layout.normal[a]].is_list) {
        throw Error(ErrorCode::ParseError, "vertex normal declared as list");
      }
    }
  }
  return layout;
}

void store_vertex(PointCloud& cloud, const VertexLayout& layout, const std::vector<double>& row) {
  cloud.points.push_back({row[layout.position[0]], row[layout.position[1]], row[layout.position[2]]});
  if (layout.has_normals()) {
    cloud.normals.push_back({row[layout.normal[0]], row[layout.normal[1]], row[layout.normal[2]]});
  }
}

PointCloud parse_ply_ascii(std::string_view content, const PlyHeader& header) {
  PointCloud cloud;
  LineReader reader(content.substr(header.body_offset));
  const std::size_t line_base = header.body_line;
  std::string_view line;
  for (const auto& element : header.elements) {
    const bool is_vertex = element.name == "vertex";
    const VertexLayout layout = is_vertex ? vertex_layout(element) : VertexLayout{};
    for (std::size_t r = 0; r < element.count; ++r) {
      std::vector<std::string_view> tokens;
      do {
        if (!reader.next(line)) {
          parse_fail_line(line_base + reader.line_number() + 1,
                          "file ends after " + std::to_string(r) + " of " + std::to_string(element.count) +
                              " '" + element.name + "' records");
        }
        tokens = split_tokens(line);
      } while (tokens.empty());
      const std::size_t line_no = line_base + reader.line_number();
      if (!is_vertex) continue;

      std::vector<double> row(element.properties.size(), 0.0);
      std::size_t t = 0;
      for (std::size_t p = 0; p < element.properties.size(); ++p) {
        const auto& prop = element.properties[p];
        if (t >= tokens.size()) parse_fail_line(line_no, "too few values in vertex record");
        const auto value = to_double(tokens[t++]);
        if (!value) parse_fail_line(line_no, "invalid number");
        if (prop.is_list) {
          t += static_cast<std::size_t>(*value);
          continue;
        }
        row[p] = *value;
      }
      if (t > tokens.size()) parse_fail_line(line_no, "too few values in vertex record");
      store_vertex(cloud, layout, row);
    }
  }
  return cloud;
}

PointCloud parse_ply_binary(std::string_view content, const PlyHeader& header) {
  PointCloud cloud;
  const auto* data = reinterpret_cast<const unsigned char*>(content.data());
  std::size_t pos = header.body_offset;
  const std::size_t size = content.size();

  auto need = [&](std::size_t bytes, const PlyElement& element, std::size_t record) {
    if (pos + bytes > size) {
      parse_fail_byte(pos, "file ends inside record " + std::to_string(record) + " of " +
                               std::to_string(element.count) + " '" + element.name + "' records");
    }
  };

  for (const auto& element : header.elements) {
    const bool is_vertex = element.name == "vertex";
    const VertexLayout layout = is_vertex ? vertex_layout(element) : VertexLayout{};
    std::vector<double> row(element.properties.size(), 0.0);
    for (std::size_t r = 0; r < element.count; ++r) {
      for (std::size_t p = 0; p < element.properties.size(); ++p) {
        const auto& prop = element.properties[p];
        if (prop.is_list) {
          need(ply_size(prop.count_type), element, r);
          const double n = load_ply_value(prop.count_type, data + pos);
          pos += ply_size(prop.count_type);
          if (n < 0) parse_fail_byte(pos, "negative list length");
          const std::size_t bytes = static_cast<std::size_t>(n) * ply_size(prop.type);
          need(bytes, element, r);
          pos += bytes;
        } else {
          need(ply_size(prop.type), element, r);
          row[p] = load_ply_value(prop.type, data + pos);
          pos += ply_size(prop.type);
        }
      }
      if (is_vertex) store_vertex(cloud, layout, row);
    }
  }
  return cloud;
}

PointCloud parse_ply(std::string_view content) {
  const PlyHeader header = parse_ply_header(content);
  const bool has_vertex = std::any_of(header.elements.begin(), header.elements.end(),
                                      [](const PlyElement& e) { return e.name == "vertex"; });
  if (!has_vertex) throw Error(ErrorCode::ParseError, "PLY header declares no vertex element");
  PointCloud cloud = header.binary ? parse_ply_binary(content, header) : parse_ply_ascii(content, header);
  normalize_normals(cloud);
  return cloud;
}

void append_number(std::string& out, double value) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  out.append(buf.data(), ptr);
}

}  // namespace

CloudFileFormat format_from_extension(const std::filesystem::path& path) {
  const std::string ext = lowercase(path.extension().string());
  if (ext == ".xyz") return CloudFileFormat::XYZ_ASCII;
  if (ext == ".ply") return CloudFileFormat::PLY_ASCII;
  if (ext == ".obj") return CloudFileFormat::OBJ_POINTS;
  throw Error(ErrorCode::UnsupportedFormat, "unrecognized extension '" + ext + "' of " + path.string());
}

PointCloud parse_point_cloud(std::string_view content, CloudFileFormat format) {
  PointCloud cloud;
  switch (format) {
    case CloudFileFormat::XYZ_ASCII: cloud = parse_xyz(content); break;
    case CloudFileFormat::PLY_ASCII:
    case CloudFileFormat::PLY_BINARY_LE: cloud = parse_ply(content); break;
    case CloudFileFormat::OBJ_POINTS: cloud = parse_obj_points(content); break;
  }
  for (std::size_t i = 0; i < cloud.points.size(); ++i) {
    if (!is_finite(cloud.points[i])) {
      throw Error(ErrorCode::ParseError, "record " + std::to_string(i) + ": non-finite coordinate");
    }
  }
  return cloud;
}

PointCloud read_point_cloud(const std::filesystem::path& path, std::optional<CloudFileFormat> format) {
  const CloudFileFormat fmt = format ? *format : format_from_extension(path);
  const std::string content = read_file(path);
  try {
    return parse_point_cloud(content, fmt);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::ParseError) throw;
    throw Error(ErrorCode::ParseError, path.string() + ": " + e.message());
  }
}

void write_point_cloud_xyz(const PointCloud& cloud, const std::filesystem::path& path) {
  std::string out;
  out.reserve(cloud.size() * 64);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const Point3 p = cloud.points[i];
    append_number(out, p.x);
    out += ' ';
    append_number(out, p.y);
    out += ' ';
    append_number(out, p.z);
    if (cloud.has_normals()) {
      const Point3 n = cloud.normals[i];
      for (double c : {n.x, n.y, n.z}) {
        out += ' ';
        append_number(out, c);
      }
    }
    out += '\n';
  }
  write_file(path, out);
}

std::string format_mesh_obj(const TriangleMesh& mesh) {
  std::string out;
  out.reserve(mesh.vertices.size() * 48 + mesh.faces.size() * 24);
  for (const Point3& v : mesh.vertices) {
    out += "v ";
    append_number(out, v.x);
    out += ' ';
    append_number(out, v.y);
    out += ' ';
    append_number(out, v.z);
    out += '\n';
  }
  for (const Face& f : mesh.faces) {
    out += "f ";
    out += std::to_string(f[0] + 1);
    out += ' ';
    out += std::to_string(f[1] + 1);
    out += ' ';
    out += std::to_string(f[2] + 1);
    out += '\n';
  }
  return out;
}

void write_mesh(const TriangleMesh& mesh, const std::filesystem::path& path) {
  mesh.validate();
  write_file(path, format_mesh_obj(mesh));
}

TriangleMesh parse_mesh_obj(std::string_view content) {
  TriangleMesh mesh;
  std::vector<std::pair<std::size_t, std::vector<long long>>> polygons;
  LineReader reader(content);
  std::string_view line;
  while (reader.next(line)) {
    const auto tokens = split_tokens(line);
    if (tokens.empty()) continue;
    if (tokens[0] == "v") {
      if (tokens.size() < 4) parse_fail_line(reader.line_number(), "vertex record needs 3 coordinates");
      Point3 p;
      for (int a = 0; a < 3; ++a) {
        const auto value = to_double(tokens[a + 1]);
        if (!value) parse_fail_line(reader.line_number(), "invalid number");
        p[a] = *value;
      }
      mesh.vertices.push_back(p);
    } else if (tokens[0] == "f") {
      if (tokens.size() < 4) parse_fail_line(reader.line_number(), "face needs at least 3 vertices");
      std::vector<long long> refs;
      for (std::size_t t = 1; t < tokens.size(); ++t) {
        const auto head = tokens[t].substr(0, tokens[t].find('/'));
        long long idx = 0;
        const auto [ptr, ec] = std::from_chars(head.data(), head.data() + head.size(), idx);
        if (ec != std::errc() || ptr != head.data() + head.size() || idx == 0) {
          parse_fail_line(reader.line_number(), "invalid face index");
        }
        // Relative indices refer to vertices declared so far.
        if (idx < 0) idx = static_cast<long long>(mesh.vertices.size()) + idx + 1;
        refs.push_back(idx - 1);
      }
      polygons.emplace_back(reader.line_number(), std::move(refs));
    }
  }
  const auto n = static_cast<long long>(mesh.vertices.size());
  for (const auto& [line_no, refs] : polygons) {
    for (long long r : refs) {
      if (r < 0 || r >= n) parse_fail_line(line_no, "face index out of range");
    }
    for (std::size_t k = 1; k + 1 < refs.size(); ++k) {
      mesh.faces.push_back({static_cast<std::uint32_t>(refs[0]), static_cast<std::uint32_t>(refs[k]),
                            static_cast<std::uint32_t>(refs[k + 1])});
    }
  }
  return mesh;
}

TriangleMesh read_mesh(const std::filesystem::path& path) { return parse_mesh_obj(read_file(path)); }

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::IoError, "read failed for " + path.string());
  return std::move(buffer).str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

}  // namespace adaptudf
