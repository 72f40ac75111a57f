#include "scenekit/ply.hpp"

#include "scenekit/error.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>
#include <vector>

namespace scenekit {

namespace {

enum class ScalarType { int8, uint8, int16, uint16, int32, uint32, float32, float64 };

std::size_t size_of(ScalarType t) {
  switch (t) {
    case ScalarType::int8:
    case ScalarType::uint8:
      return 1;
    case ScalarType::int16:
    case ScalarType::uint16:
      return 2;
    case ScalarType::int32:
    case ScalarType::uint32:
    case ScalarType::float32:
      return 4;
    case ScalarType::float64:
      return 8;
  }
  return 0;
}

std::optional<ScalarType> scalar_type(std::string_view name) {
  if (name == "char" || name == "int8") return ScalarType::int8;
  if (name == "uchar" || name == "uint8") return ScalarType::uint8;
  if (name == "short" || name == "int16") return ScalarType::int16;
  if (name == "ushort" || name == "uint16") return ScalarType::uint16;
  if (name == "int" || name == "int32") return ScalarType::int32;
  if (name == "uint" || name == "uint32") return ScalarType::uint32;
  if (name == "float" || name == "float32") return ScalarType::float32;
  if (name == "double" || name == "float64") return ScalarType::float64;
  return std::nullopt;
}

struct Property {
  std::string name;
  ScalarType type;
};

struct Header {
  PlyFormat format = PlyFormat::ascii;
  std::size_t vertex_count = 0;
  std::vector<Property> properties;
  std::size_t payload_offset = 0;
};

std::vector<std::string_view> split_words(std::string_view line) {
  std::vector<std::string_view> words;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) words.push_back(line.substr(start, i - start));
  }
  return words;
}

Header parse_header(std::string_view bytes) {
  Header header;
  std::size_t pos = 0;
  bool saw_format = false;
  bool in_vertex = false;
  bool saw_vertex = false;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& msg) -> void {
    throw IoError("PLY header line " + std::to_string(line_no) + ": " + msg);
  };

  while (true) {
    const std::size_t end = bytes.find('\n', pos);
    if (end == std::string_view::npos) {
      ++line_no;
      fail("missing end_header");
    }
    const std::string_view line = bytes.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    const auto words = split_words(line);
    if (line_no == 1) {
      if (words.size() != 1 || words[0] != "ply") fail("file does not start with 'ply'");
      continue;
    }
    if (words.empty()) continue;
    const std::string_view key = words[0];
    if (key == "comment" || key == "obj_info") continue;
    if (key == "end_header") break;
    if (key == "format") {
      if (words.size() != 3) fail("malformed format line");
      if (words[1] == "ascii") {
        header.format = PlyFormat::ascii;
      } else if (words[1] == "binary_little_endian") {
        header.format = PlyFormat::binary_little_endian;
      } else {
        fail("unsupported format '" + std::string(words[1]) + "'");
      }
      saw_format = true;
    } else if (key == "element") {
      if (words.size() != 3) fail("malformed element line");
      std::size_t count = 0;
      auto [p, ec] = std::from_chars(words[2].data(), words[2].data() + words[2].size(), count);
      if (ec != std::errc() || p != words[2].data() + words[2].size()) fail("malformed element count");
      if (words[1] == "vertex") {
        if (saw_vertex) fail("duplicate vertex element");
        saw_vertex = true;
        in_vertex = true;
        header.vertex_count = count;
      } else {
        if (count != 0) fail("unsupported element '" + std::string(words[1]) + "'");
        in_vertex = false;
      }
    } else if (key == "property") {
      if (words.size() >= 2 && words[1] == "list") fail("list properties are not supported");
      if (words.size() != 3) fail("malformed property line");
      if (!in_vertex) continue;
      const auto type = scalar_type(words[1]);
      if (!type) fail("unsupported property type '" + std::string(words[1]) + "'");
      header.properties.push_back({std::string(words[2]), *type});
    } else {
      fail("unexpected keyword '" + std::string(key) + "'");
    }
  }
  if (!saw_format) throw IoError("PLY header lacks a format line");
  if (!saw_vertex) throw IoError("PLY header lacks a vertex element");
  header.payload_offset = pos;
  return header;
}

struct Layout {
  int xyz[3] = {-1, -1, -1};
  int rgb[3] = {-1, -1, -1};
};

Layout locate(const Header& header) {
  Layout layout;
  static constexpr const char* kPos[3] = {"x", "y", "z"};
  static constexpr const char* kCol[3] = {"red", "green", "blue"};
  for (std::size_t i = 0; i < header.properties.size(); ++i) {
    const auto& p = header.properties[i];
    for (int a = 0; a < 3; ++a) {
      if (p.name == kPos[a]) {
        if (p.type != ScalarType::float32 && p.type != ScalarType::float64) {
          throw IoError("property '" + p.name + "' must be float or double");
        }
        layout.xyz[a] = static_cast<int>(i);
      }
      if (p.name == kCol[a]) {
        if (p.type != ScalarType::uint8) throw IoError("property '" + p.name + "' must be uchar");
        layout.rgb[a] = static_cast<int>(i);
      }
    }
  }
  for (int a = 0; a < 3; ++a) {
    if (layout.xyz[a] < 0) throw IoError(std::string("PLY vertex lacks property '") + kPos[a] + "'");
  }
  return layout;
}

template <typename T>
T read_le(const char* p) {
  T value;
  std::memcpy(&value, p, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    auto* b = reinterpret_cast<unsigned char*>(&value);
    std::reverse(b, b + sizeof(T));
  }
  return value;
}

template <typename T>
void write_le(std::string& out, T value) {
  if constexpr (std::endian::native == std::endian::big) {
    auto* b = reinterpret_cast<unsigned char*>(&value);
    std::reverse(b, b + sizeof(T));
  }
  out.append(reinterpret_cast<const char*>(&value), sizeof(T));
}

double read_scalar(const char* p, ScalarType t) {
  switch (t) {
    case ScalarType::int8:
      return read_le<std::int8_t>(p);
    case ScalarType::uint8:
      return read_le<std::uint8_t>(p);
    case ScalarType::int16:
      return read_le<std::int16_t>(p);
    case ScalarType::uint16:
      return read_le<std::uint16_t>(p);
    case ScalarType::int32:
      return read_le<std::int32_t>(p);
    case ScalarType::uint32:
      return read_le<std::uint32_t>(p);
    case ScalarType::float32:
      return read_le<float>(p);
    case ScalarType::float64:
      return read_le<double>(p);
  }
  return 0.0;
}

Point assemble(const std::vector<double>& values, const Layout& layout) {
  Point pt;
  for (int a = 0; a < 3; ++a) {
    pt.position[a] = values[layout.xyz[a]];
    pt.color[a] = layout.rgb[a] >= 0 ? values[layout.rgb[a]] / 255.0 : 0.0;
  }
  return pt;
}

PointCloud read_binary(std::string_view payload, const Header& header, const Layout& layout) {
  std::size_t stride = 0;
  for (const auto& p : header.properties) stride += size_of(p.type);
  if (header.vertex_count > 0 && payload.size() / stride < header.vertex_count) {
    throw IoError("PLY payload truncated: expected " + std::to_string(header.vertex_count) + " vertices, found " +
                  std::to_string(payload.size() / stride));
  }
  PointCloud cloud;
  cloud.points.reserve(header.vertex_count);
  std::vector<double> values(header.properties.size());
  const char* cursor = payload.data();
  for (std::size_t v = 0; v < header.vertex_count; ++v) {
    for (std::size_t i = 0; i < header.properties.size(); ++i) {
      values[i] = read_scalar(cursor, header.properties[i].type);
      cursor += size_of(header.properties[i].type);
    }
    cloud.points.push_back(assemble(values, layout));
  }
  return cloud;
}

PointCloud read_ascii(std::string_view payload, const Header& header, const Layout& layout) {
  PointCloud cloud;
  cloud.points.reserve(header.vertex_count);
  std::vector<double> values(header.properties.size());
  std::size_t pos = 0;
  for (std::size_t v = 0; v < header.vertex_count; ++v) {
    std::vector<std::string_view> words;
    while (words.empty()) {
      if (pos >= payload.size()) {
        throw IoError("PLY payload truncated: expected " + std::to_string(header.vertex_count) +
                      " vertices, found " + std::to_string(v));
      }
      std::size_t end = payload.find('\n', pos);
      if (end == std::string_view::npos) end = payload.size();
      words = split_words(payload.substr(pos, end - pos));
      pos = end + 1;
    }
    if (words.size() != values.size()) {
      throw IoError("PLY vertex " + std::to_string(v) + " has " + std::to_string(words.size()) + " values, expected " +
                    std::to_string(values.size()));
    }
    for (std::size_t i = 0; i < words.size(); ++i) {
      auto [p, ec] = std::from_chars(words[i].data(), words[i].data() + words[i].size(), values[i]);
      if (ec != std::errc() || p != words[i].data() + words[i].size()) {
        throw IoError("PLY vertex " + std::to_string(v) + ": malformed value '" + std::string(words[i]) + "'");
      }
      if (header.properties[i].type == ScalarType::float32) values[i] = static_cast<float>(values[i]);
    }
    cloud.points.push_back(assemble(values, layout));
  }
  return cloud;
}

std::uint8_t to_byte(double c) { return static_cast<std::uint8_t>(std::lround(std::clamp(c, 0.0, 1.0) * 255.0)); }

}  // namespace

PointCloud load_ply(std::string_view bytes) {
  const Header header = parse_header(bytes);
  const Layout layout = locate(header);
  const std::string_view payload = bytes.substr(header.payload_offset);
  return header.format == PlyFormat::ascii ? read_ascii(payload, header, layout)
                                           : read_binary(payload, header, layout);
}

std::string save_ply(const PointCloud& cloud, PlyFormat format) {
  std::string out = "ply\n";
  out += format == PlyFormat::ascii ? "format ascii 1.0\n" : "format binary_little_endian 1.0\n";
  out += "element vertex " + std::to_string(cloud.size()) + "\n";
  out += "property float x\nproperty float y\nproperty float z\n";
  out += "property uchar red\nproperty uchar green\nproperty uchar blue\n";
  out += "end_header\n";
  if (format == PlyFormat::ascii) {
    char buf[160];
    for (const auto& p : cloud.points) {
      // %.9g round-trips a float exactly.
      std::snprintf(buf, sizeof(buf), "%.9g %.9g %.9g %u %u %u\n", static_cast<double>(static_cast<float>(p.position.x())),
                    static_cast<double>(static_cast<float>(p.position.y())),
                    static_cast<double>(static_cast<float>(p.position.z())), to_byte(p.color.x()),
                    to_byte(p.color.y()), to_byte(p.color.z()));
      out += buf;
    }
    return out;
  }
  out.reserve(out.size() + cloud.size() * 15);
  for (const auto& p : cloud.points) {
    for (int a = 0; a < 3; ++a) write_le(out, static_cast<float>(p.position[a]));
    for (int a = 0; a < 3; ++a) write_le(out, to_byte(p.color[a]));
  }
  return out;
}

PointCloud read_ply_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return load_ply(bytes);
}

void write_ply_file(const std::filesystem::path& path, const PointCloud& cloud, PlyFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  const std::string bytes = save_ply(cloud, format);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace scenekit
