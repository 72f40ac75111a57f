#include "scenekit/script.hpp"

#include "scenekit/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

namespace scenekit {

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& message)
    : Error("line " + std::to_string(line) + (column ? ", column " + std::to_string(column) : std::string()) + ": " +
            message),
      line_(line),
      column_(column),
      detail_(message) {}

namespace {

bool is_ident_start(char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_'; }
bool is_ident_char(char c) { return is_ident_start(c) || (c >= '0' && c <= '9'); }
bool is_space(char c) { return c == ' ' || c == '\t'; }

bool is_identifier(std::string_view s) {
  if (s.empty() || !is_ident_start(s.front())) return false;
  return std::all_of(s.begin(), s.end(), is_ident_char);
}

enum class ArgKind { number, identifier, string };

struct Arg {
  ArgKind kind;
  std::string text;
  double value = 0.0;
  bool integral = false;
  std::size_t column = 0;
};

struct Statement {
  std::string ident;
  std::size_t ident_column = 0;
  std::string command;
  std::size_t command_column = 0;
  std::vector<Arg> args;
};

// Tokenizes `ident=Command(arg, ...)`, stopping at an unquoted '#'.
class LineParser {
 public:
  LineParser(std::string_view line, std::size_t line_no) : line_(line), line_no_(line_no) {}

  // Returns false for blank and comment-only lines.
  bool parse(Statement& out) {
    skip_space();
    if (at_end() || peek() == '#') return false;
    out.ident_column = column();
    out.ident = identifier("identifier");
    skip_space();
    expect('=');
    skip_space();
    out.command_column = column();
    out.command = identifier("command name");
    skip_space();
    expect('(');
    skip_space();
    if (!at_end() && peek() == ')') {
      ++pos_;
    } else {
      while (true) {
        skip_space();
        out.args.push_back(argument());
        skip_space();
        if (at_end()) fail("expected ',' or ')'");
        if (peek() == ',') {
          ++pos_;
          continue;
        }
        if (peek() == ')') {
          ++pos_;
          break;
        }
        fail(std::string("unexpected character '") + peek() + "'");
      }
    }
    skip_space();
    if (!at_end() && peek() != '#') fail("trailing characters after ')'");
    return true;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const { throw ParseError(line_no_, column(), message); }

  bool at_end() const { return pos_ >= line_.size(); }
  char peek() const { return line_[pos_]; }
  std::size_t column() const { return pos_ + 1; }

  void skip_space() {
    while (!at_end() && is_space(peek())) ++pos_;
  }

  void expect(char c) {
    if (at_end() || peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string identifier(const char* what) {
    if (at_end() || !is_ident_start(peek())) fail(std::string("expected ") + what);
    const std::size_t start = pos_;
    while (!at_end() && is_ident_char(peek())) ++pos_;
    return std::string(line_.substr(start, pos_ - start));
  }

  Arg argument() {
    Arg arg;
    arg.column = column();
    if (at_end()) fail("expected argument");
    const char c = peek();
    if (c == '"') {
      ++pos_;
      const std::size_t start = pos_;
      while (!at_end() && peek() != '"') ++pos_;
      if (at_end()) fail("unterminated string");
      arg.kind = ArgKind::string;
      arg.text = std::string(line_.substr(start, pos_ - start));
      ++pos_;
      return arg;
    }
    if (is_ident_start(c)) {
      arg.kind = ArgKind::identifier;
      arg.text = identifier("argument");
      return arg;
    }
    const std::size_t start = pos_;
    while (!at_end() && !is_space(peek()) && peek() != ',' && peek() != ')' && peek() != '#') ++pos_;
    std::string_view token = line_.substr(start, pos_ - start);
    if (token.empty()) {
      pos_ = start;
      fail("expected argument");
    }
    // from_chars rejects a leading '+'.
    std::string_view digits = token;
    if (digits.front() == '+') {
      digits.remove_prefix(1);
      if (!digits.empty() && digits.front() == '-') digits = {};
    }
    double value = 0.0;
    auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
    if (digits.empty() || ec != std::errc() || end != digits.data() + digits.size()) {
      pos_ = start;
      fail("malformed number '" + std::string(token) + "'");
    }
    arg.kind = ArgKind::number;
    arg.text = std::string(token);
    arg.value = value;
    arg.integral = token.find_first_of(".eE") == std::string_view::npos && std::isfinite(value);
    return arg;
  }

  std::string_view line_;
  std::size_t line_no_;
  std::size_t pos_ = 0;
};

int id_from_ident(const Statement& st, std::size_t line_no) {
  const auto underscore = st.ident.rfind('_');
  if (underscore == std::string::npos || underscore + 1 == st.ident.size()) {
    throw ParseError(line_no, st.ident_column, "identifier '" + st.ident + "' lacks a numeric '_<n>' suffix");
  }
  int id = 0;
  const char* first = st.ident.data() + underscore + 1;
  const char* last = st.ident.data() + st.ident.size();
  auto [end, ec] = std::from_chars(first, last, id);
  if (ec != std::errc() || end != last) {
    throw ParseError(line_no, st.ident_column, "identifier '" + st.ident + "' lacks a numeric '_<n>' suffix");
  }
  return id;
}

enum class Slot { pos_x, pos_y, pos_z, length, angle };

class ValueReader {
 public:
  ValueReader(const Statement& st, std::size_t line_no, const std::optional<QuantizationSpec>& spec)
      : st_(st), line_no_(line_no), spec_(spec) {}

  double number(std::size_t index, Slot slot) const {
    const Arg& arg = st_.args[index];
    if (arg.kind != ArgKind::number) {
      throw ParseError(line_no_, arg.column,
                       "argument " + std::to_string(index + 1) + " of " + st_.command + " must be a number");
    }
    if (!spec_) return arg.value;
    if (!arg.integral) {
      throw ParseError(line_no_, arg.column, "quantized argument '" + arg.text + "' must be an integer bin index");
    }
    if (arg.value < 0 || arg.value >= spec_->num_bins) {
      throw ParseError(line_no_, arg.column, "bin index " + arg.text + " out of range");
    }
    const int bin = static_cast<int>(arg.value);
    switch (slot) {
      case Slot::pos_x:
        return dequantize_coord(bin, *spec_, Axis::x);
      case Slot::pos_y:
        return dequantize_coord(bin, *spec_, Axis::y);
      case Slot::pos_z:
        return dequantize_coord(bin, *spec_, Axis::z);
      case Slot::length:
        return dequantize_length(bin, *spec_);
      case Slot::angle:
        return dequantize_angle(bin, *spec_);
    }
    return 0.0;
  }

  Vec3 point(std::size_t index) const {
    return {number(index, Slot::pos_x), number(index + 1, Slot::pos_y), number(index + 2, Slot::pos_z)};
  }

 private:
  const Statement& st_;
  std::size_t line_no_;
  const std::optional<QuantizationSpec>& spec_;
};

struct PendingRef {
  std::size_t opening_index;
  std::string wall_ident;
  std::size_t line;
  std::size_t column;
};

std::size_t expected_arity(std::string_view command) {
  if (command == "Wall") return 8;
  if (command == "Door" || command == "Window") return 6;
  if (command == "Bbox") return 8;
  return 0;
}

}  // namespace

ParseResult parse_script(std::string_view text, Strictness strictness,
                         const std::optional<QuantizationSpec>& quantization) {
  if (quantization) quantization->check();
  ParseResult result;
  Scene& scene = result.scene;
  std::set<std::string> idents;
  std::map<std::string, int> wall_ids;
  std::vector<PendingRef> pending;

  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++line_no;
    start = end + 1;

    Statement st;
    if (!LineParser(line, line_no).parse(st)) {
      if (end == text.size()) break;
      continue;
    }

    const std::size_t arity = expected_arity(st.command);
    if (arity == 0) {
      if (strictness == Strictness::strict) {
        throw ParseError(line_no, st.command_column, "unknown command '" + st.command + "'");
      }
      result.warnings.push_back({line_no, "skipped unknown command '" + st.command + "'"});
      if (end == text.size()) break;
      continue;
    }
    if (st.args.size() != arity) {
      throw ParseError(line_no, st.command_column,
                       st.command + " expects " + std::to_string(arity) + " arguments, got " +
                           std::to_string(st.args.size()));
    }
    if (!idents.insert(st.ident).second) {
      throw ParseError(line_no, st.ident_column, "duplicate identifier '" + st.ident + "'");
    }
    const int id = id_from_ident(st, line_no);
    ValueReader values(st, line_no, quantization);

    if (st.command == "Wall") {
      Wall w;
      w.id = id;
      w.a = values.point(0);
      w.b = values.point(3);
      w.height = values.number(6, Slot::length);
      w.thickness = values.number(7, Slot::length);
      wall_ids[st.ident] = id;
      scene.walls.push_back(w);
    } else if (st.command == "Door" || st.command == "Window") {
      Opening o;
      o.id = id;
      o.kind = st.command == "Door" ? OpeningKind::door : OpeningKind::window;
      const Arg& ref = st.args[0];
      if (ref.kind == ArgKind::string) {
        throw ParseError(line_no, ref.column, "wall reference must be an identifier or integer id");
      }
      if (ref.kind == ArgKind::number) {
        if (!ref.integral) throw ParseError(line_no, ref.column, "wall id must be an integer");
        o.wall_id = static_cast<int>(ref.value);
        pending.push_back({scene.openings.size(), "", line_no, ref.column});
      } else {
        pending.push_back({scene.openings.size(), ref.text, line_no, ref.column});
      }
      o.center = values.point(1);
      o.width = values.number(4, Slot::length);
      o.height = values.number(5, Slot::length);
      scene.openings.push_back(o);
    } else {
      OrientedBox3D b;
      b.id = id;
      const Arg& cat = st.args[0];
      if (cat.kind == ArgKind::number) {
        throw ParseError(line_no, cat.column, "Bbox category must be an identifier or quoted string");
      }
      b.category = cat.text;
      b.center = values.point(1);
      b.angle_z = values.number(4, Slot::angle);
      b.scale = {values.number(5, Slot::length), values.number(6, Slot::length), values.number(7, Slot::length)};
      scene.boxes.push_back(b);
    }
    if (end == text.size()) break;
  }

  for (const auto& ref : pending) {
    Opening& o = scene.openings[ref.opening_index];
    if (ref.wall_ident.empty()) {
      if (!scene.find_wall(o.wall_id)) {
        throw ParseError(ref.line, ref.column, "unresolvable wall reference " + std::to_string(o.wall_id));
      }
      continue;
    }
    auto it = wall_ids.find(ref.wall_ident);
    if (it == wall_ids.end()) {
      throw ParseError(ref.line, ref.column, "unresolvable wall reference '" + ref.wall_ident + "'");
    }
    o.wall_id = it->second;
  }
  return result;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

std::string fixed3(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  std::string s(buf);
  if (s == "-0.000") s = "0.000";
  return s;
}

class Emitter {
 public:
  explicit Emitter(const std::optional<QuantizationSpec>& spec) : spec_(spec) {}

  void coord(std::string& out, double v, Axis axis) const {
    out += spec_ ? std::to_string(quantize_coord(v, *spec_, axis)) : fixed3(v);
  }
  void length(std::string& out, double v) const {
    out += spec_ ? std::to_string(quantize_length(v, *spec_)) : fixed3(v);
  }
  void angle(std::string& out, double v) const {
    out += spec_ ? std::to_string(quantize_angle(v, *spec_)) : fixed3(v);
  }
  void point(std::string& out, const Vec3& p) const {
    coord(out, p.x(), Axis::x);
    out += ',';
    coord(out, p.y(), Axis::y);
    out += ',';
    coord(out, p.z(), Axis::z);
  }

 private:
  const std::optional<QuantizationSpec>& spec_;
};

std::string category_token(const std::string& category) {
  return is_identifier(category) ? category : "\"" + category + "\"";
}

}  // namespace

std::string serialize_scene(const Scene& scene, const std::optional<QuantizationSpec>& quantization) {
  require_valid(scene);
  if (quantization) quantization->check();
  const Scene ordered = canonicalize(scene);
  const Emitter emit(quantization);
  std::string out;

  for (const auto& w : ordered.walls) {
    out += "wall_" + std::to_string(w.id) + "=Wall(";
    emit.point(out, w.a);
    out += ',';
    emit.point(out, w.b);
    out += ',';
    emit.length(out, w.height);
    out += ',';
    emit.length(out, w.thickness);
    out += ")\n";
  }
  for (const auto& o : ordered.openings) {
    const bool door = o.kind == OpeningKind::door;
    out += (door ? "door_" : "window_") + std::to_string(o.id) + (door ? "=Door(" : "=Window(");
    out += "wall_" + std::to_string(o.wall_id) + ",";
    emit.point(out, o.center);
    out += ',';
    emit.length(out, o.width);
    out += ',';
    emit.length(out, o.height);
    out += ")\n";
  }
  for (const auto& b : ordered.boxes) {
    out += "bbox_" + std::to_string(b.id) + "=Bbox(" + category_token(b.category) + ",";
    emit.point(out, b.center);
    out += ',';
    emit.angle(out, b.angle_z);
    for (int a = 0; a < 3; ++a) {
      out += ',';
      emit.length(out, b.scale[a]);
    }
    out += ")\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Validation

namespace {

constexpr double kGeomEps = 1e-9;

bool valid_category(const std::string& c) {
  if (c.empty()) return false;
  return std::none_of(c.begin(), c.end(), [](char ch) {
    return ch == '"' || ch == '\n' || ch == '\r' || static_cast<unsigned char>(ch) < 0x20;
  });
}

void check_ids(std::vector<Violation>& out, Family family, const std::vector<int>& ids) {
  std::set<int> seen;
  for (int id : ids) {
    if (!seen.insert(id).second) {
      out.push_back({{family, id}, "duplicate_id", "id appears more than once"});
    }
  }
  const int n = static_cast<int>(ids.size());
  for (int id : seen) {
    if (id < 0 || id >= n) {
      out.push_back({{family, id}, "non_dense_id", "ids must be exactly 0.." + std::to_string(n - 1)});
    }
  }
}

}  // namespace

std::vector<Violation> validate_scene(const Scene& scene, const ValidationOptions& options) {
  std::vector<Violation> out;
  const double tol = options.opening_tolerance;

  for (const auto& w : scene.walls) {
    const ElementRef ref{Family::wall, w.id};
    if (!w.a.allFinite() || !w.b.allFinite() || !std::isfinite(w.height) || !std::isfinite(w.thickness)) {
      out.push_back({ref, "finite_values", "non-finite parameter"});
      continue;
    }
    if (!(w.height > 0.0)) out.push_back({ref, "positive_height", "height must be > 0"});
    if (!(w.thickness >= 0.0)) out.push_back({ref, "non_negative_thickness", "thickness must be >= 0"});
    if ((w.b - w.a).norm() <= kGeomEps) out.push_back({ref, "non_degenerate_baseline", "baseline has zero length"});
    if (std::fabs(w.a.z() - w.b.z()) > kGeomEps) {
      out.push_back({ref, "horizontal_baseline", "baseline endpoints differ in z"});
    }
  }

  for (const auto& o : scene.openings) {
    const ElementRef ref{family_of(o.kind), o.id};
    if (!o.center.allFinite() || !std::isfinite(o.width) || !std::isfinite(o.height)) {
      out.push_back({ref, "finite_values", "non-finite parameter"});
      continue;
    }
    if (!(o.width > 0.0)) out.push_back({ref, "positive_width", "width must be > 0"});
    if (!(o.height > 0.0)) out.push_back({ref, "positive_height", "height must be > 0"});
    const Wall* w = scene.find_wall(o.wall_id);
    if (!w) {
      out.push_back({ref, "dangling_wall_ref", "wall_" + std::to_string(o.wall_id) + " does not exist"});
      continue;
    }
    const Vec3 base = w->b - w->a;
    const Vec3 horizontal(base.x(), base.y(), 0.0);
    const double length = horizontal.norm();
    if (length <= kGeomEps || !w->a.allFinite() || !w->b.allFinite()) continue;
    const Vec3 dir = horizontal / length;
    const Vec3 normal(-dir.y(), dir.x(), 0.0);
    const Vec3 rel = o.center - w->a;
    if (std::fabs(rel.dot(normal)) > tol) {
      out.push_back({ref, "on_wall_plane", "center is off the host wall plane"});
    }
    const double u = rel.dot(dir);
    const double z = rel.z();
    const bool inside = u - o.width / 2 >= -tol && u + o.width / 2 <= length + tol && z - o.height / 2 >= -tol &&
                        z + o.height / 2 <= w->height + tol;
    if (!inside) out.push_back({ref, "inside_wall", "opening rectangle extends past the host wall"});
  }

  for (const auto& b : scene.boxes) {
    const ElementRef ref{Family::bbox, b.id};
    if (!b.center.allFinite() || !std::isfinite(b.angle_z) || !b.scale.allFinite()) {
      out.push_back({ref, "finite_values", "non-finite parameter"});
      continue;
    }
    if (!(b.scale.minCoeff() > 0.0)) out.push_back({ref, "positive_scale", "all extents must be > 0"});
    if (!(b.angle_z >= -std::numbers::pi && b.angle_z < std::numbers::pi)) {
      out.push_back({ref, "normalized_angle", "angle_z must lie in [-pi, pi)"});
    }
    if (!valid_category(b.category)) out.push_back({ref, "valid_category", "category must be non-empty text"});
  }

  std::vector<int> wall_ids, door_ids, window_ids, box_ids;
  for (const auto& w : scene.walls) wall_ids.push_back(w.id);
  for (const auto& o : scene.openings) (o.kind == OpeningKind::door ? door_ids : window_ids).push_back(o.id);
  for (const auto& b : scene.boxes) box_ids.push_back(b.id);
  check_ids(out, Family::wall, wall_ids);
  check_ids(out, Family::door, door_ids);
  check_ids(out, Family::window, window_ids);
  check_ids(out, Family::bbox, box_ids);
  return out;
}

std::string to_string(const Violation& v) { return v.element.name() + ": " + v.rule + " (" + v.detail + ")"; }

void require_valid(const Scene& scene, const ValidationOptions& options) {
  const auto violations = validate_scene(scene, options);
  if (violations.empty()) return;
  std::ostringstream msg;
  msg << "invalid scene: " << to_string(violations.front());
  if (violations.size() > 1) msg << " (+" << violations.size() - 1 << " more)";
  throw ValidationError(msg.str());
}

}  // namespace scenekit
