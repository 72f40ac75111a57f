#pragma once

#include "scenekit/quantize.hpp"
#include "scenekit/scene.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace scenekit {

// Script format, one command per line (LF endings, `#` starts a comment):
//
//   wall_0=Wall(ax,ay,az,bx,by,bz,height,thickness)
//   door_0=Door(wall_0,cx,cy,cz,width,height)
//   window_0=Window(wall_0,cx,cy,cz,width,height)
//   bbox_0=Bbox(category,cx,cy,cz,angle_z,sx,sy,sz)
//
// Identifiers carry the element id as a trailing `_<n>` suffix.

enum class Strictness { strict, lenient };

struct ParseWarning {
  std::size_t line = 0;
  std::string message;
};

struct ParseResult {
  Scene scene;
  std::vector<ParseWarning> warnings;
};

/// Parses script text. Throws ParseError on malformed lines, arity mismatches,
/// unresolvable wall references and duplicate identifiers. Unknown commands
/// are errors in strict mode and warnings in lenient mode.
///
/// When `quantization` is given, numeric arguments are read as bin indices and
/// dequantized (positions per axis, extents as lengths, angles as angle bins).
ParseResult parse_script(std::string_view text, Strictness strictness = Strictness::strict,
                         const std::optional<QuantizationSpec>& quantization = std::nullopt);

/// Deterministic text form: walls, doors, windows, boxes, each by ascending
/// id. Decimals use three places; with a spec, values are emitted as bin
/// indices. Throws ValidationError if the scene is invalid.
std::string serialize_scene(const Scene& scene,
                            const std::optional<QuantizationSpec>& quantization = std::nullopt);

struct Violation {
  ElementRef element;
  std::string rule;
  std::string detail;
};

struct ValidationOptions {
  /// How far an opening rectangle may stick out of its host wall (m).
  double opening_tolerance = 0.01;
};

/// Every broken invariant, in element order. Empty iff the scene is valid.
std::vector<Violation> validate_scene(const Scene& scene, const ValidationOptions& options = {});

/// Throws ValidationError listing the first violations if any exist.
void require_valid(const Scene& scene, const ValidationOptions& options = {});

std::string to_string(const Violation& violation);

}  // namespace scenekit
