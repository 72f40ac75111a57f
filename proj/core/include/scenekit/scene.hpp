#pragma once

#include <Eigen/Core>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace scenekit {

/// Right-handed, z-up, meters.
using Vec3 = Eigen::Vector3d;

struct Wall {
  int id = 0;
  Vec3 a = Vec3::Zero();  // baseline start
  Vec3 b = Vec3::Zero();  // baseline end
  double height = 0.0;
  double thickness = 0.0;

  bool operator==(const Wall&) const = default;
};

enum class OpeningKind { door, window };

/// A door or window, attached to a wall by id. `center` is a world point on
/// the host wall's plane; the opening rectangle is axis-aligned in that plane.
struct Opening {
  int id = 0;
  OpeningKind kind = OpeningKind::door;
  int wall_id = 0;
  Vec3 center = Vec3::Zero();
  double width = 0.0;
  double height = 0.0;

  bool operator==(const Opening&) const = default;
};

/// Cuboid rotated about +z by `angle_z` (radians, normalized to [-pi, pi)).
/// `scale` holds the extents along the box's local x/y/z axes.
struct OrientedBox3D {
  int id = 0;
  std::string category;
  Vec3 center = Vec3::Zero();
  double angle_z = 0.0;
  Vec3 scale = Vec3::Ones();

  bool operator==(const OrientedBox3D&) const = default;
};

/// The structured description of one scene: layout (walls, doors, windows)
/// plus object boxes. Element order is preserved exactly as given.
struct Scene {
  std::vector<Wall> walls;
  std::vector<Opening> openings;
  std::vector<OrientedBox3D> boxes;

  bool empty() const noexcept { return walls.empty() && openings.empty() && boxes.empty(); }
  const Wall* find_wall(int id) const noexcept;

  bool operator==(const Scene&) const = default;
};

/// Element families. Ids are unique and dense within a family.
enum class Family { wall, door, window, bbox };

std::string_view family_name(Family family) noexcept;
Family family_of(OpeningKind kind) noexcept;
std::optional<Family> family_from_name(std::string_view name) noexcept;

struct ElementRef {
  Family family = Family::wall;
  int id = 0;

  /// Script identifier, e.g. "door_3".
  std::string name() const;

  auto operator<=>(const ElementRef&) const = default;
};

/// Walls, then doors, then windows, then boxes, each by ascending id: the
/// order serialize_scene emits and parse_script reproduces.
Scene canonicalize(Scene scene);

/// Wraps an angle into [-pi, pi).
double normalize_angle(double radians) noexcept;

/// Smallest absolute difference between two angles, in [0, pi].
double angle_distance(double a, double b) noexcept;

/// Element-wise comparison with an absolute tolerance; box angles compare on
/// the circle so that -pi and pi are equal.
bool approx_equal(const Scene& lhs, const Scene& rhs, double tolerance);

}  // namespace scenekit
