#include "scenekit/scene.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace scenekit {

const Wall* Scene::find_wall(int id) const noexcept {
  for (const auto& wall : walls) {
    if (wall.id == id) return &wall;
  }
  return nullptr;
}

std::string_view family_name(Family family) noexcept {
  switch (family) {
    case Family::wall:
      return "wall";
    case Family::door:
      return "door";
    case Family::window:
      return "window";
    case Family::bbox:
      return "bbox";
  }
  return "";
}

Family family_of(OpeningKind kind) noexcept { return kind == OpeningKind::door ? Family::door : Family::window; }

std::optional<Family> family_from_name(std::string_view name) noexcept {
  for (Family f : {Family::wall, Family::door, Family::window, Family::bbox}) {
    if (family_name(f) == name) return f;
  }
  return std::nullopt;
}

std::string ElementRef::name() const { return std::string(family_name(family)) + "_" + std::to_string(id); }

Scene canonicalize(Scene scene) {
  auto by_id = [](const auto& x, const auto& y) { return x.id < y.id; };
  std::stable_sort(scene.walls.begin(), scene.walls.end(), by_id);
  std::stable_sort(scene.openings.begin(), scene.openings.end(), [](const Opening& x, const Opening& y) {
    if (x.kind != y.kind) return x.kind == OpeningKind::door;
    return x.id < y.id;
  });
  std::stable_sort(scene.boxes.begin(), scene.boxes.end(), by_id);
  return scene;
}

double normalize_angle(double radians) noexcept {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  if (radians >= -std::numbers::pi && radians < std::numbers::pi) return radians;
  double r = std::fmod(radians + std::numbers::pi, two_pi);
  if (r < 0.0) r += two_pi;
  double out = r - std::numbers::pi;
  if (out >= std::numbers::pi) out = -std::numbers::pi;
  return out;
}

double angle_distance(double a, double b) noexcept {
  double d = std::fabs(normalize_angle(a - b));
  return std::min(d, 2.0 * std::numbers::pi - d);
}

namespace {

bool close(double a, double b, double tol) { return std::fabs(a - b) <= tol; }
bool close(const Vec3& a, const Vec3& b, double tol) { return (a - b).cwiseAbs().maxCoeff() <= tol; }

}  // namespace

bool approx_equal(const Scene& lhs, const Scene& rhs, double tolerance) {
  if (lhs.walls.size() != rhs.walls.size() || lhs.openings.size() != rhs.openings.size() ||
      lhs.boxes.size() != rhs.boxes.size()) {
    return false;
  }
  for (std::size_t i = 0; i < lhs.walls.size(); ++i) {
    const auto& x = lhs.walls[i];
    const auto& y = rhs.walls[i];
    if (x.id != y.id || !close(x.a, y.a, tolerance) || !close(x.b, y.b, tolerance) ||
        !close(x.height, y.height, tolerance) || !close(x.thickness, y.thickness, tolerance)) {
      return false;
    }
  }
  for (std::size_t i = 0; i < lhs.openings.size(); ++i) {
    const auto& x = lhs.openings[i];
    const auto& y = rhs.openings[i];
    if (x.id != y.id || x.kind != y.kind || x.wall_id != y.wall_id || !close(x.center, y.center, tolerance) ||
        !close(x.width, y.width, tolerance) || !close(x.height, y.height, tolerance)) {
      return false;
    }
  }
  for (std::size_t i = 0; i < lhs.boxes.size(); ++i) {
    const auto& x = lhs.boxes[i];
    const auto& y = rhs.boxes[i];
    if (x.id != y.id || x.category != y.category || !close(x.center, y.center, tolerance) ||
        angle_distance(x.angle_z, y.angle_z) > tolerance || !close(x.scale, y.scale, tolerance)) {
      return false;
    }
  }
  return true;
}

}  // namespace scenekit
