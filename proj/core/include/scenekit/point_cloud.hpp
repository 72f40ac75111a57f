#pragma once

#include "scenekit/scene.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace scenekit {

/// One XYZ+RGB sample. Colors are in [0, 1].
struct Point {
  Vec3 position = Vec3::Zero();
  Vec3 color = Vec3::Zero();

  bool operator==(const Point&) const = default;
};

struct Aabb {
  Vec3 min;
  Vec3 max;

  Vec3 extent() const { return max - min; }
  Vec3 center() const { return 0.5 * (min + max); }
};

/// N x 6 point set.
struct PointCloud {
  std::vector<Point> points;

  std::size_t size() const noexcept { return points.size(); }
  bool empty() const noexcept { return points.empty(); }

  bool operator==(const PointCloud&) const = default;
};

std::optional<Aabb> bounds(const PointCloud& cloud);

/// Finite coordinates and colors within [0, 1].
bool is_well_formed(const PointCloud& cloud);

}  // namespace scenekit
