#include "scenekit/point_cloud.hpp"

namespace scenekit {

std::optional<Aabb> bounds(const PointCloud& cloud) {
  if (cloud.empty()) return std::nullopt;
  Aabb box{cloud.points.front().position, cloud.points.front().position};
  for (const auto& p : cloud.points) {
    box.min = box.min.cwiseMin(p.position);
    box.max = box.max.cwiseMax(p.position);
  }
  return box;
}

bool is_well_formed(const PointCloud& cloud) {
  for (const auto& p : cloud.points) {
    if (!p.position.allFinite() || !p.color.allFinite()) return false;
    if (p.color.minCoeff() < 0.0 || p.color.maxCoeff() > 1.0) return false;
  }
  return true;
}

}  // namespace scenekit
