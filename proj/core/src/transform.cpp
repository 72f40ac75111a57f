#include "scenekit/transform.hpp"

#include "scenekit/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace scenekit {

Vec3 Similarity::apply(const Vec3& p) const {
  const double c = std::cos(rotation_z);
  const double s = std::sin(rotation_z);
  return Vec3(scale * (c * p.x() - s * p.y()) + translation.x(), scale * (s * p.x() + c * p.y()) + translation.y(),
              scale * p.z() + translation.z());
}

Similarity Similarity::compose(const Similarity& first, const Similarity& second) {
  Similarity out;
  out.rotation_z = first.rotation_z + second.rotation_z;
  out.scale = first.scale * second.scale;
  // second(first(0)) is the combined translation.
  out.translation = second.apply(first.translation);
  return out;
}

namespace {

void check_scale(double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) throw std::invalid_argument("similarity scale must be > 0");
}

}  // namespace

Scene apply_similarity(const Scene& scene, const Similarity& t) {
  check_scale(t.scale);
  Scene out = scene;
  for (auto& w : out.walls) {
    w.a = t.apply(w.a);
    w.b = t.apply(w.b);
    w.height *= t.scale;
    w.thickness *= t.scale;
  }
  for (auto& o : out.openings) {
    o.center = t.apply(o.center);
    o.width *= t.scale;
    o.height *= t.scale;
  }
  for (auto& b : out.boxes) {
    b.center = t.apply(b.center);
    b.scale *= t.scale;
    b.angle_z = normalize_angle(b.angle_z + t.rotation_z);
  }
  return out;
}

Scene apply_similarity(const Scene& scene, double rotation_z, double scale, const Vec3& translation) {
  return apply_similarity(scene, Similarity{rotation_z, scale, translation});
}

PointCloud apply_similarity(const PointCloud& cloud, const Similarity& t) {
  check_scale(t.scale);
  PointCloud out = cloud;
  for (auto& p : out.points) p.position = t.apply(p.position);
  return out;
}

namespace {

void extend(Vec3& lo, bool& any, const Vec3& p) {
  lo = any ? lo.cwiseMin(p) : p;
  any = true;
}

}  // namespace

NormalizedScene normalize_scene(const Scene& scene, const std::optional<PointCloud>& cloud,
                                const QuantizationSpec& base) {
  Vec3 lo = Vec3::Zero();
  bool any = false;
  for (const auto& w : scene.walls) {
    extend(lo, any, w.a);
    extend(lo, any, w.b);
    extend(lo, any, w.a + Vec3(0, 0, w.height));
    extend(lo, any, w.b + Vec3(0, 0, w.height));
  }
  for (const auto& o : scene.openings) {
    if (scene.find_wall(o.wall_id)) {
      for (const auto& c : element_quad(o, scene).corners) extend(lo, any, c);
    } else {
      extend(lo, any, o.center - Vec3(o.width / 2, o.width / 2, o.height / 2));
    }
  }
  for (const auto& b : scene.boxes) {
    for (const auto& c : box_geometry(b).corners) extend(lo, any, c);
  }
  if (cloud) {
    for (const auto& p : cloud->points) extend(lo, any, p.position);
  }
  if (!any) throw std::invalid_argument("normalize_scene: scene and cloud are both empty");

  const Similarity shift{0.0, 1.0, -lo};
  NormalizedScene out;
  out.scene = scene;
  for (auto& w : out.scene.walls) {
    w.a -= lo;
    w.b -= lo;
  }
  for (auto& o : out.scene.openings) o.center -= lo;
  for (auto& b : out.scene.boxes) b.center -= lo;
  if (cloud) out.cloud = apply_similarity(*cloud, shift);
  out.spec = base;
  out.spec.origin = lo;
  return out;
}

}  // namespace scenekit
