#include "scenekit/geometry.hpp"

#include "scenekit/error.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>

namespace scenekit {

namespace {

const Vec3 kUp(0.0, 0.0, 1.0);

double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

// Unit horizontal direction of a wall baseline.
Vec3 baseline_direction(const Wall& wall) {
  const Vec3 d = wall.b - wall.a;
  const double len = d.norm();
  if (!(len > kClipEpsilon)) throw GeometryError("wall_" + std::to_string(wall.id) + " has a zero-length baseline");
  return d / len;
}

}  // namespace

PlaneQuad element_quad(const Wall& wall) {
  const Vec3 dir = baseline_direction(wall);
  const Vec3 up = wall.height * kUp;
  PlaneQuad quad;
  quad.corners = {wall.a, wall.b, wall.b + up, wall.a + up};
  quad.normal = dir.cross(kUp).normalized();
  return quad;
}

PlaneQuad element_quad(const Opening& opening, const Scene& scene) {
  const Wall* wall = scene.find_wall(opening.wall_id);
  if (!wall) {
    throw GeometryError("opening references missing wall_" + std::to_string(opening.wall_id));
  }
  const Vec3 dir = baseline_direction(*wall);
  const Vec3 normal = dir.cross(kUp).normalized();
  // Drop the center onto the wall plane before building the rectangle.
  const Vec3 center = opening.center - normal * (opening.center - wall->a).dot(normal);
  const Vec3 half_w = 0.5 * opening.width * dir;
  const Vec3 half_h = 0.5 * opening.height * kUp;
  PlaneQuad quad;
  quad.corners = {center - half_w - half_h, center + half_w - half_h, center + half_w + half_h,
                  center - half_w + half_h};
  quad.normal = normal;
  return quad;
}

double signed_area(const Polygon2D& polygon) noexcept {
  const auto& v = polygon.vertices;
  const std::size_t n = v.size();
  if (n < 3) return 0.0;
  double twice = 0.0;
  for (std::size_t i = 0; i < n; ++i) twice += cross2(v[i], v[(i + 1) % n]);
  return 0.5 * twice;
}

double area(const Polygon2D& polygon) noexcept { return std::fabs(signed_area(polygon)); }

bool is_convex(const Polygon2D& polygon) noexcept {
  const auto& v = polygon.vertices;
  const std::size_t n = v.size();
  if (n < 4) return true;
  int sign = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 e1 = v[(i + 1) % n] - v[i];
    const Vec2 e2 = v[(i + 2) % n] - v[(i + 1) % n];
    const double c = cross2(e1, e2);
    if (std::fabs(c) <= kClipEpsilon * e1.norm() * e2.norm()) continue;
    const int s = c > 0 ? 1 : -1;
    if (sign == 0) {
      sign = s;
    } else if (s != sign) {
      return false;
    }
  }
  return true;
}

Polygon2D project_quad(const PlaneQuad& pred, const PlaneQuad& target) {
  const Vec3& origin = target.corners[0];
  const Vec3 edge = target.corners[1] - origin;
  const Vec3 normal = edge.cross(target.corners[3] - origin);
  if (!(edge.norm() > kClipEpsilon) || !(normal.norm() > kClipEpsilon * edge.norm())) {
    throw GeometryError("projection target quad is degenerate");
  }
  const Vec3 u = edge.normalized();
  const Vec3 v = normal.normalized().cross(u);

  Polygon2D out;
  out.vertices.reserve(4);
  double extent = 0.0;
  for (const auto& corner : pred.corners) {
    const Vec3 rel = corner - origin;
    out.vertices.emplace_back(rel.dot(u), rel.dot(v));
    extent = std::max(extent, out.vertices.back().cwiseAbs().maxCoeff());
  }
  const double a = signed_area(out);
  if (std::fabs(a) <= kClipEpsilon * std::max(1.0, extent)) return {};
  if (a < 0) std::reverse(out.vertices.begin(), out.vertices.end());
  return out;
}

namespace {

// Copy in CCW order; empty if the polygon has no area.
Polygon2D oriented(const Polygon2D& p) {
  const double a = signed_area(p);
  if (a == 0.0) return {};
  Polygon2D out = p;
  if (a < 0) std::reverse(out.vertices.begin(), out.vertices.end());
  return out;
}

}  // namespace

Polygon2D clip_convex(const Polygon2D& subject, const Polygon2D& clip) {
  if (!is_convex(subject) || !is_convex(clip)) throw GeometryError("convex clipping requires convex polygons");
  Polygon2D result = oriented(subject);
  const Polygon2D window = oriented(clip);
  if (result.vertices.empty() || window.vertices.empty()) return {};

  const std::size_t m = window.vertices.size();
  std::vector<Vec2> input;
  for (std::size_t i = 0; i < m && !result.vertices.empty(); ++i) {
    const Vec2& a = window.vertices[i];
    const Vec2 edge = window.vertices[(i + 1) % m] - a;
    const double len = edge.norm();
    if (len == 0.0) continue;
    auto distance = [&](const Vec2& p) { return cross2(edge, p - a) / len; };

    input.swap(result.vertices);
    result.vertices.clear();
    const std::size_t n = input.size();
    for (std::size_t j = 0; j < n; ++j) {
      const Vec2& s = input[(j + n - 1) % n];
      const Vec2& e = input[j];
      const double ds = distance(s);
      const double de = distance(e);
      const bool s_in = ds >= -kClipEpsilon;
      const bool e_in = de >= -kClipEpsilon;
      if (e_in) {
        if (!s_in) result.vertices.push_back(s + (ds / (ds - de)) * (e - s));
        result.vertices.push_back(e);
      } else if (s_in) {
        result.vertices.push_back(s + (ds / (ds - de)) * (e - s));
      }
    }
  }
  if (result.vertices.size() < 3) return {};
  return result;
}

double convex_clip_area(const Polygon2D& subject, const Polygon2D& clip) {
  return std::max(0.0, signed_area(clip_convex(subject, clip)));
}

double iou_planar(const PlaneQuad& pred, const PlaneQuad& gt) {
  const Polygon2D target = project_quad(gt, gt);
  const Polygon2D projected = project_quad(pred, gt);
  if (projected.vertices.empty() || target.vertices.empty()) return 0.0;
  const double inter = convex_clip_area(projected, target);
  const double uni = area(projected) + area(target) - inter;
  if (!(uni > 0.0)) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

BoxGeometry box_geometry(const OrientedBox3D& box) {
  const double c = std::cos(box.angle_z);
  const double s = std::sin(box.angle_z);
  const double hx = 0.5 * box.scale.x();
  const double hy = 0.5 * box.scale.y();
  const double hz = 0.5 * box.scale.z();
  static constexpr double kSigns[4][2] = {{-1, -1}, {1, -1}, {1, 1}, {-1, 1}};

  BoxGeometry g;
  g.z_min = box.center.z() - hz;
  g.z_max = box.center.z() + hz;
  g.footprint.vertices.reserve(4);
  for (int i = 0; i < 4; ++i) {
    const double lx = kSigns[i][0] * hx;
    const double ly = kSigns[i][1] * hy;
    const Vec2 p(box.center.x() + c * lx - s * ly, box.center.y() + s * lx + c * ly);
    g.footprint.vertices.push_back(p);
    g.corners[i] = Vec3(p.x(), p.y(), g.z_min);
    g.corners[i + 4] = Vec3(p.x(), p.y(), g.z_max);
  }
  return g;
}

namespace {

auto box_key(const OrientedBox3D& b) {
  return std::make_tuple(b.center.x(), b.center.y(), b.center.z(), b.angle_z, b.scale.x(), b.scale.y(),
                         b.scale.z());
}

}  // namespace

double iou_box3d(const OrientedBox3D& a, const OrientedBox3D& b) {
  // Evaluate in a canonical argument order so the result is symmetric exactly.
  const bool swap = box_key(b) < box_key(a);
  const OrientedBox3D& first = swap ? b : a;
  const OrientedBox3D& second = swap ? a : b;

  const BoxGeometry ga = box_geometry(first);
  const BoxGeometry gb = box_geometry(second);
  const double overlap_z = std::min(ga.z_max, gb.z_max) - std::max(ga.z_min, gb.z_min);
  if (!(overlap_z > 0.0)) return 0.0;
  const double inter = convex_clip_area(ga.footprint, gb.footprint) * overlap_z;
  const double va = first.scale.prod();
  const double vb = second.scale.prod();
  const double uni = va + vb - inter;
  if (!(uni > 0.0)) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

}  // namespace scenekit
